"""Oral-exam rehearsal engine, provider clients, ingest, REST service, and CLI."""

__version__ = "0.1.0"
