"""Command-line entry points: serve, chat, ingest, replay."""
