"""Course-material ingest: chunking to a token budget and excerpt selection."""

from examsim.ingest.chunking import (
    Chunk,
    DEFAULT_CHUNK_TOKEN_BUDGET,
    Document,
    DocumentFormat,
    EmptyDocument,
    chunk_document,
)
from examsim.ingest.selection import select_excerpts

__all__ = [
    "Chunk",
    "DEFAULT_CHUNK_TOKEN_BUDGET",
    "Document",
    "DocumentFormat",
    "EmptyDocument",
    "chunk_document",
    "select_excerpts",
]
