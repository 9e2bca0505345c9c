"""Split course documents into contiguous chunks under a token budget.

Chunks tile the document body exactly: concatenating chunk texts in order
reproduces the body byte for byte, so excerpts can always be traced back to
their source span.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field

from examsim.tokens import estimate_tokens

DEFAULT_CHUNK_TOKEN_BUDGET = 800

_BLANK_RUN_RE = re.compile(r"\n[ \t]*\n+")
_HEADING_RE = re.compile(r"^#{1,6}[ \t]", re.MULTILINE)
_SENTENCE_SPLIT_RE = re.compile(r"(?<=[.!?])\s+")


class EmptyDocument(ValueError):
    """Document body is empty; nothing to chunk."""


class DocumentFormat(str, enum.Enum):
    PLAIN_TEXT = "plain"
    MARKDOWN = "markdown"


@dataclass(frozen=True)
class Chunk:
    text: str
    estimated_tokens: int
    source_span: tuple[int, int]


@dataclass
class Document:
    id: str
    title: str
    body: str
    format: DocumentFormat = DocumentFormat.PLAIN_TEXT
    chunks: tuple[Chunk, ...] = field(default=())


def _segment_starts(body: str, fmt: DocumentFormat) -> list[int]:
    """Offsets where a new paragraph segment begins (0 always included)."""
    starts = {0}
    for match in _BLANK_RUN_RE.finditer(body):
        starts.add(match.end())
    if fmt is DocumentFormat.MARKDOWN:
        for match in _HEADING_RE.finditer(body):
            starts.add(match.start())
    starts.discard(len(body))
    return sorted(starts)


def _split_oversize(body: str, start: int, end: int, budget: int) -> list[tuple[int, int]]:
    """Break one oversize segment at sentence boundaries, then hard-split."""
    max_chars = budget * 4
    sentence_starts = [start]
    for match in _SENTENCE_SPLIT_RE.finditer(body, start, end):
        if match.end() < end:
            sentence_starts.append(match.end())
    pieces: list[tuple[int, int]] = []
    for i, piece_start in enumerate(sentence_starts):
        piece_end = sentence_starts[i + 1] if i + 1 < len(sentence_starts) else end
        cursor = piece_start
        while piece_end - cursor > max_chars:
            pieces.append((cursor, cursor + max_chars))
            cursor += max_chars
        pieces.append((cursor, piece_end))
    return pieces


def chunk_document(document: Document, chunk_token_budget: int = DEFAULT_CHUNK_TOKEN_BUDGET) -> Document:
    """Return a copy of the document with its chunk list populated.

    Paragraphs (blank-line separated; markdown headings always open a new
    chunk) are merged greedily while the estimate stays within the budget.
    """
    body = document.body
    if not body:
        raise EmptyDocument(f"document {document.id!r} has an empty body")

    starts = _segment_starts(body, document.format)
    heading_starts = (
        {match.start() for match in _HEADING_RE.finditer(body)}
        if document.format is DocumentFormat.MARKDOWN
        else set()
    )

    segments: list[tuple[int, int]] = []
    for i, start in enumerate(starts):
        end = starts[i + 1] if i + 1 < len(starts) else len(body)
        if estimate_tokens(body[start:end]) > chunk_token_budget:
            segments.extend(_split_oversize(body, start, end, chunk_token_budget))
        else:
            segments.append((start, end))

    chunks: list[Chunk] = []
    open_start: int | None = None
    open_end = 0
    for start, end in segments:
        if open_start is None:
            open_start, open_end = start, end
            continue
        merged_fits = estimate_tokens(body[open_start:end]) <= chunk_token_budget
        if start in heading_starts or not merged_fits:
            chunks.append(_make_chunk(body, open_start, open_end))
            open_start, open_end = start, end
        else:
            open_end = end
    if open_start is not None:
        chunks.append(_make_chunk(body, open_start, open_end))

    return Document(
        id=document.id,
        title=document.title,
        body=body,
        format=document.format,
        chunks=tuple(chunks),
    )


def _make_chunk(body: str, start: int, end: int) -> Chunk:
    text = body[start:end]
    return Chunk(text=text, estimated_tokens=estimate_tokens(text), source_span=(start, end))
