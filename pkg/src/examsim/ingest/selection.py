"""Pick the chunks most relevant to a topic, within a token budget."""

from __future__ import annotations

import re

from examsim.ingest.chunking import Chunk, Document

_WORD_RE = re.compile(r"\w+", re.UNICODE)
_MIN_TOPIC_WORD_LEN = 3


def _words(text: str) -> set[str]:
    return {word.lower() for word in _WORD_RE.findall(text)}


def topic_words(topic: str) -> set[str]:
    return {word for word in _words(topic) if len(word) >= _MIN_TOPIC_WORD_LEN}


def score_chunk(chunk: Chunk, words: set[str]) -> int:
    """Number of distinct topic words occurring in the chunk (case-insensitive)."""
    return len(words & _words(chunk.text))


def select_excerpts(documents: list[Document], topic: str, budget_tokens: int) -> list[Chunk]:
    """Highest-scoring chunks whose cumulative estimate fits the budget.

    Candidates with zero score are never selected. Ties rank by document
    order, then chunk order. Selection is the maximal prefix of that
    ranking that stays within budget_tokens, so the result is fully
    deterministic for equal inputs.
    """
    if budget_tokens <= 0:
        raise ValueError(f"budget_tokens must be positive, got {budget_tokens}")
    words = topic_words(topic)
    candidates: list[tuple[int, int, int, Chunk]] = []
    for doc_index, document in enumerate(documents):
        for chunk_index, chunk in enumerate(document.chunks):
            score = score_chunk(chunk, words)
            if score > 0:
                candidates.append((score, doc_index, chunk_index, chunk))
    candidates.sort(key=lambda item: (-item[0], item[1], item[2]))

    selected: list[Chunk] = []
    used = 0
    for _, _, _, chunk in candidates:
        if used + chunk.estimated_tokens > budget_tokens:
            break
        selected.append(chunk)
        used += chunk.estimated_tokens
    return selected
