"""Tiny language-mismatch heuristic for the exam-language reminder.

The goal is only to notice when the student is clearly writing in another
language so the next prompt can carry the proficiency reminder; fidelity
beyond that is out of scope.
"""

from __future__ import annotations

import re

_WORD_RE = re.compile(r"[^\W\d_]+", re.UNICODE)

_MARKERS: dict[str, frozenset[str]] = {
    "en": frozenset(
        "the and is are was were of to in that this with for what which how why".split()
    ),
    "de": frozenset(
        "der die das und ist sind war ein eine nicht mit für von wie warum wird".split()
    ),
    "fr": frozenset(
        "le la les et est une des pas avec pour qui que dans sont".split()
    ),
    "es": frozenset(
        "el la los las es una que con para por donde como son está".split()
    ),
}

# Languages whose standard orthography is Latin-based; a mostly non-Latin
# answer mismatches any of them. Latin letters live below U+0250.
_LATIN_SCRIPT_LANGUAGES = frozenset({"en", "de", "fr", "es", "it", "pt", "nl"})
_LATIN_MAX_CODEPOINT = 0x024F


def _primary_subtag(language: str) -> str:
    return language.split("-")[0].strip().lower()


def _non_latin_ratio(text: str) -> float:
    letters = [ch for ch in text if ch.isalpha()]
    if not letters:
        return 0.0
    non_latin = sum(1 for ch in letters if ord(ch) > _LATIN_MAX_CODEPOINT)
    return non_latin / len(letters)


def detect_language_mismatch(declared_language: str, student_text: str) -> bool:
    """True when the student text looks like a different language than declared."""
    declared = _primary_subtag(declared_language)
    if declared in _LATIN_SCRIPT_LANGUAGES and _non_latin_ratio(student_text) > 0.5:
        return True
    words = {word.lower() for word in _WORD_RE.findall(student_text)}
    if not words:
        return False
    scores = {code: len(words & markers) for code, markers in _MARKERS.items()}
    declared_score = scores.get(declared, 0)
    best_code, best_score = min(scores.items(), key=lambda item: (-item[1], item[0]))
    return best_code != declared and best_score >= 2 and best_score > declared_score
