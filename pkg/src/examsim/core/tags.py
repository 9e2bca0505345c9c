"""In-band sentinel-tag grammar shared by engine, model prompt, and UI.

A tag is written ``%NAME%`` or ``%NAME:arg1:...:argN%``. Only the registered
names are extracted; anything else (unknown names, wrong arity, bad GRADE
arguments, stray percent signs) is left verbatim in the display text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from examsim.core.grading import GradeValue

REQUEST_HINT_MESSAGE = "%REQUEST_HINT%"

# name -> required argument count (GRADE args are additionally value-checked)
_REGISTERED: dict[str, int] = {
    "REQUEST_HINT": 0,
    "HINT": 0,
    "GRADE": 2,
    "SESSION_END": 0,
}

_TAG_RE = re.compile(r"%([A-Z_]+)((?::[^%:]*)*)%")
_PERCENT_ARG_RE = re.compile(r"\d{1,3}")


@dataclass(frozen=True)
class SentinelTag:
    """One extracted tag occurrence; span is (start, end) offsets in raw_text."""

    name: str
    args: tuple[str, ...]
    span: tuple[int, int]


@dataclass(frozen=True)
class TaggedText:
    raw_text: str
    display_text: str
    tags: tuple[SentinelTag, ...]


def _valid(name: str, args: tuple[str, ...]) -> bool:
    arity = _REGISTERED.get(name)
    if arity is None or len(args) != arity:
        return False
    if name == "GRADE":
        grade_text, percent_text = args
        try:
            GradeValue.from_string(grade_text)
        except ValueError:
            return False
        if _PERCENT_ARG_RE.fullmatch(percent_text) is None:
            return False
        return 0 <= int(percent_text) <= 100
    return True


def _scan(text: str) -> list[SentinelTag]:
    """Left-to-right scan extracting registered tags, skipping invalid candidates.

    A rejected candidate only consumes its opening '%', so its closing '%'
    may still open a valid tag (e.g. "%UNKNOWN%GRADE:2.0:78%").
    """
    tags: list[SentinelTag] = []
    pos = 0
    while True:
        pos = text.find("%", pos)
        if pos < 0:
            return tags
        match = _TAG_RE.match(text, pos)
        if match is None:
            pos += 1
            continue
        name = match.group(1)
        raw_args = match.group(2)
        args = tuple(raw_args.split(":")[1:]) if raw_args else ()
        if _valid(name, args):
            tags.append(SentinelTag(name=name, args=args, span=(match.start(), match.end())))
            pos = match.end()
        else:
            pos += 1


def _delete_spans(text: str, tags: list[SentinelTag]) -> str:
    pieces: list[str] = []
    cursor = 0
    for tag in tags:
        start, end = tag.span
        pieces.append(text[cursor:start])
        cursor = end
    pieces.append(text[cursor:])
    return "".join(pieces)


def parse_tags(raw_text: str) -> TaggedText:
    """Extract all registered tags from raw_text; total on any input.

    The reported tags and their spans refer to raw_text. Deleting the tag
    spans can, on pathological inputs, splice the surrounding text into a
    new tag lexeme; deletion therefore iterates until the display text
    parses clean, so re-parsing display_text always yields zero tags.
    """
    tags = _scan(raw_text)
    display = _delete_spans(raw_text, tags)
    while True:
        residual = _scan(display)
        if not residual:
            return TaggedText(raw_text=raw_text, display_text=display, tags=tuple(tags))
        display = _delete_spans(display, residual)


def grade_from_tag(tag: SentinelTag) -> tuple[GradeValue, int]:
    """Decode a GRADE tag's arguments; the tag is assumed lexically valid."""
    if tag.name != "GRADE":
        raise ValueError(f"not a GRADE tag: {tag.name}")
    return GradeValue.from_string(tag.args[0]), int(tag.args[1])
