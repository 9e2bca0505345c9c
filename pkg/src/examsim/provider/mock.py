"""Deterministic scripted provider for offline runs and golden tests.

Rule scripts are plain text, one rule per line:

    step | segment | keyword | response text

step     protocol step of the pending exchange: question, answer, hint,
         grade, or conclude; * matches any.
segment  answered-in-segment count the request reports, or *.
keyword  case-insensitive substring matched against the last student
         message, or *.
response the canned reply; "\\n" escapes become newlines.

Lines starting with # and blank lines are skipped. Matching is first-match
top to bottom, so the final rule must be a catch-all (* | * | *).
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path

from examsim.provider.base import (
    DEFAULT_REQUEST_TOKEN_BUDGET,
    ProviderRequest,
    ProviderResponse,
    fit_to_budget,
)

_KNOWN_STEPS = {"question", "answer", "hint", "grade", "conclude"}


class ScriptError(ValueError):
    """A rule script is malformed."""


@dataclass(frozen=True)
class ScriptRule:
    step: str | None  # None matches any
    segment: int | None
    keyword: str | None
    response: str

    def matches(self, request: ProviderRequest) -> bool:
        if self.step is not None and request.directive_kind != self.step:
            return False
        if self.segment is not None and request.answered_in_segment != self.segment:
            return False
        if self.keyword is not None:
            return self.keyword.lower() in request.last_student_text().lower()
        return True

    @property
    def is_catch_all(self) -> bool:
        return self.step is None and self.segment is None and self.keyword is None


def parse_script(text: str) -> tuple[ScriptRule, ...]:
    rules: list[ScriptRule] = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split("|", 3)
        if len(parts) != 4:
            raise ScriptError(f"line {line_number}: expected 4 '|'-separated fields")
        step_field, segment_field, keyword_field, response_field = (part.strip() for part in parts)
        if step_field == "*":
            step = None
        elif step_field in _KNOWN_STEPS:
            step = step_field
        else:
            raise ScriptError(f"line {line_number}: unknown step {step_field!r}")
        if segment_field == "*":
            segment = None
        else:
            try:
                segment = int(segment_field)
            except ValueError:
                raise ScriptError(f"line {line_number}: segment must be an integer or '*'") from None
        keyword = None if keyword_field == "*" else keyword_field
        response = response_field.replace("\\n", "\n")
        if not response:
            raise ScriptError(f"line {line_number}: empty response text")
        rules.append(ScriptRule(step=step, segment=segment, keyword=keyword, response=response))
    if not rules:
        raise ScriptError("script contains no rules")
    if not rules[-1].is_catch_all:
        raise ScriptError("last rule must be a catch-all (* | * | *)")
    return tuple(rules)


class ScriptedProvider:
    """First-match rule table; immutable after construction, hence thread-safe."""

    def __init__(
        self,
        rules: tuple[ScriptRule, ...],
        token_budget: int = DEFAULT_REQUEST_TOKEN_BUDGET,
    ) -> None:
        if not rules or not rules[-1].is_catch_all:
            raise ScriptError("rule table requires a final catch-all rule")
        self._rules = tuple(rules)
        self._token_budget = token_budget

    @classmethod
    def from_script(cls, text: str, token_budget: int = DEFAULT_REQUEST_TOKEN_BUDGET) -> "ScriptedProvider":
        return cls(parse_script(text), token_budget=token_budget)

    @classmethod
    def from_path(cls, path: str | Path, token_budget: int = DEFAULT_REQUEST_TOKEN_BUDGET) -> "ScriptedProvider":
        return cls.from_script(Path(path).read_text(encoding="utf-8"), token_budget=token_budget)

    @property
    def rules(self) -> tuple[ScriptRule, ...]:
        return self._rules

    def complete(self, request: ProviderRequest) -> ProviderResponse:
        started = time.perf_counter()
        fitted = fit_to_budget(request, self._token_budget)
        for rule in self._rules:
            if rule.matches(fitted):
                latency_ms = (time.perf_counter() - started) * 1000.0
                return ProviderResponse(text=rule.response, usage=None, latency_ms=latency_ms)
        raise AssertionError("unreachable: catch-all rule guaranteed by constructor")
