"""Request/response contract shared by every chat-completion backend."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Protocol

from examsim.tokens import estimate_tokens

DEFAULT_REQUEST_TOKEN_BUDGET = 8000

EXAMINER_ROLE = "examiner"
STUDENT_ROLE = "student"


@dataclass(frozen=True)
class ProviderRequest:
    """One stateless completion request.

    transcript holds (role, text) pairs with roles "examiner"/"student",
    already alternating (hint replies are mapped to examiner upstream).
    directive_kind and answered_in_segment describe the protocol step being
    played; the scripted mock matches on them, HTTP transports ignore them.
    """

    instructions: str
    transcript: tuple[tuple[str, str], ...] = ()
    directive_note: str | None = None
    temperature: float = 0.2
    max_output_tokens: int = 1024
    directive_kind: str | None = None
    answered_in_segment: int | None = None

    def __post_init__(self) -> None:
        if not self.instructions:
            raise ValueError("instructions must be non-empty")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError(f"temperature must be in [0, 2], got {self.temperature}")
        if self.max_output_tokens <= 0:
            raise ValueError("max_output_tokens must be positive")

    def last_student_text(self) -> str:
        for role, text in reversed(self.transcript):
            if role == STUDENT_ROLE:
                return text
        return ""


@dataclass(frozen=True)
class ProviderResponse:
    text: str
    usage: dict[str, int] | None = None
    latency_ms: float = 0.0


class Provider(Protocol):
    """Anything that can complete a request; safe for concurrent calls."""

    def complete(self, request: ProviderRequest) -> ProviderResponse: ...


def estimated_request_tokens(request: ProviderRequest) -> int:
    total = estimate_tokens(request.instructions)
    if request.directive_note:
        total += estimate_tokens(request.directive_note)
    for _, text in request.transcript:
        total += estimate_tokens(text)
    return total


def fit_to_budget(
    request: ProviderRequest, budget: int = DEFAULT_REQUEST_TOKEN_BUDGET
) -> ProviderRequest:
    """Drop the oldest transcript pairs until the request fits the budget.

    Instructions and directive note are never dropped, and the newest two
    entries (the open question and the pending answer) are always kept.
    """
    transcript = request.transcript
    while estimated_request_tokens(replace(request, transcript=transcript)) > budget and len(transcript) > 2:
        transcript = transcript[2:]
    if transcript is request.transcript:
        return request
    return replace(request, transcript=transcript)
