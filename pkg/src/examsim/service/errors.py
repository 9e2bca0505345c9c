"""Exhaustive mapping from engine/provider errors to HTTP responses."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from examsim.core import errors as core_errors
from examsim.provider import errors as provider_errors


@dataclass(frozen=True)
class ApiError:
    code: str
    message: str
    details: dict[str, Any] = field(default_factory=dict)

    def body(self) -> dict[str, Any]:
        error: dict[str, Any] = {"code": self.code, "message": self.message}
        if self.details:
            error["details"] = self.details
        return {"error": error}


# Every concrete error class must appear exactly once; an enumeration test
# asserts there is no unmapped variant.
ERROR_TABLE: dict[type[Exception], tuple[int, str]] = {
    core_errors.InvalidConfig: (400, "invalid_config"),
    core_errors.InvalidProfile: (400, "invalid_profile"),
    core_errors.EmptyAnswer: (400, "empty_answer"),
    core_errors.PercentOutOfRange: (400, "percent_out_of_range"),
    core_errors.HintsDisabledInExamMode: (403, "hints_disabled"),
    core_errors.WrongPhase: (409, "wrong_phase"),
    core_errors.MinQuestionsNotMet: (409, "min_questions_not_met"),
    core_errors.SessionConcluded: (410, "session_concluded"),
    core_errors.ProtocolViolation: (502, "protocol_violation"),
    provider_errors.Timeout: (502, "provider_unavailable"),
    provider_errors.RateLimited: (502, "provider_unavailable"),
    provider_errors.ProtocolError: (502, "provider_unavailable"),
    provider_errors.AuthError: (502, "provider_unavailable"),
}


def map_exception(exc: Exception) -> tuple[int, ApiError]:
    """Exact-type lookup; falls back to the nearest mapped base class."""
    entry = ERROR_TABLE.get(type(exc))
    if entry is None:
        for klass in type(exc).__mro__:
            if klass in ERROR_TABLE:
                entry = ERROR_TABLE[klass]
                break
    if entry is None:
        raise exc
    status, code = entry
    details: dict[str, Any] = {}
    if isinstance(exc, core_errors.MinQuestionsNotMet):
        details = {"required": exc.required, "actual": exc.actual}
    return status, ApiError(code=code, message=str(exc), details=details)
