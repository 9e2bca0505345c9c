"""Error types raised by the exam-session core."""

from __future__ import annotations


class ExamCoreError(Exception):
    """Base class for all rule violations reported by the core."""


class InvalidConfig(ExamCoreError):
    """Session configuration rejected (empty subject/topic, bad mode, ...)."""


class InvalidProfile(ExamCoreError):
    """Instruction profile violates its invariants."""


class WrongPhase(ExamCoreError):
    """Operation not defined for the session's current phase."""


class SessionConcluded(WrongPhase):
    """Session is in its terminal phase; nothing may be appended."""


class EmptyAnswer(ExamCoreError):
    """Student answer text is empty or whitespace-only."""


class HintsDisabledInExamMode(ExamCoreError):
    """Hints are only available in practice mode."""


class MinQuestionsNotMet(ExamCoreError):
    """Manual grade requested before enough answers were given."""

    def __init__(self, required: int, actual: int) -> None:
        super().__init__(
            f"a grade requires at least {required} answered questions in the "
            f"current segment, but only {actual} were answered"
        )
        self.required = required
        self.actual = actual


class ProtocolViolation(ExamCoreError):
    """The model failed to produce a demanded tag even after the retry."""


class PercentOutOfRange(ExamCoreError):
    """Percent value outside the closed range [0, 100]."""
