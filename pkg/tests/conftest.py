"""Shared fixtures: frozen clock, sequential ids, scripted rules, drivers."""

from __future__ import annotations

from datetime import datetime, timedelta, timezone

import pytest

from examsim.core.engine import ApplyOutcome, EngineDirective, ExamEngine, SessionConfig
from examsim.core.session import ExamSession, Mode
from examsim.provider.mock import ScriptedProvider

EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


class FrozenClock:
    """Deterministic clock: starts at the epoch, advances one second per call."""

    def __init__(self, start: datetime = EPOCH) -> None:
        self._now = start

    def __call__(self) -> datetime:
        current = self._now
        self._now = current + timedelta(seconds=1)
        return current


class SequentialIds:
    def __init__(self, prefix: str = "session") -> None:
        self._prefix = prefix
        self._count = 0

    def __call__(self) -> str:
        self._count += 1
        return f"{self._prefix}-{self._count:03d}"


# Rules whose grade tags are consistent with the percent mapping
# (80 -> 2.0, 87 -> 1.7); the last rule is the mandatory catch-all.
DEFAULT_RULES = """\
# deterministic examiner for tests
question | 0 | *             | Welcome. First question: what is a process?
hint     | * | *             | %HINT% Think about what the kernel tracks per running program.
grade    | 5 | *             | %GRADE:2.0:80% Solid segment. This rating applies only to the discussed subject area.
grade    | * | *             | %GRADE:1.7:87% Good performance. This rating applies only to the discussed subject area.
conclude | * | *             | Thank you for practicing today. %SESSION_END%
answer   | * | scheduler     | Good. Next question: how does the scheduler pick the next process?
* | * | * | Noted. Next question: explain what happens during a context switch.
"""

UNGRADABLE_RULES = """\
# never emits a grade tag, to exercise the fallback
* | * | * | I would rather keep chatting about processes.
"""


@pytest.fixture
def frozen_engine() -> ExamEngine:
    return ExamEngine(clock=FrozenClock(), id_factory=SequentialIds())


@pytest.fixture
def mock_provider() -> ScriptedProvider:
    return ScriptedProvider.from_script(DEFAULT_RULES)


def make_config(**overrides) -> SessionConfig:
    defaults = dict(
        subject_area="Operating Systems",
        topic="processes",
        mode=Mode.PRACTICE,
        language="en",
    )
    defaults.update(overrides)
    return SessionConfig(**defaults)


def run_directive(
    engine: ExamEngine,
    provider: ScriptedProvider,
    session: ExamSession,
    directive: EngineDirective,
) -> ApplyOutcome:
    """Provider round-trip including the single grade-fallback retry."""
    outcome = engine.apply_provider_response(session, directive, provider.complete(directive.request))
    while outcome.followup is not None:
        followup = outcome.followup
        outcome = engine.apply_provider_response(session, followup, provider.complete(followup.request))
    return outcome


def answered_session(
    engine: ExamEngine,
    provider: ScriptedProvider,
    answers: int,
    **config_overrides,
) -> ExamSession:
    """Create a session and drive the given number of answers through it."""
    session, directive = engine.create_session(make_config(**config_overrides))
    run_directive(engine, provider, session, directive)
    for i in range(answers):
        directive = engine.submit_answer(session, f"Answer {i + 1} about the scheduler.")
        run_directive(engine, provider, session, directive)
    return session
