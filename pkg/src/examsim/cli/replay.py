"""Deterministic scenario replay against the scripted provider.

Scenario files drive the student side of a session, one action per line:

    @subject <text>        exam subject area (required)
    @topic <text>          starting topic (required)
    @mode practice|exam    defaults to practice
    @language <code>       defaults to en
    answer: <text>         submit a student answer
    hint                   request a hint
    grade                  request a manual grade
    continue: same         continue with the same topic
    continue: new <topic>  continue with a new topic
    continue: conclude     conclude the session

Replay freezes the clock (epoch, one second per tick) and uses sequential
session ids, so the rendered transcript is byte-identical across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone

from examsim.core.engine import ContinuationChoice, ExamEngine, SessionConfig
from examsim.core.session import ExamSession, Mode, TranscriptEntry
from examsim.provider.mock import ScriptedProvider
from examsim.runner import complete_directive

_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


class ScenarioError(ValueError):
    """A scenario file is malformed."""


@dataclass(frozen=True)
class ScenarioAction:
    kind: str  # answer | hint | grade | continue
    text: str | None = None
    choice: ContinuationChoice | None = None


@dataclass
class Scenario:
    subject: str
    topic: str
    mode: Mode = Mode.PRACTICE
    language: str = "en"
    actions: list[ScenarioAction] = field(default_factory=list)


class ReplayClock:
    def __init__(self) -> None:
        self._now = _EPOCH

    def __call__(self) -> datetime:
        current = self._now
        self._now = current + timedelta(seconds=1)
        return current


def _sequential_ids(prefix: str = "session"):
    count = 0

    def factory() -> str:
        nonlocal count
        count += 1
        return f"{prefix}-{count:03d}"

    return factory


def parse_scenario(text: str) -> Scenario:
    subject = topic = None
    mode = Mode.PRACTICE
    language = "en"
    actions: list[ScenarioAction] = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("@subject "):
            subject = stripped[len("@subject "):].strip()
        elif stripped.startswith("@topic "):
            topic = stripped[len("@topic "):].strip()
        elif stripped.startswith("@mode "):
            try:
                mode = Mode(stripped[len("@mode "):].strip().lower())
            except ValueError:
                raise ScenarioError(f"line {line_number}: unknown mode") from None
        elif stripped.startswith("@language "):
            language = stripped[len("@language "):].strip()
        elif stripped.startswith("answer:"):
            answer_text = stripped[len("answer:"):].strip()
            if not answer_text:
                raise ScenarioError(f"line {line_number}: empty answer text")
            actions.append(ScenarioAction(kind="answer", text=answer_text))
        elif stripped == "hint":
            actions.append(ScenarioAction(kind="hint"))
        elif stripped == "grade":
            actions.append(ScenarioAction(kind="grade"))
        elif stripped.startswith("continue:"):
            rest = stripped[len("continue:"):].strip()
            if rest == "same":
                choice = ContinuationChoice.same_topic()
            elif rest == "conclude":
                choice = ContinuationChoice.conclude()
            elif rest.startswith("new "):
                choice = ContinuationChoice.new_topic(rest[len("new "):].strip())
            else:
                raise ScenarioError(f"line {line_number}: bad continue action {rest!r}")
            actions.append(ScenarioAction(kind="continue", choice=choice))
        else:
            raise ScenarioError(f"line {line_number}: unrecognized line {stripped!r}")
    if not subject or not topic:
        raise ScenarioError("scenario must set @subject and @topic")
    if not actions:
        raise ScenarioError("scenario contains no actions")
    return Scenario(subject=subject, topic=topic, mode=mode, language=language, actions=actions)


def _render_entry(lines: list[str], entry: TranscriptEntry, kind_note: str) -> None:
    lines.append(f"[{entry.index:03d}] {entry.role.value} ({kind_note}) @{entry.timestamp.isoformat()}")
    for text_line in (entry.display_text.strip() or "(no displayable text)").splitlines():
        lines.append(f"    {text_line}")


def run_scenario(scenario: Scenario, rules_text: str) -> str:
    """Execute the scenario offline and return the rendered transcript."""
    engine = ExamEngine(clock=ReplayClock(), id_factory=_sequential_ids())
    provider = ScriptedProvider.from_script(rules_text)
    session, directive = engine.create_session(
        SessionConfig(
            subject_area=scenario.subject,
            topic=scenario.topic,
            mode=scenario.mode,
            language=scenario.language,
        )
    )
    lines: list[str] = [
        "=== oral exam rehearsal transcript ===",
        f"session: {session.id}",
        f"subject: {session.subject_area}",
        f"topic: {session.current_topic}",
        f"mode: {session.mode.value}",
        f"language: {session.language}",
        "",
    ]
    rendered_until = 0

    def flush_entries(kind_note: str) -> None:
        nonlocal rendered_until
        for entry in session.transcript[rendered_until:]:
            _render_entry(lines, entry, kind_note)
        rendered_until = len(session.transcript)

    complete_directive(engine, provider, session, directive)
    flush_entries("question")

    for action in scenario.actions:
        if action.kind == "answer":
            directive = engine.submit_answer(session, action.text or "")
            note = "grade" if directive.kind.value == "grade" else "exchange"
        elif action.kind == "hint":
            directive = engine.request_hint(session)
            note = "hint"
        elif action.kind == "grade":
            directive = engine.request_grade(session)
            note = "grade"
        else:
            assert action.choice is not None
            if action.choice.kind == ContinuationChoice.NEW_TOPIC:
                lines.append(f"--- topic changed to: {action.choice.topic}")
            directive = engine.continue_session(session, action.choice)
            note = "closing" if action.choice.kind == ContinuationChoice.CONCLUDE else "question"
        outcome, _ = complete_directive(engine, provider, session, directive)
        flush_entries(note)
        if outcome.grade is not None:
            record = outcome.grade
            lines.append(
                f"--- grade: {record.grade.value} ({record.percent}%) "
                f"trigger={record.trigger.value} topic={record.topic} "
                f"covers={record.questions_covered}"
            )
            lines.append(f"    note: {record.disclaimer}")

    lines.append("")
    lines.append(
        f"=== {session.phase.value}: answers={session.answered_total} "
        f"hints={session.hints_used} grades={len(session.grades)} ==="
    )
    return "\n".join(lines) + "\n"


def final_session_of(scenario: Scenario, rules_text: str) -> ExamSession:
    """Run the scenario and return the finished session (for inspection)."""
    engine = ExamEngine(clock=ReplayClock(), id_factory=_sequential_ids())
    provider = ScriptedProvider.from_script(rules_text)
    session, directive = engine.create_session(
        SessionConfig(
            subject_area=scenario.subject,
            topic=scenario.topic,
            mode=scenario.mode,
            language=scenario.language,
        )
    )
    complete_directive(engine, provider, session, directive)
    for action in scenario.actions:
        if action.kind == "answer":
            directive = engine.submit_answer(session, action.text or "")
        elif action.kind == "hint":
            directive = engine.request_hint(session)
        elif action.kind == "grade":
            directive = engine.request_grade(session)
        else:
            assert action.choice is not None
            directive = engine.continue_session(session, action.choice)
        complete_directive(engine, provider, session, directive)
    return session
