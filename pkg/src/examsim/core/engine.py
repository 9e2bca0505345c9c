"""Exam-session state machine: operations, transitions, and grade rules.

Each operation mutates the session, records a pending directive, and returns
the provider request that must be answered before the next student-facing
operation. apply_provider_response() consumes the backend reply and performs
the transition the originating operation demanded. The engine itself never
writes examiner text; every examiner entry comes from a provider response.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable

from examsim.core.errors import (
    EmptyAnswer,
    HintsDisabledInExamMode,
    InvalidConfig,
    MinQuestionsNotMet,
    ProtocolViolation,
    SessionConcluded,
    WrongPhase,
)
from examsim.core.grading import GRADE_SCALE_TEXT, percent_to_grade
from examsim.core.instructions import InstructionProfile, build_instructions
from examsim.core.language import detect_language_mismatch
from examsim.core.session import (
    DirectiveKind,
    ExamSession,
    GradeRecord,
    GradeTrigger,
    Mode,
    PendingDirective,
    Phase,
    Role,
    TranscriptEntry,
)
from examsim.core.tags import REQUEST_HINT_MESSAGE, grade_from_tag, parse_tags
from examsim.provider.base import EXAMINER_ROLE, STUDENT_ROLE, ProviderRequest, ProviderResponse

GRADE_TAG_FORMAT = "%GRADE:<grade>:<percent>%"


@dataclass(frozen=True)
class SessionConfig:
    subject_area: str
    topic: str
    mode: Mode = Mode.PRACTICE
    language: str = "en"
    student_context: dict[str, str] = field(default_factory=dict)
    material_refs: tuple[str, ...] = ()
    material_excerpts: tuple[str, ...] = ()
    min_questions_for_grade: int = 3
    auto_grade_after: int = 5


@dataclass(frozen=True)
class ContinuationChoice:
    """What the student picked at a continuation prompt."""

    SAME_TOPIC = "same_topic"
    NEW_TOPIC = "new_topic"
    CONCLUDE = "conclude"

    kind: str
    topic: str | None = None

    @classmethod
    def same_topic(cls) -> "ContinuationChoice":
        return cls(kind=cls.SAME_TOPIC)

    @classmethod
    def new_topic(cls, topic: str) -> "ContinuationChoice":
        return cls(kind=cls.NEW_TOPIC, topic=topic)

    @classmethod
    def conclude(cls) -> "ContinuationChoice":
        return cls(kind=cls.CONCLUDE)


@dataclass(frozen=True)
class EngineDirective:
    """A pending provider round-trip for one session."""

    session_id: str
    kind: DirectiveKind
    request: ProviderRequest
    trigger: GradeTrigger | None = None
    attempt: int = 1


@dataclass(frozen=True)
class ApplyOutcome:
    """Result of applying a provider response.

    followup is set when the grade fallback demands one more round-trip;
    entry is None in exactly that case.
    """

    entry: TranscriptEntry | None
    grade: GradeRecord | None = None
    followup: EngineDirective | None = None
    concluded: bool = False


def _default_id_factory() -> str:
    return secrets.token_urlsafe(9)


def _utc_now() -> datetime:
    return datetime.now(timezone.utc)


class ExamEngine:
    """Pure, per-session-serial state machine over ExamSession values."""

    def __init__(
        self,
        *,
        clock: Callable[[], datetime] = _utc_now,
        id_factory: Callable[[], str] = _default_id_factory,
    ) -> None:
        self._clock = clock
        self._id_factory = id_factory

    # ------------------------------------------------------------------
    # Operations
    # ------------------------------------------------------------------

    def create_session(
        self, config: SessionConfig, session_id: str | None = None
    ) -> tuple[ExamSession, EngineDirective]:
        subject = config.subject_area.strip()
        topic = config.topic.strip()
        if not subject:
            raise InvalidConfig("subject_area must be non-empty")
        if not topic:
            raise InvalidConfig("topic must be non-empty")
        if not isinstance(config.mode, Mode):
            raise InvalidConfig(f"unknown mode: {config.mode!r}")
        if not config.language.strip():
            raise InvalidConfig("language must be non-empty")
        if not (1 <= config.min_questions_for_grade <= config.auto_grade_after):
            raise InvalidConfig(
                "grade rules must satisfy 1 <= min_questions_for_grade <= auto_grade_after"
            )
        now = self._clock()
        session = ExamSession(
            id=session_id if session_id is not None else self._id_factory(),
            subject_area=subject,
            current_topic=topic,
            mode=config.mode,
            language=config.language.strip(),
            created_at=now,
            updated_at=now,
            student_context=dict(config.student_context),
            min_questions_for_grade=config.min_questions_for_grade,
            auto_grade_after=config.auto_grade_after,
            material_refs=list(config.material_refs),
            material_excerpts=list(config.material_excerpts),
        )
        note = (
            "Begin the oral examination now. Greet the student briefly and "
            f'ask the first question on the topic "{topic}". '
            "This is question 1 of the current segment."
        )
        directive = self._issue(session, DirectiveKind.QUESTION, note)
        return session, directive

    def submit_answer(self, session: ExamSession, student_text: str) -> EngineDirective:
        self._ensure_question_open(session)
        if not student_text.strip():
            raise EmptyAnswer("answer text must be non-empty")
        if session.answered_in_segment >= session.auto_grade_after:
            # Only reachable after an exhausted auto-grade fallback; the
            # segment must be graded (manually) before more answers count.
            raise WrongPhase(
                "the current segment is full; request a grade before answering further"
            )
        session.append_entry(Role.STUDENT, student_text, self._clock())
        session.answered_in_segment += 1
        session.answered_total += 1
        session.language_mismatch = detect_language_mismatch(session.language, student_text)
        session.updated_at = self._clock()

        if session.answered_in_segment == session.auto_grade_after:
            note = (
                f"The student has reached {session.auto_grade_after} answered "
                f'questions in this segment. Rate the student now on the topic '
                f'"{session.current_topic}". Include exactly one tag '
                f"{GRADE_TAG_FORMAT} in your reply, with grade and percent "
                "consistent with the grading scale, and note that the rating "
                "applies only to the discussed subject area."
            )
            return self._issue(
                session, DirectiveKind.GRADE, note, trigger=GradeTrigger.AUTO_AFTER_FIVE
            )
        next_number = session.answered_in_segment + 1
        note = (
            "The student has answered. Respond per your instructions, then "
            f'ask the next question on the topic "{session.current_topic}". '
            f"This is question {next_number} of the current segment."
        )
        return self._issue(session, DirectiveKind.ANSWER, note)

    def request_hint(self, session: ExamSession) -> EngineDirective:
        if session.phase is Phase.CONCLUDED:
            raise SessionConcluded("session is concluded")
        if session.mode is Mode.EXAM:
            raise HintsDisabledInExamMode("hints are disabled in exam mode")
        self._ensure_question_open(session)
        session.append_entry(Role.STUDENT, REQUEST_HINT_MESSAGE, self._clock())
        session.hints_used += 1
        session.updated_at = self._clock()
        note = (
            "The student asked for a hint on the current question. Respond "
            "with a small hint, starting with the tag %HINT%."
        )
        return self._issue(session, DirectiveKind.HINT, note)

    def request_grade(self, session: ExamSession) -> EngineDirective:
        self._ensure_question_open(session)
        if session.answered_in_segment < session.min_questions_for_grade:
            raise MinQuestionsNotMet(
                required=session.min_questions_for_grade,
                actual=session.answered_in_segment,
            )
        note = (
            f'Rate the student now on the topic "{session.current_topic}", '
            f"covering the {session.answered_in_segment} answers given since "
            f"the last rating. Include exactly one tag {GRADE_TAG_FORMAT} in "
            "your reply, with grade and percent consistent with the grading "
            "scale, and note that the rating applies only to the discussed "
            "subject area."
        )
        session.updated_at = self._clock()
        return self._issue(
            session, DirectiveKind.GRADE, note, trigger=GradeTrigger.MANUAL_REQUEST
        )

    def continue_session(
        self,
        session: ExamSession,
        choice: ContinuationChoice,
        *,
        material_excerpts: tuple[str, ...] | None = None,
    ) -> EngineDirective:
        if session.phase is Phase.CONCLUDED:
            raise SessionConcluded("session is concluded")
        if session.phase is not Phase.CONTINUATION_PROMPT:
            raise WrongPhase(f"continuation not offered in phase {session.phase.value}")
        if session.pending is not None:
            raise WrongPhase("a provider round-trip is already pending")

        if choice.kind == ContinuationChoice.CONCLUDE:
            note = (
                "The student chose to conclude the session. Give a brief "
                "closing statement and include the tag %SESSION_END%."
            )
            session.updated_at = self._clock()
            return self._issue(session, DirectiveKind.CONCLUDE, note)

        if choice.kind == ContinuationChoice.NEW_TOPIC:
            topic = (choice.topic or "").strip()
            if not topic:
                raise InvalidConfig("a new topic requires non-empty topic text")
            session.current_topic = topic
            if material_excerpts is not None:
                session.material_excerpts = list(material_excerpts)
            note = (
                f'The student chose to switch to the new topic "{topic}". Ask '
                "the first question on it. This is question 1 of a new segment."
            )
        elif choice.kind == ContinuationChoice.SAME_TOPIC:
            note = (
                "The student chose to continue with the same topic "
                f'"{session.current_topic}". Ask the next question. '
                "This is question 1 of a new segment."
            )
        else:
            raise InvalidConfig(f"unknown continuation choice: {choice.kind!r}")

        session.phase = Phase.QUESTION_OPEN
        session.updated_at = self._clock()
        return self._issue(session, DirectiveKind.QUESTION, note)

    def apply_provider_response(
        self,
        session: ExamSession,
        directive: EngineDirective,
        response: ProviderResponse,
    ) -> ApplyOutcome:
        pending = session.pending
        if (
            pending is None
            or directive.session_id != session.id
            or pending.kind is not directive.kind
            or pending.attempt != directive.attempt
            or pending.trigger is not directive.trigger
        ):
            raise WrongPhase("no matching pending directive for this session")

        if directive.kind is DirectiveKind.GRADE:
            return self._apply_grade(session, directive, response)

        if directive.kind is DirectiveKind.HINT:
            # Untagged hint replies read as ordinary examiner turns.
            tagged = parse_tags(response.text)
            role = Role.HINT if any(tag.name == "HINT" for tag in tagged.tags) else Role.EXAMINER
            entry = session.append_entry(role, response.text, self._clock())
            session.pending = None
            session.updated_at = self._clock()
            return ApplyOutcome(entry=entry)

        entry = session.append_entry(Role.EXAMINER, response.text, self._clock())
        session.pending = None
        concluded = directive.kind is DirectiveKind.CONCLUDE
        if concluded:
            session.phase = Phase.CONCLUDED
        session.updated_at = self._clock()
        return ApplyOutcome(entry=entry, concluded=concluded)

    # ------------------------------------------------------------------
    # Internals
    # ------------------------------------------------------------------

    def _apply_grade(
        self,
        session: ExamSession,
        directive: EngineDirective,
        response: ProviderResponse,
    ) -> ApplyOutcome:
        tagged = parse_tags(response.text)
        record: GradeRecord | None = None
        for tag in tagged.tags:
            if tag.name != "GRADE":
                continue
            grade, percent = grade_from_tag(tag)
            if percent_to_grade(percent) is not grade:
                continue  # inconsistent pair counts as a missing tag
            record = GradeRecord(
                grade=grade,
                percent=percent,
                topic=session.current_topic,
                questions_covered=session.answered_in_segment,
                trigger=directive.trigger or GradeTrigger.MANUAL_REQUEST,
            )
            break

        if record is None:
            if directive.attempt == 1:
                note = (
                    "Your previous reply did not include a valid "
                    f"{GRADE_TAG_FORMAT} tag. Reply again: give exactly one "
                    f"tag {GRADE_TAG_FORMAT} with the grade taken verbatim "
                    "from the grading scale and the percent an integer from "
                    "0 to 100 consistent with the grade, followed by a short "
                    "justification."
                )
                followup = self._issue(
                    session,
                    DirectiveKind.GRADE,
                    note,
                    trigger=directive.trigger,
                    attempt=2,
                )
                return ApplyOutcome(entry=None, followup=followup)
            session.pending = None
            session.updated_at = self._clock()
            raise ProtocolViolation(
                "the model failed twice to emit a valid grade tag; the "
                "session stays open for another grade request"
            )

        entry = session.append_entry(Role.EXAMINER, response.text, self._clock())
        session.grades.append(record)
        session.answered_in_segment = 0
        session.phase = Phase.CONTINUATION_PROMPT
        session.pending = None
        session.updated_at = self._clock()
        return ApplyOutcome(entry=entry, grade=record)

    def _ensure_question_open(self, session: ExamSession) -> None:
        if session.phase is Phase.CONCLUDED:
            raise SessionConcluded("session is concluded")
        if session.phase is not Phase.QUESTION_OPEN:
            raise WrongPhase(f"operation requires an open question, not {session.phase.value}")
        if session.pending is not None:
            raise WrongPhase("a provider round-trip is already pending")

    def _issue(
        self,
        session: ExamSession,
        kind: DirectiveKind,
        note: str,
        *,
        trigger: GradeTrigger | None = None,
        attempt: int = 1,
    ) -> EngineDirective:
        session.pending = PendingDirective(kind=kind, trigger=trigger, attempt=attempt)
        request = self._build_request(session, kind, note)
        return EngineDirective(
            session_id=session.id,
            kind=kind,
            request=request,
            trigger=trigger,
            attempt=attempt,
        )

    def _build_request(
        self, session: ExamSession, kind: DirectiveKind, note: str
    ) -> ProviderRequest:
        profile = InstructionProfile(
            subject_area=session.subject_area,
            current_topic=session.current_topic,
            mode=session.mode,
            language=session.language,
            min_questions_for_grade=session.min_questions_for_grade,
            auto_grade_after=session.auto_grade_after,
            grade_scale_text=GRADE_SCALE_TEXT,
            material_excerpts=tuple(session.material_excerpts),
            student_context=dict(session.student_context),
            language_mismatch=session.language_mismatch,
        )
        transcript = tuple(
            (EXAMINER_ROLE if entry.role in (Role.EXAMINER, Role.HINT) else STUDENT_ROLE, entry.raw_text)
            for entry in session.transcript
            if entry.role is not Role.SYSTEM
        )
        return ProviderRequest(
            instructions=build_instructions(profile),
            transcript=transcript,
            directive_note=note,
            directive_kind=kind.value,
            answered_in_segment=session.answered_in_segment,
        )
