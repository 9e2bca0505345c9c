"""Session state: transcript entries, grade records, and the session record."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any

from examsim.core.errors import ExamCoreError
from examsim.core.grading import GRADE_DISCLAIMER, GradeValue, percent_to_grade
from examsim.core.tags import REQUEST_HINT_MESSAGE, SentinelTag, parse_tags

SCHEMA_VERSION = 1


class Mode(str, enum.Enum):
    PRACTICE = "practice"
    EXAM = "exam"


class Phase(str, enum.Enum):
    QUESTION_OPEN = "question_open"
    CONTINUATION_PROMPT = "continuation_prompt"
    CONCLUDED = "concluded"


class Role(str, enum.Enum):
    EXAMINER = "examiner"
    STUDENT = "student"
    HINT = "hint"
    SYSTEM = "system"


class GradeTrigger(str, enum.Enum):
    MANUAL_REQUEST = "manual_request"
    AUTO_AFTER_FIVE = "auto_after_five"


class DirectiveKind(str, enum.Enum):
    QUESTION = "question"
    ANSWER = "answer"
    HINT = "hint"
    GRADE = "grade"
    CONCLUDE = "conclude"


@dataclass(frozen=True)
class TranscriptEntry:
    """One chat message; display_text is raw_text with the tag spans removed."""

    role: Role
    raw_text: str
    display_text: str
    tags: tuple[SentinelTag, ...]
    index: int
    timestamp: datetime

    @classmethod
    def create(cls, role: Role, raw_text: str, index: int, timestamp: datetime) -> "TranscriptEntry":
        parsed = parse_tags(raw_text)
        return cls(
            role=role,
            raw_text=raw_text,
            display_text=parsed.display_text,
            tags=parsed.tags,
            index=index,
            timestamp=timestamp,
        )

    def has_tag(self, name: str) -> bool:
        return any(tag.name == name for tag in self.tags)


@dataclass(frozen=True)
class GradeRecord:
    """A grade emitted for one disjoint answer segment."""

    grade: GradeValue
    percent: int
    topic: str
    questions_covered: int
    trigger: GradeTrigger
    disclaimer: str = GRADE_DISCLAIMER

    def __post_init__(self) -> None:
        if percent_to_grade(self.percent) is not self.grade:
            raise ValueError(
                f"grade {self.grade.value} inconsistent with percent {self.percent}"
            )
        if self.questions_covered < 1:
            raise ValueError("questions_covered must be positive")


@dataclass(frozen=True)
class PendingDirective:
    """Marker that a provider round-trip is in flight for this session."""

    kind: DirectiveKind
    trigger: GradeTrigger | None
    attempt: int


@dataclass
class ExamSession:
    id: str
    subject_area: str
    current_topic: str
    mode: Mode
    language: str
    created_at: datetime
    updated_at: datetime
    student_context: dict[str, str] = field(default_factory=dict)
    phase: Phase = Phase.QUESTION_OPEN
    answered_in_segment: int = 0
    answered_total: int = 0
    hints_used: int = 0
    transcript: list[TranscriptEntry] = field(default_factory=list)
    grades: list[GradeRecord] = field(default_factory=list)
    min_questions_for_grade: int = 3
    auto_grade_after: int = 5
    material_refs: list[str] = field(default_factory=list)
    material_excerpts: list[str] = field(default_factory=list)
    language_mismatch: bool = False
    pending: PendingDirective | None = None
    schema_version: int = SCHEMA_VERSION

    def append_entry(self, role: Role, raw_text: str, timestamp: datetime) -> TranscriptEntry:
        if self.phase is Phase.CONCLUDED:
            raise ExamCoreError("internal: append to a concluded session")
        entry = TranscriptEntry.create(role, raw_text, index=len(self.transcript), timestamp=timestamp)
        self.transcript.append(entry)
        return entry

    def validate(self) -> None:
        """Check every structural invariant; raises AssertionError on violation."""
        assert 0 <= self.answered_in_segment <= self.auto_grade_after
        assert self.answered_in_segment <= self.answered_total
        assert self.hints_used >= 0
        assert 1 <= self.min_questions_for_grade <= self.auto_grade_after
        for record in self.grades:
            assert record.questions_covered >= self.min_questions_for_grade
            if record.trigger is GradeTrigger.AUTO_AFTER_FIVE:
                assert record.questions_covered == self.auto_grade_after
        for position, entry in enumerate(self.transcript):
            assert entry.index == position
            assert not parse_tags(entry.display_text).tags
        self._validate_alternation()
        if self.phase is Phase.CONCLUDED:
            assert self.pending is None

    def _validate_alternation(self) -> None:
        # Hint replies count as examiner turns. A grade-carrying examiner
        # message may interrupt at any point (the student can request it in
        # place of an answer) and ends its segment, so the next segment
        # opens with another examiner turn.
        expected = Role.EXAMINER
        for entry in self.transcript:
            role = Role.EXAMINER if entry.role is Role.HINT else entry.role
            if role is Role.SYSTEM:
                continue
            if role is Role.EXAMINER and entry.has_tag("GRADE"):
                expected = Role.EXAMINER
                continue
            assert role is expected, f"transcript alternation broken at index {entry.index}"
            expected = Role.STUDENT if role is Role.EXAMINER else Role.EXAMINER

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "id": self.id,
            "subject_area": self.subject_area,
            "current_topic": self.current_topic,
            "mode": self.mode.value,
            "language": self.language,
            "student_context": dict(self.student_context),
            "phase": self.phase.value,
            "answered_in_segment": self.answered_in_segment,
            "answered_total": self.answered_total,
            "hints_used": self.hints_used,
            "min_questions_for_grade": self.min_questions_for_grade,
            "auto_grade_after": self.auto_grade_after,
            "material_refs": list(self.material_refs),
            "material_excerpts": list(self.material_excerpts),
            "language_mismatch": self.language_mismatch,
            "pending": (
                {
                    "kind": self.pending.kind.value,
                    "trigger": self.pending.trigger.value if self.pending.trigger else None,
                    "attempt": self.pending.attempt,
                }
                if self.pending
                else None
            ),
            "transcript": [
                {
                    "role": entry.role.value,
                    "raw_text": entry.raw_text,
                    "index": entry.index,
                    "timestamp": entry.timestamp.isoformat(),
                }
                for entry in self.transcript
            ],
            "grades": [
                {
                    "grade": record.grade.value,
                    "percent": record.percent,
                    "topic": record.topic,
                    "questions_covered": record.questions_covered,
                    "trigger": record.trigger.value,
                    "disclaimer": record.disclaimer,
                }
                for record in self.grades
            ],
            "created_at": self.created_at.isoformat(),
            "updated_at": self.updated_at.isoformat(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExamSession":
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported session schema: {data.get('schema_version')!r}")
        pending_data = data.get("pending")
        pending = (
            PendingDirective(
                kind=DirectiveKind(pending_data["kind"]),
                trigger=GradeTrigger(pending_data["trigger"]) if pending_data["trigger"] else None,
                attempt=pending_data["attempt"],
            )
            if pending_data
            else None
        )
        transcript = [
            TranscriptEntry.create(
                Role(item["role"]),
                item["raw_text"],
                index=item["index"],
                timestamp=datetime.fromisoformat(item["timestamp"]),
            )
            for item in data["transcript"]
        ]
        grades = [
            GradeRecord(
                grade=GradeValue.from_string(item["grade"]),
                percent=item["percent"],
                topic=item["topic"],
                questions_covered=item["questions_covered"],
                trigger=GradeTrigger(item["trigger"]),
                disclaimer=item["disclaimer"],
            )
            for item in data["grades"]
        ]
        return cls(
            id=data["id"],
            subject_area=data["subject_area"],
            current_topic=data["current_topic"],
            mode=Mode(data["mode"]),
            language=data["language"],
            created_at=datetime.fromisoformat(data["created_at"]),
            updated_at=datetime.fromisoformat(data["updated_at"]),
            student_context=dict(data["student_context"]),
            phase=Phase(data["phase"]),
            answered_in_segment=data["answered_in_segment"],
            answered_total=data["answered_total"],
            hints_used=data["hints_used"],
            transcript=transcript,
            grades=grades,
            min_questions_for_grade=data["min_questions_for_grade"],
            auto_grade_after=data["auto_grade_after"],
            material_refs=list(data["material_refs"]),
            material_excerpts=list(data["material_excerpts"]),
            language_mismatch=data["language_mismatch"],
            pending=pending,
            schema_version=data["schema_version"],
        )


def is_hint_request(entry: TranscriptEntry) -> bool:
    return entry.role is Role.STUDENT and entry.raw_text == REQUEST_HINT_MESSAGE
