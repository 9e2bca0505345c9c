"""JSON views: display text plus structured tags, never raw sentinel strings."""

from __future__ import annotations

from typing import Any

from examsim.core.session import ExamSession, GradeRecord, Role, TranscriptEntry
from examsim.core.tags import REQUEST_HINT_MESSAGE


def _entry_kind(session: ExamSession, entry: TranscriptEntry) -> str:
    if entry.role is Role.STUDENT:
        return "hint_request" if entry.raw_text == REQUEST_HINT_MESSAGE else "answer"
    if entry.role is Role.SYSTEM:
        return "system"
    if entry.role is Role.HINT or entry.has_tag("HINT"):
        return "hint"
    if entry.has_tag("GRADE"):
        return "grade"
    if entry.has_tag("SESSION_END"):
        return "end"
    for earlier in reversed(session.transcript[: entry.index]):
        if earlier.role is Role.SYSTEM:
            continue
        if earlier.role is Role.STUDENT and earlier.raw_text != REQUEST_HINT_MESSAGE:
            return "feedback"
        return "question"
    return "question"


def entry_view(session: ExamSession, entry: TranscriptEntry) -> dict[str, Any]:
    return {
        "index": entry.index,
        "role": entry.role.value,
        "kind": _entry_kind(session, entry),
        "text": entry.display_text,
        "tags": [{"name": tag.name, "args": list(tag.args)} for tag in entry.tags],
        "timestamp": entry.timestamp.isoformat(),
    }


def grade_view(record: GradeRecord) -> dict[str, Any]:
    return {
        "grade": record.grade.value,
        "percent": record.percent,
        "topic": record.topic,
        "questions_covered": record.questions_covered,
        "trigger": record.trigger.value,
        "disclaimer": record.disclaimer,
    }


def counters_view(session: ExamSession) -> dict[str, Any]:
    return {
        "phase": session.phase.value,
        "answered_in_segment": session.answered_in_segment,
        "answered_total": session.answered_total,
        "hints_used": session.hints_used,
    }


def session_view(session: ExamSession) -> dict[str, Any]:
    return {
        "id": session.id,
        "subject_area": session.subject_area,
        "current_topic": session.current_topic,
        "mode": session.mode.value,
        "language": session.language,
        "student_context": dict(session.student_context),
        "min_questions_for_grade": session.min_questions_for_grade,
        "auto_grade_after": session.auto_grade_after,
        "document_ids": list(session.material_refs),
        "transcript": [entry_view(session, entry) for entry in session.transcript],
        "grades": [grade_view(record) for record in session.grades],
        "created_at": session.created_at.isoformat(),
        "updated_at": session.updated_at.isoformat(),
        **counters_view(session),
    }
