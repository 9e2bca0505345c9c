"""Deterministic rendering of the examiner system prompt.

Every behavioural rule the examiner must follow is one numbered clause.
Clause presence depends only on (mode, material excerpts, language
mismatch); equal profiles render byte-identical prompts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from examsim.core.errors import InvalidProfile
from examsim.core.grading import GRADE_SCALE_TEXT
from examsim.core.session import Mode


@dataclass(frozen=True)
class InstructionProfile:
    subject_area: str
    current_topic: str
    mode: Mode = Mode.PRACTICE
    language: str = "en"
    min_questions_for_grade: int = 3
    auto_grade_after: int = 5
    grade_scale_text: str = GRADE_SCALE_TEXT
    material_excerpts: tuple[str, ...] = ()
    student_context: dict[str, str] = field(default_factory=dict)
    language_mismatch: bool = False


def _validate(profile: InstructionProfile) -> None:
    if not (1 <= profile.min_questions_for_grade <= profile.auto_grade_after):
        raise InvalidProfile(
            "min_questions_for_grade must satisfy "
            f"1 <= {profile.min_questions_for_grade} <= {profile.auto_grade_after}"
        )
    if not profile.subject_area.strip() or not profile.current_topic.strip():
        raise InvalidProfile("subject_area and current_topic must be non-empty")


def build_instructions(profile: InstructionProfile) -> str:
    """Render the system prompt for the given profile; pure and deterministic."""
    _validate(profile)
    practice = profile.mode is Mode.PRACTICE
    clauses: list[str] = []
    add = clauses.append

    add(
        "You are a university tutor conducting a simulated oral examination "
        "to prepare a student for the real exam."
    )
    add(
        f'The examination subject area is "{profile.subject_area}". '
        f'The current topic is "{profile.current_topic}". '
        f'Conduct the entire session in the exam language "{profile.language}".'
    )
    add(
        "Ask one question at a time within the subject area, then wait for "
        "the student's answer before continuing."
    )
    if practice:
        add(
            "After each answer, give detailed, subject-specific feedback on "
            "its quality, completeness, correctness, and precision."
        )
    else:
        add(
            "Exam mode: answers are not commented on. Do not give feedback "
            "on, correct, or improve the student's answers during the "
            "session; answers count only toward the rating."
        )
    add(
        "Identify and correct misinformation, and ask a follow-up question "
        "whenever an answer is unclear."
    )
    if profile.material_excerpts:
        add(
            "Base your questions and your assessment only on the topics "
            "covered by the course material excerpts below."
        )
        for number, excerpt in enumerate(profile.material_excerpts, start=1):
            add(f"[Material {number}] {excerpt}")
    add(
        "Start with simple questions to assess the student's knowledge "
        "level, then progressively ask harder questions."
    )
    add(
        "Provide a rating when the student requests one or automatically "
        f"after {profile.auto_grade_after} answered questions, using the "
        f"grading scale {profile.grade_scale_text} (1.0 is the best grade, "
        "4.0 the lowest pass, 5.0 a fail) and as a percentage (0-100%)."
    )
    add(
        "After giving a rating, ask whether the student wishes to continue "
        "with the same topic, continue with a new topic, or conclude the "
        "session."
    )
    add("Point out that the rating applies only to the discussed subject area.")
    add(
        "For a manually requested evaluation, at least "
        f"{profile.min_questions_for_grade} questions must have been "
        "answered since the last rating."
    )
    if practice:
        add("Offer a hint when the student struggles to answer a question.")
    add("Present questions in a concrete application example if possible.")
    if profile.language_mismatch:
        add(
            "The student is writing in a language other than the exam "
            "language. Mention that proficiency in the exam language may "
            "affect the grade."
        )
    if practice:
        add(
            'When you receive the exact message "%REQUEST_HINT%", respond '
            "with a small hint about the current question, and start that "
            "reply with the tag %HINT%."
        )
    add(
        "Machine-readable tags: when you give a rating, include exactly one "
        "tag of the form %GRADE:<grade>:<percent>% in that message, with the "
        "grade taken verbatim from the grading scale and the percent an "
        "integer from 0 to 100 consistent with the grade. When you conclude "
        "the session, include the tag %SESSION_END% in your closing message. "
        "Never use %-delimited tags in any other way."
    )
    if profile.student_context:
        rendered = "; ".join(
            f"{key}: {value}" for key, value in sorted(profile.student_context.items())
        )
        add(f"Student context to tailor difficulty and examples: {rendered}.")

    return "\n".join(f"{number}. {clause}" for number, clause in enumerate(clauses, start=1))
