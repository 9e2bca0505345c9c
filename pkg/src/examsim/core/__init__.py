"""Pure exam-session core: state machine, grading rules, tag grammar, prompts.

No I/O happens here; everything is a synchronous function of its inputs so
the engine can be driven identically by the REST service, the CLI, and tests.
"""

from examsim.core.engine import (
    ApplyOutcome,
    ContinuationChoice,
    EngineDirective,
    ExamEngine,
    SessionConfig,
)
from examsim.core.errors import (
    EmptyAnswer,
    ExamCoreError,
    HintsDisabledInExamMode,
    InvalidConfig,
    InvalidProfile,
    MinQuestionsNotMet,
    PercentOutOfRange,
    ProtocolViolation,
    SessionConcluded,
    WrongPhase,
)
from examsim.core.grading import GRADE_SCALE_TEXT, GradeValue, percent_to_grade
from examsim.core.instructions import InstructionProfile, build_instructions
from examsim.core.session import (
    DirectiveKind,
    ExamSession,
    GradeRecord,
    GradeTrigger,
    Mode,
    Phase,
    Role,
    TranscriptEntry,
)
from examsim.core.tags import REQUEST_HINT_MESSAGE, SentinelTag, TaggedText, parse_tags

__all__ = [
    "ApplyOutcome",
    "ContinuationChoice",
    "DirectiveKind",
    "EmptyAnswer",
    "EngineDirective",
    "ExamCoreError",
    "ExamEngine",
    "ExamSession",
    "GRADE_SCALE_TEXT",
    "GradeRecord",
    "GradeTrigger",
    "GradeValue",
    "HintsDisabledInExamMode",
    "InstructionProfile",
    "InvalidConfig",
    "InvalidProfile",
    "MinQuestionsNotMet",
    "Mode",
    "PercentOutOfRange",
    "Phase",
    "ProtocolViolation",
    "REQUEST_HINT_MESSAGE",
    "Role",
    "SentinelTag",
    "SessionConcluded",
    "SessionConfig",
    "TaggedText",
    "TranscriptEntry",
    "WrongPhase",
    "build_instructions",
    "parse_tags",
    "percent_to_grade",
]
