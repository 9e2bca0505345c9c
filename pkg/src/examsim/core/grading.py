"""The discrete grade ladder and the percent-to-grade step mapping."""

from __future__ import annotations

import enum

from examsim.core.errors import PercentOutOfRange


class GradeValue(enum.Enum):
    """The eleven representable grades, 1.0 (best) to 4.0 (pass) and 5.0 (fail)."""

    G1_0 = "1.0"
    G1_3 = "1.3"
    G1_7 = "1.7"
    G2_0 = "2.0"
    G2_3 = "2.3"
    G2_7 = "2.7"
    G3_0 = "3.0"
    G3_3 = "3.3"
    G3_7 = "3.7"
    G4_0 = "4.0"
    G5_0 = "5.0"

    @property
    def numeric(self) -> float:
        return float(self.value)

    @classmethod
    def from_string(cls, text: str) -> "GradeValue":
        """Parse the canonical rendering ("1.0", "2.3", ...); raise ValueError otherwise."""
        for member in cls:
            if member.value == text:
                return member
        raise ValueError(f"not a grade on the scale: {text!r}")

    def __str__(self) -> str:
        return self.value


GRADE_SCALE_TEXT = ", ".join(member.value for member in GradeValue)

GRADE_DISCLAIMER = "This rating applies only to the discussed subject area."

# Step thresholds: percent >= threshold selects the grade; below all -> 5.0.
_PERCENT_STEPS: tuple[tuple[int, GradeValue], ...] = (
    (95, GradeValue.G1_0),
    (90, GradeValue.G1_3),
    (85, GradeValue.G1_7),
    (80, GradeValue.G2_0),
    (75, GradeValue.G2_3),
    (70, GradeValue.G2_7),
    (65, GradeValue.G3_0),
    (60, GradeValue.G3_3),
    (55, GradeValue.G3_7),
    (50, GradeValue.G4_0),
)


def percent_to_grade(percent: int) -> GradeValue:
    """Map an integer percent in [0, 100] onto the grade ladder.

    The mapping is a monotone step function: 5-point bands from 50 % (4.0)
    up to 95 % (1.0), everything below 50 % fails.
    """
    if not isinstance(percent, int) or isinstance(percent, bool):
        raise PercentOutOfRange(f"percent must be an integer, got {percent!r}")
    if percent < 0 or percent > 100:
        raise PercentOutOfRange(f"percent must be in [0, 100], got {percent}")
    for threshold, grade in _PERCENT_STEPS:
        if percent >= threshold:
            return grade
    return GradeValue.G5_0
