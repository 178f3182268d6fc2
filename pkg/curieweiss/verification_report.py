"""Outcome of one numerical check"""

from __future__ import annotations

# Standard Library
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

# Third Party
import numpy as np


class ReportStatus(str, Enum):
    PASSED = "passed"
    FAILED = "failed"
    PRECONDITION_VIOLATION = "precondition-violation"


@dataclass(frozen=True)
class VerificationReport:
    """
    worst_case is the check's own figure of merit (a margin, a scaled error or
    a discrepancy); ``passed`` says whether it satisfies the stated inequality.
    """

    check_id: str
    passed: bool
    grid: str
    worst_case: float | None = None
    estimated_constant: float | None = None
    status: ReportStatus | None = None
    excluded: int = 0
    details: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.status is None:
            object.__setattr__(
                self, "status", ReportStatus.PASSED if self.passed else ReportStatus.FAILED
            )

    def to_dict(self) -> dict[str, Any]:
        return {
            "check_id": self.check_id,
            "passed": self.passed,
            "status": self.status.value,
            "grid": self.grid,
            "worst_case": json_safe(self.worst_case),
            "estimated_constant": json_safe(self.estimated_constant),
            "excluded": self.excluded,
            "details": json_safe(self.details),
        }


def precondition_violation(check_id: str, grid: str, reason: str, **details) -> VerificationReport:
    return VerificationReport(
        check_id=check_id,
        passed=False,
        grid=grid,
        status=ReportStatus.PRECONDITION_VIOLATION,
        details={"reason": reason, **details},
    )


def json_safe(value):
    """Recursively convert numpy scalars/arrays to plain types; non-finite floats become None."""
    if isinstance(value, dict):
        return {str(k): json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(v) for v in value]
    if isinstance(value, np.ndarray):
        return [json_safe(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, Enum):
        return value.value
    return value


def spread(values) -> float | None:
    """max / min of positive values, None when undefined."""
    values = [v for v in values if v is not None and math.isfinite(v)]
    if not values or min(values) <= 0.0:
        return None
    return max(values) / min(values)
