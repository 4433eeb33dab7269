"""
Report Schemas

Pydantic models for everything the toolkit reports: scalar traces and
their classification, grid verifications, interpolation certificates,
spectral diagnostics, iteration outcomes and CLI run reports.
"""
from enum import Enum
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from schemas.common import ComplexValue, MatrixField


# ============================================================================
# ENUMS
# ============================================================================

class TerminationReason(str, Enum):
    """Why a scalar trace stopped"""
    CONVERGED = "converged"
    BUDGET = "budget"
    NONCONVERGENT = "nonconvergent"


class LimitTag(str, Enum):
    """Scalar limit classes"""
    ZERO = "zero"
    ONE = "one"
    INTERIOR_POINT = "interior_point"
    BOUNDARY_POINT = "boundary_point"
    NON_CONVERGENT = "nonconvergent"


class IterationStatus(str, Enum):
    """Outcome of an operator iteration"""
    CONVERGED = "converged"
    CYCLE = "cycle"
    DIVERGED = "diverged"
    BUDGET_EXHAUSTED = "budget_exhausted"


# ============================================================================
# SCALAR DYNAMICS
# ============================================================================

class ScalarTrace(BaseModel):
    """Orbit f^0(z), f^1(z), ... of one starting point"""

    start: ComplexValue = Field(description="Starting point z0")
    values: list[ComplexValue] = Field(description="Iterates, values[0] = start")
    terminated_reason: TerminationReason = Field(description="Stopping rule that fired")

    @model_validator(mode="after")
    def check_start(self) -> "ScalarTrace":
        if not self.values:
            raise ValueError("trace needs at least the starting value")
        if self.values[0] != self.start:
            raise ValueError("values[0] must equal start")
        return self

    @property
    def last(self) -> complex:
        return self.values[-1]


class LimitClass(BaseModel):
    """Classification of a scalar trace's limit"""

    tag: LimitTag
    tau: Optional[ComplexValue] = Field(
        default=None,
        description="Limit point for interior_point / boundary_point",
    )

    @classmethod
    def zero(cls) -> "LimitClass":
        return cls(tag=LimitTag.ZERO, tau=0j)

    @classmethod
    def one(cls) -> "LimitClass":
        return cls(tag=LimitTag.ONE, tau=1 + 0j)


class BoundReport(BaseModel):
    """Sup-norm estimate of a map on the polar disk grid"""

    sup_estimate: float = Field(description="max |map(z)| over the grid (inf on a pole)")
    passed: bool
    argmax: Optional[ComplexValue] = Field(default=None, description="Grid point attaining the sup")
    pole: Optional[ComplexValue] = Field(default=None, description="Grid point where evaluation hit a pole")
    radial: int
    angular: int


class FPPViolation(BaseModel):
    point: ComplexValue = Field(description="Unit-circle sample")
    value: ComplexValue = Field(description="Map value at the sample")


class FPPReport(BaseModel):
    """Peripheral fixed-point scan of the unit circle"""

    violations: list[FPPViolation] = Field(default_factory=list)
    angular: int

    @property
    def passed(self) -> bool:
        return not self.violations


class DenjoyWolffPoint(BaseModel):
    tau: ComplexValue
    interior: bool
    seed_gap: float = Field(default=0.0, description="Disagreement between the two seeds' limits")


class SeparationViolation(BaseModel):
    point: ComplexValue = Field(description="Unit-circle point fixed by the composite")
    layer: int = Field(description="Index of the layer that moves it")
    residual: float


class SeparationReport(BaseModel):
    """Boundary separation scan: composite-fixed points must be fixed by every layer"""

    composite_fixed: list[ComplexValue] = Field(default_factory=list)
    violations: list[SeparationViolation] = Field(default_factory=list)
    angular: int

    @property
    def passed(self) -> bool:
        return not self.violations


# ============================================================================
# INTERPOLATION
# ============================================================================

class SchurCertificate(BaseModel):
    residual_at_t: float = Field(description="|s(t)|")
    residual_at_1: float = Field(description="|s(1) - 1|")
    sup_estimate: float = Field(description="Grid sup of |s|")


class SchurSolution(BaseModel):
    """Two-point interpolant s(z) = b_t(z) * phi(b_t(z)) with its certificate"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    s: Any = Field(exclude=True, description="SchurMap of the solution")
    t: float
    description: str
    certificate: SchurCertificate


class InterpolationReport(BaseModel):
    passed: bool
    residual_at_t: float
    residual_at_1: float
    sup_estimate: float
    sup_passed: bool


# ============================================================================
# SPECTRAL DIAGNOSTICS
# ============================================================================

class RittEstimate(BaseModel):
    """Sampled sup of (|z| - 1) * ||(zI - A)^-1|| outside the unit disk"""

    constant: float
    is_ritt: bool = Field(description="constant below the Ritt bound")
    radial: int
    angular: int


class PowerBound(BaseModel):
    """max_{n <= N} ||A^n||_2 with overflow guard"""

    estimate: float
    n_evaluated: int
    bounded: bool = Field(description="False when the overflow guard stopped the scan")


# ============================================================================
# ITERATION OUTCOMES
# ============================================================================

class CheckResult(BaseModel):
    """One named check: residual and pass flag (serialized as 'pass')"""

    model_config = ConfigDict(populate_by_name=True, ser_json_inf_nan="constants")

    residual: float
    passed: bool = Field(alias="pass")
    detail: Optional[str] = None


class ConvergenceReport(BaseModel):
    """Outcome of an operator iteration run"""

    model_config = ConfigDict(arbitrary_types_allowed=True, ser_json_inf_nan="constants")

    status: IterationStatus
    period: Optional[int] = Field(default=None, description="Cycle period (cycle status only)")
    stage: int = Field(ge=0, description="Stage at which the status was decided")
    limit: Optional[MatrixField] = Field(default=None, description="Limit matrix (converged only)")
    residual_history: list[float] = Field(
        default_factory=list,
        description="||A^(m+1) - A^(m)||_F per stage",
    )
    check_results: dict[str, CheckResult] = Field(default_factory=dict)
    trajectory: list[Any] = Field(
        default_factory=list,
        exclude=True,
        description="Stage matrices A^(0), A^(1), ... (kept in memory for traces)",
    )

    @model_validator(mode="after")
    def check_status(self) -> "ConvergenceReport":
        if self.status == IterationStatus.CONVERGED and self.limit is None:
            raise ValueError("converged report needs a limit")
        if self.status == IterationStatus.CYCLE and not self.period:
            raise ValueError("cycle report needs a period")
        return self

    @property
    def passed_checks(self) -> bool:
        return all(result.passed for result in self.check_results.values())

    def stage_matrices(self) -> list[np.ndarray]:
        return [np.asarray(m) for m in self.trajectory]


class RunReport(BaseModel):
    """Per-scenario CLI report (report.json)"""

    model_config = ConfigDict(ser_json_inf_nan="constants")

    scenario: str
    status: Optional[IterationStatus] = None
    period: Optional[int] = None
    stage: Optional[int] = None
    checks: dict[str, CheckResult] = Field(default_factory=dict)
    wall_ms: float = 0.0
    files: list[str] = Field(default_factory=list)
    exit_code: int = 0
    error: Optional[str] = Field(default=None, description="Engine failure text")
    notes: dict[str, Any] = Field(default_factory=dict, description="Computed values worth recording")
