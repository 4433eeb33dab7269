"""
Scenario Schemas

Pydantic models for scenario documents: the operator, the layer cycle,
the iteration mode, stopping rules, checks to run and the expected outcome.
Unknown keys are rejected at every level.
"""
from enum import Enum
from typing import Annotated, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from schemas.common import ComplexValue, MatrixField

MAX_DIM = 256

_STRICT = ConfigDict(extra="forbid", arbitrary_types_allowed=True)


class ScenarioMode(str, Enum):
    """What the runner does with the operator"""
    FUNCTION = "function"
    POWER = "power"
    CESARO = "cesaro"
    CONJUGATION = "conjugation"
    RIESZ = "riesz"


class CheckName(str, Enum):
    """Named checks a scenario may request"""
    LIMIT_PROPERTIES = "limit_properties"
    STAGE_OMEGA = "stage_omega"
    SPECTRAL_PROJECTION_MATCH = "spectral_projection_match"
    FIXED_SPACE = "fixed_space"
    BOUNDARY_SEPARATION = "boundary_separation"
    SCHUR_BOUND = "schur_bound"
    PERIPHERAL_FPP = "peripheral_fpp"
    CLOSED_FORM = "closed_form"
    RIESZ_PRODUCT = "riesz_product"
    RIESZ_VS_CESARO = "riesz_vs_cesaro"
    RITT_CONSTANT = "ritt_constant"
    POWER_BOUND = "power_bound"
    JORDAN_GROWTH = "jordan_growth"
    REFERENCE_CLAIM = "reference_claim"
    INVOLUTION_PERIOD = "involution_period"


ExpectedStatus = Literal["converged", "cycle", "diverged"]


# ============================================================================
# LAYER DESCRIPTORS
# ============================================================================

class IdentityLayer(BaseModel):
    model_config = _STRICT
    kind: Literal["identity"]


class AffineLayer(BaseModel):
    """t + (1 - t) z"""
    model_config = _STRICT
    kind: Literal["affine"]
    t: float = Field(gt=0.0, lt=1.0)


class BlaschkeLayer(BaseModel):
    """(z - t) / (1 - t z)"""
    model_config = _STRICT
    kind: Literal["blaschke"]
    t: float = Field(ge=0.0, lt=1.0)


class MobiusLayer(BaseModel):
    """(a z + b) / (c z + d)"""
    model_config = _STRICT
    kind: Literal["mobius"]
    a: ComplexValue
    b: ComplexValue
    c: ComplexValue
    d: ComplexValue


class PolynomialLayer(BaseModel):
    model_config = _STRICT
    kind: Literal["polynomial"]
    coeffs: list[ComplexValue] = Field(min_length=1, description="Ascending powers")


class RationalLayer(BaseModel):
    model_config = _STRICT
    kind: Literal["rational"]
    numerator: list[ComplexValue] = Field(min_length=1, description="Ascending powers")
    denominator: list[ComplexValue] = Field(min_length=1, description="Ascending powers")


class CompositionLayer(BaseModel):
    """Inner layers applied left to right"""
    model_config = _STRICT
    kind: Literal["composition"]
    layers: list["LayerDescriptor"] = Field(min_length=1)


class ProductLayer(BaseModel):
    model_config = _STRICT
    kind: Literal["product"]
    factors: list["LayerDescriptor"] = Field(min_length=1)


class InterpolantLayer(BaseModel):
    """Two-point Schur interpolant s = b_t * phi(b_t)"""
    model_config = _STRICT
    kind: Literal["interpolant"]
    t: float = Field(ge=0.0, lt=1.0)
    phi: "LayerDescriptor"


class ConjugationLayer(BaseModel):
    """X -> S X S^-1 (conjugation mode only)"""
    model_config = _STRICT
    kind: Literal["conjugation"]
    matrix: MatrixField


LayerDescriptor = Annotated[
    Union[
        IdentityLayer,
        AffineLayer,
        BlaschkeLayer,
        MobiusLayer,
        PolynomialLayer,
        RationalLayer,
        CompositionLayer,
        ProductLayer,
        InterpolantLayer,
        ConjugationLayer,
    ],
    Field(discriminator="kind"),
]

CompositionLayer.model_rebuild()
ProductLayer.model_rebuild()
InterpolantLayer.model_rebuild()


# ============================================================================
# OPERATOR DESCRIPTORS
# ============================================================================

class NormalData(BaseModel):
    model_config = _STRICT
    eigenvalues: list[ComplexValue] = Field(min_length=1, max_length=MAX_DIM)
    eigenbasis: MatrixField


class JordanData(BaseModel):
    model_config = _STRICT
    eigenvalue: ComplexValue
    size: int = Field(ge=1, le=MAX_DIM)


class DiagonalOperatorSpec(BaseModel):
    model_config = _STRICT
    kind: Literal["diagonal"]
    data: list[ComplexValue] = Field(min_length=1, max_length=MAX_DIM)

    @property
    def dim(self) -> int:
        return len(self.data)


class DenseOperatorSpec(BaseModel):
    model_config = _STRICT
    kind: Literal["dense"]
    data: MatrixField

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @field_validator("data")
    @classmethod
    def check_size(cls, value: np.ndarray) -> np.ndarray:
        if value.shape[0] > MAX_DIM:
            raise ValueError(f"operator dimension {value.shape[0]} exceeds {MAX_DIM}")
        return value


class NormalOperatorSpec(BaseModel):
    model_config = _STRICT
    kind: Literal["normal"]
    data: NormalData

    @property
    def dim(self) -> int:
        return len(self.data.eigenvalues)

    @model_validator(mode="after")
    def check_shapes(self) -> "NormalOperatorSpec":
        if self.data.eigenbasis.shape[0] != len(self.data.eigenvalues):
            raise ValueError("eigenbasis dimension does not match the number of eigenvalues")
        return self


class JordanBlockSpec(BaseModel):
    model_config = _STRICT
    kind: Literal["jordan_block"]
    data: JordanData

    @property
    def dim(self) -> int:
        return self.data.size


OperatorDescriptor = Annotated[
    Union[DiagonalOperatorSpec, DenseOperatorSpec, NormalOperatorSpec, JordanBlockSpec],
    Field(discriminator="kind"),
]


# ============================================================================
# SCENARIO
# ============================================================================

class ContourDocument(BaseModel):
    model_config = _STRICT
    center: ComplexValue
    radius: float = Field(gt=0.0)
    nodes: int = Field(default=64, ge=16)


class ReferenceClaim(BaseModel):
    """A claimed value to compare against: a composite map or a conjugate matrix"""
    model_config = _STRICT
    composite: Optional[LayerDescriptor] = None
    matrix: Optional[MatrixField] = None
    expect_match: bool = Field(description="Whether the computed value is expected to agree")
    tolerance: float = Field(default=1e-8, gt=0.0)

    @model_validator(mode="after")
    def check_one_target(self) -> "ReferenceClaim":
        if (self.composite is None) == (self.matrix is None):
            raise ValueError("reference needs exactly one of 'composite' or 'matrix'")
        return self


class Scenario(BaseModel):
    """One runnable scenario document"""

    model_config = _STRICT

    name: str = Field(min_length=1, max_length=64, pattern=r"^[A-Za-z0-9_.-]+$")
    description: Optional[str] = None
    operator: OperatorDescriptor
    layers: list[LayerDescriptor] = Field(default_factory=list)
    mode: ScenarioMode = ScenarioMode.FUNCTION
    tolerance: float = Field(default=1e-10, gt=0.0)
    max_stages: int = Field(default=5000, ge=1)
    cycle_window: int = Field(default=8, ge=2)
    checks: list[CheckName] = Field(default_factory=list)
    contour: Optional[ContourDocument] = None
    expect: Optional[ExpectedStatus] = None
    reference: Optional[ReferenceClaim] = None

    @model_validator(mode="after")
    def check_consistency(self) -> "Scenario":
        conjugations = [layer for layer in self.layers if isinstance(layer, ConjugationLayer)]
        if self.mode == ScenarioMode.FUNCTION and not self.layers:
            raise ValueError("function mode needs at least one layer")
        if self.mode == ScenarioMode.CONJUGATION:
            if len(self.layers) != 1 or len(conjugations) != 1:
                raise ValueError("conjugation mode needs exactly one 'conjugation' layer")
            if conjugations[0].matrix.shape[0] != self.operator.dim:
                raise ValueError("conjugator dimension does not match the operator")
        elif conjugations:
            raise ValueError("'conjugation' layers are only allowed in conjugation mode")
        if len(set(self.checks)) != len(self.checks):
            raise ValueError("checks must not repeat")
        if self.reference is not None and self.reference.matrix is not None:
            if self.reference.matrix.shape[0] != self.operator.dim:
                raise ValueError("reference matrix dimension does not match the operator")
        return self

    @property
    def expected_status(self) -> str:
        return self.expect or "converged"
