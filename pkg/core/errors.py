"""
Error hierarchy

Every failure raised by the toolkit derives from SpectralCascadeError so the
runner can separate engine failures from configuration failures.
"""
from typing import Any, Optional


class SpectralCascadeError(Exception):
    """Base class for toolkit errors"""

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.context = context


# ============================================================================
# SCALAR MAPS
# ============================================================================

class PoleAtPointError(SpectralCascadeError):
    """Denominator vanishes (numerically) at the evaluation point"""

    def __init__(self, location: complex, magnitude: float):
        super().__init__(
            f"Pole at z={location:.6g} (|denominator|={magnitude:.3e})",
            location=location,
            magnitude=magnitude,
        )
        self.location = location


class EmptyCycleError(SpectralCascadeError):
    """A layer cycle needs at least one layer"""


class IdentityCycleError(SpectralCascadeError):
    """Composite acts as the identity; no Denjoy-Wolff point exists"""


class NonConvergentError(SpectralCascadeError):
    """Iterates did not settle (or cross-check seeds disagree)"""


class ParamOutOfRangeError(SpectralCascadeError):
    """Map parameter outside its documented range"""


class NotSchurError(SpectralCascadeError):
    """Map exceeds modulus 1 on the closed disk"""


class BoundaryConditionError(SpectralCascadeError):
    """Map does not fix the boundary point 1"""


class NonzeroAtOriginError(SpectralCascadeError):
    """Schur step requires R(0) = 0"""


class FactorizationError(SpectralCascadeError):
    """Schur step result fails R(z) = z * phi(z) or phi(0) = R'(0)"""


class UnsupportedVariantError(SpectralCascadeError):
    """Operation not defined for this SchurMap variant"""


# ============================================================================
# MATRIX CALCULUS
# ============================================================================

class NotNormalError(SpectralCascadeError):
    """Matrix fails the normality residual test"""


class SolverFailureError(SpectralCascadeError):
    """Dense eigensolver or linear solve failed"""


class FunctionUndefinedError(SpectralCascadeError):
    """Scalar function not finite on some eigenvalue"""


class SpectrumHitError(SpectralCascadeError):
    """Resolvent requested on (or numerically at) the spectrum"""


class IllConditionedError(SpectralCascadeError):
    """Shifted matrix too ill-conditioned to invert reliably"""


class ContourTooCloseError(SpectralCascadeError):
    """Quadrature circle passes within gap_tol of an eigenvalue"""

    def __init__(self, message: str, gap: Optional[float] = None):
        super().__init__(message, gap=gap)
        self.gap = gap


class NoConvergenceError(SpectralCascadeError):
    """Quadrature node doubling hit its cap"""


class SpectralRadiusError(SpectralCascadeError):
    """Spectral radius exceeds one"""


class OverflowDetectedError(SpectralCascadeError):
    """Non-finite entries appeared while forming powers"""


# ============================================================================
# ITERATION ENGINE
# ============================================================================

class IncompatibleDimsError(SpectralCascadeError):
    """Operands have mismatched dimensions"""


class NotPowerBoundedError(SpectralCascadeError):
    """Powers grow past the power-boundedness guard"""


class SingularConjugatorError(SpectralCascadeError):
    """Conjugator is singular or too ill-conditioned"""


class IsolationFailedError(SpectralCascadeError):
    """A Riesz contour at 1 also encloses eigenvalues away from 1"""


# ============================================================================
# SCENARIO DOCUMENTS
# ============================================================================

class ParseError(SpectralCascadeError):
    """Scenario document is not well-formed"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        super().__init__(message, line=line, column=column)
        self.line = line
        self.column = column


class ScenarioValidationError(SpectralCascadeError):
    """Scenario document violates the schema (ranges, kinds, unknown fields)"""

    def __init__(self, message: str, fields: Optional[list[str]] = None):
        super().__init__(message, fields=fields or [])
        self.fields = fields or []
