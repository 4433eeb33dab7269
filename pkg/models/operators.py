"""
Operator Models

Finite-dimensional stand-ins for the operators the iteration acts on,
plus the spectral sets, contours and subspaces that accompany them.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np
import scipy.linalg

from core.errors import IncompatibleDimsError, NotNormalError, ParamOutOfRangeError, SolverFailureError
from core.numerics import frobenius, normality_residual
from schemas.reports import LimitClass, LimitTag


# ============================================================================
# OPERATORS
# ============================================================================

@dataclass(frozen=True, eq=False)
class DenseOperator:
    """General square complex matrix"""

    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise IncompatibleDimsError(f"operator must be square, got shape {entries.shape}")
        if not np.all(np.isfinite(entries)):
            raise ParamOutOfRangeError("operator has non-finite entries")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return self.entries

    def eigenvalues(self) -> np.ndarray:
        try:
            return scipy.linalg.eigvals(self.entries)
        except (np.linalg.LinAlgError, ValueError) as e:
            raise SolverFailureError(f"eigenvalue solver failed: {e}") from e


@dataclass(frozen=True, eq=False)
class NormalOperator:
    """
    Normal matrix held as (eigenvalues, unitary eigenbasis)

    The spectral measure is atomic: E({lambda_i}) = u_i u_i^*.
    """

    eigenvalues: np.ndarray
    eigenbasis: np.ndarray
    unitary_tol: float = 1e-10

    def __post_init__(self):
        values = np.array(self.eigenvalues, dtype=complex).ravel()
        basis = np.array(self.eigenbasis, dtype=complex)
        if basis.shape != (values.size, values.size):
            raise IncompatibleDimsError(
                f"eigenbasis shape {basis.shape} does not match {values.size} eigenvalues"
            )
        defect = frobenius(basis.conj().T @ basis - np.eye(values.size))
        if defect >= self.unitary_tol:
            raise NotNormalError(f"eigenbasis is not orthonormal (defect {defect:.3e})", defect=defect)
        values.setflags(write=False)
        basis.setflags(write=False)
        object.__setattr__(self, "eigenvalues", values)
        object.__setattr__(self, "eigenbasis", basis)

    @classmethod
    def diagonal(cls, values: Sequence[complex]) -> "NormalOperator":
        values = np.asarray(values, dtype=complex)
        return cls(values, np.eye(values.size, dtype=complex))

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    @property
    def matrix(self) -> np.ndarray:
        u = self.eigenbasis
        return (u * self.eigenvalues) @ u.conj().T

    def normality_residual(self) -> float:
        return normality_residual(self.matrix)

    def to_dense(self) -> DenseOperator:
        return DenseOperator(self.matrix)


Operator = Union[NormalOperator, DenseOperator]


def as_matrix(operator: Union[Operator, np.ndarray]) -> np.ndarray:
    if isinstance(operator, (NormalOperator, DenseOperator)):
        return operator.matrix
    return np.asarray(operator, dtype=complex)


# ============================================================================
# SPECTRAL SETS
# ============================================================================

class SpectralSet(ABC):
    """Predicate on spectral values"""

    @abstractmethod
    def contains(self, values: np.ndarray) -> np.ndarray:
        """Boolean mask over `values`"""


@dataclass(frozen=True)
class ExplicitPoints(SpectralSet):
    """Values within `radius` of one of `points`"""

    points: tuple
    radius: float = 1e-8

    def __post_init__(self):
        if self.radius <= 0:
            raise ParamOutOfRangeError(f"point radius must be positive, got {self.radius}")
        object.__setattr__(self, "points", tuple(complex(p) for p in self.points))

    def contains(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values, dtype=complex)
        if not self.points:
            return np.zeros(values.shape, dtype=bool)
        distances = np.abs(values[..., None] - np.array(self.points)[None, :])
        return np.any(distances < self.radius, axis=-1)


@dataclass(frozen=True)
class CharacteristicOfLimit(SpectralSet):
    """Values whose scalar orbit under a layer cycle has the target limit class"""

    classify: Callable[[complex], LimitClass]
    target: LimitTag = LimitTag.ONE

    def contains(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values, dtype=complex)
        flags = [self.classify(complex(v)).tag == self.target for v in values.ravel()]
        return np.array(flags, dtype=bool).reshape(values.shape)


# ============================================================================
# CONTOURS AND SUBSPACES
# ============================================================================

@dataclass(frozen=True)
class ContourSpec:
    """Positively oriented circle with an initial quadrature node count"""

    center: complex
    radius: float
    nodes: int = 64

    def __post_init__(self):
        if self.radius <= 0:
            raise ParamOutOfRangeError(f"contour radius must be positive, got {self.radius}")
        if self.nodes < 16:
            raise ParamOutOfRangeError(f"contour needs at least 16 nodes, got {self.nodes}")
        object.__setattr__(self, "center", complex(self.center))

    def gap(self, values: np.ndarray) -> float:
        """Smallest distance from `values` to the circle"""
        values = np.asarray(values, dtype=complex)
        if values.size == 0:
            return float("inf")
        return float(np.min(np.abs(np.abs(values - self.center) - self.radius)))

    def encloses(self, values: np.ndarray) -> np.ndarray:
        return np.abs(np.asarray(values, dtype=complex) - self.center) < self.radius


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """Orthonormal basis of a subspace together with the rank tolerance that produced it"""

    basis: np.ndarray
    rank_tol: float = 1e-8
    ambient_dim: int = field(init=False)

    def __post_init__(self):
        basis = np.array(self.basis, dtype=complex)
        if basis.ndim != 2:
            raise IncompatibleDimsError("basis must be a matrix of column vectors")
        defect = frobenius(basis.conj().T @ basis - np.eye(basis.shape[1]))
        if basis.shape[1] and defect > 1e-10:
            raise SolverFailureError(f"basis columns are not orthonormal (defect {defect:.3e})")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "ambient_dim", basis.shape[0])

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T
