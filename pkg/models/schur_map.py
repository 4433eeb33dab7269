"""
Schur Maps

Symbolic holomorphic self-maps of the closed unit disk.
Each variant is an immutable value; evaluation is vectorized over numpy arrays.

Variants:
- Identity, Affine(t), Blaschke(t), Mobius(a, b, c, d)
- Polynomial(coeffs), Rational(num, den)   (ascending coefficient order)
- Composition(maps)   applied left-to-right
- Product(maps)       pointwise product
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import reduce
from typing import Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as P

from core.config import settings
from core.errors import ParamOutOfRangeError, PoleAtPointError

ArrayLike = Union[complex, float, np.ndarray]
Coefficients = Tuple[complex, ...]


def _coeffs(values) -> Coefficients:
    return tuple(complex(v) for v in values)


def _trim(coeffs: np.ndarray) -> np.ndarray:
    """Drop trailing (highest order) exact zeros but keep at least one coefficient"""
    coeffs = np.asarray(coeffs, dtype=complex)
    nonzero = np.nonzero(coeffs)[0]
    if nonzero.size == 0:
        return np.zeros(1, dtype=complex)
    return coeffs[: nonzero[-1] + 1]


def _check_denominator(z: np.ndarray, den: np.ndarray) -> None:
    small = np.abs(den) <= settings.pole_tol
    if np.any(small):
        index = np.flatnonzero(small)[0]
        raise PoleAtPointError(complex(z.flat[index]), float(np.abs(den.flat[index])))


class SchurMap(ABC):
    """Base class of all map variants"""

    kind: str = "abstract"

    def __call__(self, z: ArrayLike) -> ArrayLike:
        arr = np.asarray(z, dtype=complex)
        out = self.evaluate(arr)
        if arr.ndim == 0:
            return complex(out)
        return out

    @abstractmethod
    def evaluate(self, z: np.ndarray) -> np.ndarray:
        """
        Evaluate on an array of points

        Raises:
            PoleAtPointError: a denominator magnitude is <= pole_tol
        """

    @abstractmethod
    def as_rational(self) -> Tuple[np.ndarray, np.ndarray]:
        """Coefficient form (num, den), ascending order"""

    def poles(self) -> list[complex]:
        """Finite poles of the coefficient form (empty for entire maps)"""
        _, den = self.as_rational()
        den = _trim(den)
        if den.size <= 1:
            return []
        return [complex(r) for r in P.polyroots(den)]

    def describe(self) -> str:
        return self.kind


# ============================================================================
# ELEMENTARY VARIANTS
# ============================================================================

@dataclass(frozen=True)
class Identity(SchurMap):
    kind = "identity"

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        return np.array(z, dtype=complex, copy=True)

    def as_rational(self):
        return np.array([0, 1], dtype=complex), np.array([1], dtype=complex)


@dataclass(frozen=True)
class Affine(SchurMap):
    """t + (1 - t) z, for 0 < t < 1"""

    t: float
    kind = "affine"

    def __post_init__(self):
        if not 0.0 < self.t < 1.0:
            raise ParamOutOfRangeError(f"Affine parameter t={self.t} outside (0, 1)", t=self.t)

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        return self.t + (1.0 - self.t) * np.asarray(z, dtype=complex)

    def as_rational(self):
        return np.array([self.t, 1.0 - self.t], dtype=complex), np.array([1], dtype=complex)

    def describe(self) -> str:
        return f"affine(t={self.t:g})"


@dataclass(frozen=True)
class Blaschke(SchurMap):
    """(z - t) / (1 - t z), for 0 <= t < 1; vanishes at t and fixes 1"""

    t: float
    kind = "blaschke"

    def __post_init__(self):
        if not 0.0 <= self.t < 1.0:
            raise ParamOutOfRangeError(f"Blaschke parameter t={self.t} outside [0, 1)", t=self.t)

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        den = 1.0 - self.t * z
        _check_denominator(z, den)
        return (z - self.t) / den

    def as_rational(self):
        return (
            np.array([-self.t, 1.0], dtype=complex),
            np.array([1.0, -self.t], dtype=complex),
        )

    def poles(self) -> list[complex]:
        return [complex(1.0 / self.t)] if self.t > 0 else []

    def describe(self) -> str:
        return f"blaschke(t={self.t:g})"


@dataclass(frozen=True)
class Mobius(SchurMap):
    """(a z + b) / (c z + d)"""

    a: complex
    b: complex
    c: complex
    d: complex
    kind = "mobius"

    def __post_init__(self):
        if self.c == 0 and self.d == 0:
            raise ParamOutOfRangeError("Mobius denominator is identically zero")
        if abs(self.c + self.d) <= settings.pole_tol:
            raise ParamOutOfRangeError("Mobius map has a pole at z=1", c=self.c, d=self.d)

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        den = self.c * z + self.d
        _check_denominator(z, den)
        return (self.a * z + self.b) / den

    def as_rational(self):
        return (
            np.array([self.b, self.a], dtype=complex),
            np.array([self.d, self.c], dtype=complex),
        )

    def poles(self) -> list[complex]:
        return [complex(-self.d / self.c)] if self.c != 0 else []

    def describe(self) -> str:
        return f"mobius({self.a:g}, {self.b:g}, {self.c:g}, {self.d:g})"


@dataclass(frozen=True)
class Polynomial(SchurMap):
    coeffs: Coefficients
    kind = "polynomial"

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ParamOutOfRangeError("Polynomial needs at least one coefficient")
        object.__setattr__(self, "coeffs", _coeffs(self.coeffs))

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        return P.polyval(np.asarray(z, dtype=complex), np.array(self.coeffs))

    def as_rational(self):
        return np.array(self.coeffs, dtype=complex), np.array([1], dtype=complex)

    def poles(self) -> list[complex]:
        return []

    def describe(self) -> str:
        return f"polynomial(degree={len(self.coeffs) - 1})"


@dataclass(frozen=True)
class Rational(SchurMap):
    """
    num(z) / den(z)

    The denominator must have no zero on the closed unit disk; this is
    checked on its roots at construction.
    """

    num: Coefficients
    den: Coefficients
    kind = "rational"

    def __post_init__(self):
        object.__setattr__(self, "num", _coeffs(self.num))
        object.__setattr__(self, "den", _coeffs(self.den))
        den = _trim(np.array(self.den))
        if not np.any(den):
            raise ParamOutOfRangeError("Rational denominator is identically zero")
        if den.size > 1:
            roots = P.polyroots(den)
            inside = roots[np.abs(roots) <= 1.0 + 1e-12]
            if inside.size:
                raise ParamOutOfRangeError(
                    f"Rational denominator vanishes in the closed disk at {complex(inside[0]):.6g}",
                    root=complex(inside[0]),
                )

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        den = P.polyval(z, np.array(self.den))
        _check_denominator(z, den)
        return P.polyval(z, np.array(self.num)) / den

    def as_rational(self):
        return np.array(self.num, dtype=complex), np.array(self.den, dtype=complex)

    def describe(self) -> str:
        return f"rational(deg {len(self.num) - 1}/{len(self.den) - 1})"


# ============================================================================
# COMBINATORS
# ============================================================================

def _compose_rational(outer, inner):
    """Coefficients of outer(inner(z)) for rational outer and inner"""
    n_out, d_out = (_trim(c) for c in outer)
    a, b = (_trim(c) for c in inner)
    degree = max(len(n_out), len(d_out)) - 1

    def substitute(coeffs):
        total = np.zeros(1, dtype=complex)
        for k, c in enumerate(coeffs):
            term = c * P.polymul(P.polypow(a, k), P.polypow(b, degree - k))
            total = P.polyadd(total, term)
        return total

    return substitute(n_out), substitute(d_out)


@dataclass(frozen=True)
class Composition(SchurMap):
    """maps[0] first, then maps[1], ..."""

    maps: Tuple[SchurMap, ...]
    kind = "composition"

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(self.maps))

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        value = np.asarray(z, dtype=complex)
        for layer in self.maps:
            value = layer.evaluate(value)
        return value

    def as_rational(self):
        if not self.maps:
            return Identity().as_rational()
        return reduce(
            lambda acc, layer: _compose_rational(layer.as_rational(), acc),
            self.maps[1:],
            self.maps[0].as_rational(),
        )

    def describe(self) -> str:
        return " -> ".join(m.describe() for m in self.maps) or "identity"


@dataclass(frozen=True)
class Product(SchurMap):
    maps: Tuple[SchurMap, ...]
    kind = "product"

    def __post_init__(self):
        if not self.maps:
            raise ParamOutOfRangeError("Product needs at least one factor")
        object.__setattr__(self, "maps", tuple(self.maps))

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        value = np.ones_like(np.asarray(z, dtype=complex))
        for factor in self.maps:
            value = value * factor.evaluate(z)
        return value

    def as_rational(self):
        num = np.ones(1, dtype=complex)
        den = np.ones(1, dtype=complex)
        for factor in self.maps:
            n, d = factor.as_rational()
            num = P.polymul(num, n)
            den = P.polymul(den, d)
        return num, den

    def describe(self) -> str:
        return " * ".join(m.describe() for m in self.maps)


def rotation(angle: float) -> Polynomial:
    """z -> e^{i angle} z (does not fix 1 unless angle is a multiple of 2 pi)"""
    return Polynomial((0.0, np.exp(1j * angle)))


# ============================================================================
# INTERPOLATION DATA
# ============================================================================

@dataclass(frozen=True)
class InterpolationProblem:
    """
    Two-point data: s(t) = 0 at an interior node, s(1) = 1 on the boundary

    t = 0 is accepted as the degenerate node (b_0 is the identity).
    """

    t: float

    interior_target = 0.0
    boundary_node = 1.0
    boundary_target = 1.0

    def __post_init__(self):
        t = float(self.t)
        if not np.isfinite(t) or not 0.0 <= t < 1.0:
            raise ParamOutOfRangeError(f"interior node t={self.t} outside [0, 1)", t=self.t)
        object.__setattr__(self, "t", t)


__all__ = [
    "SchurMap",
    "Identity",
    "Affine",
    "Blaschke",
    "Mobius",
    "Polynomial",
    "Rational",
    "Composition",
    "Product",
    "rotation",
    "InterpolationProblem",
]
