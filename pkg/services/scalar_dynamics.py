"""
Scalar Dynamics

Iteration of composite Schur maps at the scalar level: orbits, limit
classification, grid verification of the Schur bound and the peripheral
fixed-point property, Denjoy-Wolff estimation and the closed form of the
two-layer affine/Blaschke cycle.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from core.config import settings
from core.errors import (
    BoundaryConditionError,
    EmptyCycleError,
    IdentityCycleError,
    NonConvergentError,
    NotSchurError,
    ParamOutOfRangeError,
    PoleAtPointError,
)
from models.operators import CharacteristicOfLimit
from models.schur_map import Affine, Blaschke, Composition, SchurMap
from schemas.reports import (
    BoundReport,
    DenjoyWolffPoint,
    FPPReport,
    FPPViolation,
    LimitClass,
    LimitTag,
    ScalarTrace,
    TerminationReason,
)

logger = logging.getLogger(__name__)

BLOWUP_BOUND = 1e6


# ============================================================================
# GRIDS
# ============================================================================

def disk_grid(radial: int, angular: int) -> np.ndarray:
    """Polar grid over the closed disk, boundary circle included"""
    radii = np.linspace(0.0, 1.0, radial)
    angles = 2 * np.pi * np.arange(angular) / angular
    return (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()


def circle_grid(angular: int) -> np.ndarray:
    """Equispaced unit-circle samples starting at 1"""
    return np.exp(2j * np.pi * np.arange(angular) / angular)


def probe_grid() -> np.ndarray:
    """64 points: radii 1/8 ... 1 times 8 angles (z = 1 included)"""
    radii = np.arange(1, 9) / 8
    angles = 2 * np.pi * np.arange(8) / 8
    return (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()


# ============================================================================
# MAPS AND CYCLES
# ============================================================================

def eval_map(schur_map: SchurMap, z: complex) -> complex:
    """
    Evaluate a map at one point

    Raises:
        PoleAtPointError: denominator magnitude <= pole_tol
    """
    if not np.isfinite(z):
        raise ParamOutOfRangeError(f"evaluation point {z} is not finite")
    return schur_map(complex(z))


def compose_cycle(layers: Sequence[SchurMap]) -> Composition:
    """
    Composite p_K o ... o p_1 as a Composition node

    Raises:
        EmptyCycleError: no layers given
    """
    if not layers:
        raise EmptyCycleError("a layer cycle needs at least one layer")
    return Composition(tuple(layers))


@dataclass(frozen=True)
class LayerCycle:
    """
    Ordered layers applied once per stage

    Every layer must pass the Schur-bound grid check and fix the boundary
    point 1 before it is admitted.
    """

    layers: tuple
    composite: Composition = field(init=False)

    def __post_init__(self):
        layers = tuple(self.layers)
        composite = compose_cycle(layers)
        for index, layer in enumerate(layers):
            report = verify_schur_bound(layer)
            if not report.passed:
                raise NotSchurError(
                    f"layer {index} ({layer.describe()}) has grid sup {report.sup_estimate:.6g} > 1",
                    layer=index,
                    sup=report.sup_estimate,
                )
            at_one = eval_map(layer, 1.0)
            if abs(at_one - 1.0) >= settings.fpp_tol:
                raise BoundaryConditionError(
                    f"layer {index} ({layer.describe()}) maps 1 to {at_one:.6g}",
                    layer=index,
                )
        object.__setattr__(self, "layers", layers)
        object.__setattr__(self, "composite", composite)

    def __len__(self) -> int:
        return len(self.layers)

    def apply_sequential(self, z: np.ndarray) -> np.ndarray:
        value = np.asarray(z, dtype=complex)
        for layer in self.layers:
            value = layer(value)
        return value

    def composite_defect(self) -> float:
        """max |composite - sequential| on the probe grid"""
        grid = probe_grid()
        return float(np.max(np.abs(self.composite(grid) - self.apply_sequential(grid))))


def affine_blaschke_cycle(t: float) -> LayerCycle:
    """Two-layer cycle [Affine(t), Blaschke(t)] with composite z / (1 + t - t z)"""
    return LayerCycle((Affine(t), Blaschke(t)))


# ============================================================================
# ITERATION
# ============================================================================

def _find_cycle(values: list[complex], window: int, tol: float) -> Optional[int]:
    """Smallest k in [2, window] with |values[-1] - values[-1-k]| < tol"""
    current = values[-1]
    for k in range(2, min(window, len(values) - 1) + 1):
        if abs(current - values[-1 - k]) < tol:
            return k
    return None


def iterate_map(
    schur_map: SchurMap,
    z0: complex,
    tol: float = settings.scalar_tol,
    max_iter: int = settings.max_iter,
    cycle_window: int = settings.scalar_cycle_window,
    cycle_tol: float = settings.cycle_tol,
    streak: int = settings.convergence_streak,
) -> ScalarTrace:
    """
    Orbit of z0 under a single map

    Stops when `streak` consecutive steps move less than tol (converged),
    when a period-k repeat with k <= cycle_window shows up while the orbit
    is still moving, or when the orbit blows up (nonconvergent), or after
    max_iter steps (budget).

    Raises:
        PoleAtPointError: propagated from evaluation
    """
    if tol <= 0:
        raise ParamOutOfRangeError(f"tol must be positive, got {tol}")
    if max_iter < 1:
        raise ParamOutOfRangeError(f"max_iter must be >= 1, got {max_iter}")

    values = [complex(z0)]
    quiet = 0
    for _ in range(max_iter):
        nxt = eval_map(schur_map, values[-1])
        delta = abs(nxt - values[-1])
        values.append(nxt)

        if not np.isfinite(nxt) or abs(nxt) > BLOWUP_BOUND:
            return ScalarTrace(start=z0, values=values, terminated_reason=TerminationReason.NONCONVERGENT)

        quiet = quiet + 1 if delta < tol else 0
        if quiet >= streak:
            return ScalarTrace(start=z0, values=values, terminated_reason=TerminationReason.CONVERGED)

        if delta > 10 * cycle_tol:
            period = _find_cycle(values, cycle_window, cycle_tol)
            if period is not None:
                logger.debug("scalar orbit of %s repeats with period %d", z0, period)
                return ScalarTrace(
                    start=z0, values=values, terminated_reason=TerminationReason.NONCONVERGENT
                )

    return ScalarTrace(start=z0, values=values, terminated_reason=TerminationReason.BUDGET)


def iterate_scalar(
    cycle: LayerCycle,
    z0: complex,
    tol: float = settings.scalar_tol,
    max_iter: int = settings.max_iter,
) -> ScalarTrace:
    """
    Orbit f^m(z0) of the cycle's composite

    Args:
        cycle: admitted layer cycle
        z0: start, |z0| <= 1 + 1e-12
        tol: per-step movement threshold
        max_iter: step budget

    Returns:
        ScalarTrace: values f^0(z0), f^1(z0), ...
    """
    if abs(z0) > 1.0 + 1e-12:
        raise ParamOutOfRangeError(f"start point {z0} lies outside the closed disk")
    return iterate_map(cycle.composite, z0, tol=tol, max_iter=max_iter)


def classify_limit(trace: ScalarTrace, tol: float = settings.scalar_tol) -> LimitClass:
    """
    Classify where a scalar orbit ends up

    One / Zero when the last value is within tol of 1 / 0; an interior or
    boundary point when the tail is Cauchy; NonConvergent otherwise
    (including orbits stopped on a detected cycle).
    """
    if trace.terminated_reason == TerminationReason.NONCONVERGENT:
        return LimitClass(tag=LimitTag.NON_CONVERGENT)

    last = trace.last
    if abs(last - 1.0) < tol:
        return LimitClass.one()
    if abs(last) < tol:
        return LimitClass.zero()

    settled = trace.terminated_reason == TerminationReason.CONVERGED or (
        len(trace.values) >= 2 and abs(trace.values[-1] - trace.values[-2]) < tol
    )
    if not settled:
        return LimitClass(tag=LimitTag.NON_CONVERGENT)
    if abs(last) < 1.0 - tol:
        return LimitClass(tag=LimitTag.INTERIOR_POINT, tau=last)
    return LimitClass(tag=LimitTag.BOUNDARY_POINT, tau=last)


def characteristic_set(
    cycle: LayerCycle,
    target: LimitTag = LimitTag.ONE,
    tol: float = settings.scalar_tol,
) -> CharacteristicOfLimit:
    """Spectral set of values whose orbit under the cycle has the target limit class"""
    return CharacteristicOfLimit(
        classify=lambda value: classify_limit(iterate_scalar(cycle, value, tol=tol), tol),
        target=target,
    )


# ============================================================================
# GRID VERIFICATION
# ============================================================================

def evaluate_on_grid(schur_map: SchurMap, points: np.ndarray) -> tuple[np.ndarray, Optional[complex]]:
    """Evaluate, returning nan at poles and the first pole location"""
    try:
        return schur_map(points), None
    except PoleAtPointError:
        pass
    values = np.empty(points.shape, dtype=complex)
    first_pole = None
    for i, z in enumerate(points):
        try:
            values[i] = schur_map(complex(z))
        except PoleAtPointError as e:
            values[i] = np.nan
            first_pole = e.location if first_pole is None else first_pole
    return values, first_pole


def verify_schur_bound(
    schur_map: SchurMap,
    radial: int = settings.schur_radial,
    angular: int = settings.schur_angular,
) -> BoundReport:
    """
    Sample |map| on the polar disk grid

    A pole on the grid is an automatic failure with the pole location
    recorded.
    """
    if radial < 16 or angular < 64:
        raise ParamOutOfRangeError(f"grid {radial}x{angular} below the 16x64 minimum")

    grid = disk_grid(radial, angular)
    values, pole = evaluate_on_grid(schur_map, grid)
    if pole is not None:
        logger.debug("schur bound: %s has a pole at %s", schur_map.describe(), pole)
        return BoundReport(
            sup_estimate=float("inf"), passed=False, pole=pole, radial=radial, angular=angular
        )

    moduli = np.abs(values)
    index = int(np.argmax(moduli))
    sup = float(moduli[index])
    return BoundReport(
        sup_estimate=sup,
        passed=sup <= 1.0 + settings.schur_bound_slack,
        argmax=complex(grid[index]),
        radial=radial,
        angular=angular,
    )


def verify_peripheral_fpp(
    schur_map: SchurMap,
    angular: int = settings.fpp_angular,
    tol: float = settings.fpp_tol,
) -> FPPReport:
    """
    Unit-circle scan: |map(lambda)| = 1 must imply map(lambda) = lambda

    Returns:
        FPPReport: every sample that keeps modulus 1 but moves
    """
    if angular < 256:
        raise ParamOutOfRangeError(f"angular resolution {angular} below 256")

    circle = circle_grid(angular)
    values, pole = evaluate_on_grid(schur_map, circle)
    if pole is not None:
        logger.warning("peripheral scan: %s has a pole on the unit circle at %s", schur_map.describe(), pole)

    violations = []
    for point, value in zip(circle, values):
        if not np.isfinite(value):
            continue
        if abs(value) > 1.0 - tol and abs(value - point) >= tol:
            violations.append(FPPViolation(point=complex(point), value=complex(value)))
    return FPPReport(violations=violations, angular=angular)


# ============================================================================
# FIXED POINTS AND CLOSED FORMS
# ============================================================================

def denjoy_wolff(
    cycle: LayerCycle,
    tol: float = settings.scalar_tol,
    max_iter: int = settings.max_iter,
) -> DenjoyWolffPoint:
    """
    Attracting point of the composite by forward iteration

    Seeds 0 and 0.5i must reach the same limit within 10 * tol.

    Raises:
        IdentityCycleError: composite acts as the identity
        NonConvergentError: an orbit did not settle or the seeds disagree
    """
    grid = probe_grid()
    if np.max(np.abs(cycle.composite(grid) - grid)) < 1e-12:
        raise IdentityCycleError("composite acts as the identity; every point is fixed")

    limits = []
    for seed in (0j, 0.5j):
        trace = iterate_scalar(cycle, seed, tol=tol, max_iter=max_iter)
        if trace.terminated_reason != TerminationReason.CONVERGED:
            raise NonConvergentError(
                f"orbit of {seed} stopped with reason '{trace.terminated_reason.value}'",
                seed=seed,
            )
        limits.append(trace.last)

    gap = abs(limits[0] - limits[1])
    if gap > 10 * tol:
        raise NonConvergentError(f"seed limits disagree by {gap:.3e}", gap=gap)

    tau = limits[0]
    return DenjoyWolffPoint(tau=tau, interior=abs(tau) < 1.0 - tol, seed_gap=gap)


def closed_form_param_iterate(t: float, m: int, z: complex) -> complex:
    """
    m-th iterate of z / (1 + t - t z) in closed form

    f^m(z) = mu^m z / (1 - (1 - mu^m) z), mu = 1 / (1 + t)

    Raises:
        PoleAtPointError: denominator magnitude <= pole_tol
    """
    if not 0.0 < t < 1.0:
        raise ParamOutOfRangeError(f"t={t} outside (0, 1)")
    if m < 0:
        raise ParamOutOfRangeError(f"iteration count must be >= 0, got {m}")
    if abs(z) > 1.0 + 1e-12:
        raise ParamOutOfRangeError(f"point {z} lies outside the closed disk")

    decay = (1.0 / (1.0 + t)) ** m
    den = 1.0 - (1.0 - decay) * z
    if abs(den) <= settings.pole_tol:
        raise PoleAtPointError(complex(z), abs(den))
    return complex(decay * z / den)


def derivative_at(schur_map: SchurMap, z: complex, step: float = 1e-5) -> complex:
    """Central-difference derivative"""
    return (eval_map(schur_map, z + step) - eval_map(schur_map, z - step)) / (2 * step)
