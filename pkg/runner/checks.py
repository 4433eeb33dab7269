"""
Named Checks

Registry of the checks a scenario can request. Each check receives the
run context and returns exactly one CheckResult; multi-part checks fold
their parts into the worst residual with the parts listed in `detail`.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from core.config import settings
from core.errors import SpectralCascadeError
from core.numerics import frobenius, operator_norm
from models.operators import ContourSpec, ExplicitPoints, NormalOperator, as_matrix
from models.schur_map import Affine, Blaschke, Composition, SchurMap
from runner.builder import build_map
from schemas.common import MatrixDocument
from schemas.reports import CheckResult, ConvergenceReport, IterationStatus
from schemas.scenario import CheckName, Scenario, ScenarioMode
from services.iteration.checks import (
    boundary_separation_check,
    check_limit_properties,
    riesz_product_identity,
    stage_omega_check,
)
from services.iteration.engine import POWER_GUARD_BOUND, cesaro_projection
from services.iteration.subspaces import angle_between, fixed_space, joint_fixed_space, range_space
from services.matrix_calculus import (
    apply_map,
    eigenvalues_of,
    isolating_contour,
    normal_or_none,
    power_bound_estimate,
    riesz_projection,
    ritt_constant,
    spectral_projection,
)
from services.scalar_dynamics import (
    LayerCycle,
    characteristic_set,
    closed_form_param_iterate,
    derivative_at,
    disk_grid,
    evaluate_on_grid,
    iterate_scalar,
    probe_grid,
    verify_peripheral_fpp,
    verify_schur_bound,
)

logger = logging.getLogger(__name__)

CHECK_TOL = 1e-8
SUBSPACE_TOL = 1e-7
RIESZ_TOL = 1e-6
CLOSED_FORM_TOL = 1e-12
CLOSED_FORM_STEPS = 40
GROWTH_TOL = 0.01
LINEAR_GROWTH_TOL = 0.1
INVOLUTION_TOL = 1e-10


@dataclass
class RunContext:
    """
    Everything a check may look at

    Attributes:
        operator: the scenario operator A
        psi: the composite applied to A (A itself when there are no layers)
        base: the operator whose limit the run tracks (A for function and
            conjugation runs, psi for power, Cesaro and Riesz runs)
    """

    scenario: Scenario
    operator: object
    layers: list[SchurMap]
    cycle: Optional[LayerCycle]
    psi: object
    base: object
    report: ConvergenceReport
    contour: Optional[ContourSpec] = None
    notes: dict = field(default_factory=dict)

    @property
    def tol(self) -> float:
        return max(CHECK_TOL, 100 * self.scenario.tolerance)


CheckFunction = Callable[[RunContext], CheckResult]


def _missing(reason: str) -> CheckResult:
    return CheckResult(residual=float("inf"), passed=False, detail=reason)


def _fold(parts: dict[str, CheckResult]) -> CheckResult:
    if not parts:
        return CheckResult(residual=0.0, passed=True, detail="no parts")
    residual = max(part.residual for part in parts.values())
    detail = ", ".join(f"{name}={part.residual:.3e}" for name, part in parts.items())
    return CheckResult(residual=residual, passed=all(p.passed for p in parts.values()), detail=detail)


def _normal_form(operator) -> Optional[NormalOperator]:
    if isinstance(operator, NormalOperator):
        return operator
    return normal_or_none(as_matrix(operator))


def _unit_contour(ctx: RunContext, operator) -> ContourSpec:
    if ctx.contour is not None:
        return ctx.contour
    return isolating_contour(eigenvalues_of(operator), 1.0)


def _matrix_note(matrix: np.ndarray) -> list:
    return MatrixDocument.from_matrix(matrix).model_dump()["rows"]


class CheckRegistry:
    """
    Named check registry

    Checks register with the `register` decorator and run in request order;
    toolkit errors inside a check become a failed result carrying the error
    text, so one broken check never hides the others.
    """

    def __init__(self):
        self._checks: dict[CheckName, CheckFunction] = {}

    def register(self, name: CheckName):
        def decorator(function: CheckFunction) -> CheckFunction:
            self._checks[name] = function
            return function
        return decorator

    @property
    def names(self) -> list[str]:
        return [name.value for name in self._checks]

    def run(self, names: list[CheckName], ctx: RunContext) -> dict[str, CheckResult]:
        results = {}
        for name in names:
            check = self._checks.get(name)
            if check is None:
                results[name.value] = _missing(f"no check registered under '{name.value}'")
                continue
            try:
                results[name.value] = check(ctx)
            except SpectralCascadeError as e:
                logger.warning("check %s failed with %s: %s", name.value, type(e).__name__, e)
                results[name.value] = _missing(f"{type(e).__name__}: {e}")
        return results


registry = CheckRegistry()


# ============================================================================
# LIMIT CHECKS
# ============================================================================

@registry.register(CheckName.LIMIT_PROPERTIES)
def limit_properties(ctx: RunContext) -> CheckResult:
    if ctx.report.limit is None:
        return _missing("run produced no limit")
    return _fold(check_limit_properties(ctx.report.limit, ctx.base, ctx.tol))


@registry.register(CheckName.STAGE_OMEGA)
def stage_omega(ctx: RunContext) -> CheckResult:
    if ctx.cycle is None or ctx.scenario.mode != ScenarioMode.FUNCTION:
        return _missing("stage_omega needs a function-iteration run")
    if ctx.report.limit is None:
        return _missing("run produced no limit")
    return stage_omega_check(ctx.report.limit, ctx.cycle, ctx.tol)


@registry.register(CheckName.SPECTRAL_PROJECTION_MATCH)
def spectral_projection_match(ctx: RunContext) -> CheckResult:
    """Limit against E(S): S = values classified One (function runs) or S = {1}"""
    if ctx.report.limit is None:
        return _missing("run produced no limit")

    normal = _normal_form(ctx.base)
    if normal is not None:
        if ctx.scenario.mode == ScenarioMode.FUNCTION and ctx.cycle is not None:
            target = spectral_projection(normal, characteristic_set(ctx.cycle))
        else:
            target = spectral_projection(normal, ExplicitPoints((1.0,), radius=1e-6))
        detail = "spectral projection"
    else:
        target = riesz_projection(ctx.base, _unit_contour(ctx, ctx.base))
        detail = "riesz projection at 1"

    residual = frobenius(as_matrix(ctx.report.limit) - target)
    return CheckResult(residual=residual, passed=residual < ctx.tol, detail=detail)


@registry.register(CheckName.FIXED_SPACE)
def fixed_space_match(ctx: RunContext) -> CheckResult:
    """
    Range of the limit against ker(I - psi); against the joint fixed space
    of the layers as well when boundary separation holds
    """
    if ctx.report.limit is None:
        return _missing("run produced no limit")

    composite_fixed = fixed_space(ctx.psi)
    parts = {
        "range_vs_fixed": angle_between(range_space(ctx.report.limit), composite_fixed),
    }
    if ctx.layers and boundary_separation_check(ctx.layers).passed:
        images = [apply_map(ctx.operator, layer) for layer in ctx.layers]
        parts["fixed_vs_joint"] = angle_between(composite_fixed, joint_fixed_space(images))

    ctx.notes["fixed_space_dim"] = composite_fixed.dim
    residual = max(parts.values())
    detail = ", ".join(f"{name}={angle:.3e}" for name, angle in parts.items())
    return CheckResult(residual=residual, passed=residual < SUBSPACE_TOL, detail=detail)


# ============================================================================
# SCALAR CHECKS
# ============================================================================

@registry.register(CheckName.BOUNDARY_SEPARATION)
def boundary_separation(ctx: RunContext) -> CheckResult:
    if not ctx.layers:
        return _missing("boundary separation needs layers")
    report = boundary_separation_check(ctx.layers)
    residual = max((v.residual for v in report.violations), default=0.0)
    ctx.notes["composite_fixed_on_circle"] = len(report.composite_fixed)
    return CheckResult(
        residual=residual,
        passed=report.passed,
        detail=f"{len(report.composite_fixed)} composite-fixed samples, {len(report.violations)} violations",
    )


@registry.register(CheckName.SCHUR_BOUND)
def schur_bound(ctx: RunContext) -> CheckResult:
    if not ctx.layers:
        return _missing("schur bound needs layers")
    reports = [verify_schur_bound(layer) for layer in ctx.layers]
    excess = max(max(r.sup_estimate - 1.0, 0.0) for r in reports)
    sups = ", ".join(f"{r.sup_estimate:.6g}" for r in reports)
    return CheckResult(residual=excess, passed=all(r.passed for r in reports), detail=f"grid sups: {sups}")


@registry.register(CheckName.PERIPHERAL_FPP)
def peripheral_fpp(ctx: RunContext) -> CheckResult:
    """Composite-level verdict; per-layer violation counts go to the notes"""
    if not ctx.layers:
        return _missing("peripheral scan needs layers")
    per_layer = {str(i): len(verify_peripheral_fpp(layer).violations) for i, layer in enumerate(ctx.layers)}
    ctx.notes["peripheral_fpp_layer_violations"] = per_layer

    report = verify_peripheral_fpp(Composition(tuple(ctx.layers)))
    residual = max((abs(v.value - v.point) for v in report.violations), default=0.0)
    return CheckResult(
        residual=residual,
        passed=report.passed,
        detail=f"composite violations: {len(report.violations)}",
    )


@registry.register(CheckName.CLOSED_FORM)
def closed_form(ctx: RunContext) -> CheckResult:
    layers = ctx.layers
    if not (
        len(layers) == 2
        and isinstance(layers[0], Affine)
        and isinstance(layers[1], Blaschke)
        and layers[0].t == layers[1].t
    ):
        return _missing("closed form applies to the [affine(t), blaschke(t)] cycle")
    t = layers[0].t

    worst = 0.0
    for z in probe_grid():
        trace = iterate_scalar(ctx.cycle, complex(z))
        for m, value in enumerate(trace.values[: CLOSED_FORM_STEPS + 1]):
            worst = max(worst, abs(value - closed_form_param_iterate(t, m, complex(z))))
    return CheckResult(residual=worst, passed=worst < CLOSED_FORM_TOL, detail=f"t={t:g}, m<={CLOSED_FORM_STEPS}")


@registry.register(CheckName.REFERENCE_CLAIM)
def reference_claim(ctx: RunContext) -> CheckResult:
    """Compare a claim with the computed value; pass when the match outcome is the declared one"""
    claim = ctx.scenario.reference
    if claim is None:
        return _missing("scenario declares no reference")

    if claim.composite is not None:
        claimed = build_map(claim.composite)
        computed = Composition(tuple(ctx.layers))
        grid = disk_grid(settings.schur_radial, settings.schur_angular)
        a, _ = evaluate_on_grid(claimed, grid)
        b, _ = evaluate_on_grid(computed, grid)
        residual = float(np.nanmax(np.abs(a - b)))
        ctx.notes["reference"] = {
            "kind": "composite",
            "claimed": claimed.describe(),
            "computed": computed.describe(),
            "sup_gap": residual,
            "gap_at_half": abs(claimed(0.5) - computed(0.5)),
        }
    else:
        if ctx.scenario.mode == ScenarioMode.CONJUGATION and len(ctx.report.trajectory) > 1:
            computed_matrix = as_matrix(ctx.report.trajectory[1])
        elif ctx.report.limit is not None:
            computed_matrix = as_matrix(ctx.report.limit)
        else:
            return _missing("no computed matrix to compare with")
        residual = frobenius(computed_matrix - claim.matrix)
        ctx.notes["reference"] = {
            "kind": "matrix",
            "claimed": _matrix_note(claim.matrix),
            "computed": _matrix_note(computed_matrix),
            "gap": residual,
        }

    matches = residual < claim.tolerance
    ctx.notes["reference"]["matches"] = matches
    ctx.notes["reference"]["mismatch_flagged"] = not matches
    if not matches:
        logger.info("reference claim differs from the computed value by %.3e", residual)
    return CheckResult(
        residual=residual,
        passed=matches == claim.expect_match,
        detail=f"matches={matches}, expected={claim.expect_match}",
    )


# ============================================================================
# RIESZ AND ERGODIC CHECKS
# ============================================================================

@registry.register(CheckName.RIESZ_PRODUCT)
def riesz_product(ctx: RunContext) -> CheckResult:
    if not ctx.layers:
        return _missing("riesz product needs layers")
    return _fold(riesz_product_identity(ctx.operator, ctx.layers, ctx.contour, tol=RIESZ_TOL))


@registry.register(CheckName.RIESZ_VS_CESARO)
def riesz_vs_cesaro(ctx: RunContext) -> CheckResult:
    riesz = riesz_projection(ctx.psi, _unit_contour(ctx, ctx.psi))
    ergodic = cesaro_projection(ctx.psi, tol=ctx.scenario.tolerance)
    if ergodic.status != IterationStatus.CONVERGED:
        return _missing(f"cesaro means ended with status '{ergodic.status.value}'")
    residual = frobenius(riesz - as_matrix(ergodic.limit))
    return CheckResult(residual=residual, passed=residual < RIESZ_TOL, detail=f"cesaro N={ergodic.stage}")


@registry.register(CheckName.RITT_CONSTANT)
def ritt(ctx: RunContext) -> CheckResult:
    estimate = ritt_constant(ctx.psi)
    return CheckResult(
        residual=estimate.constant,
        passed=estimate.is_ritt,
        detail=f"grid {estimate.radial}x{estimate.angular}",
    )


@registry.register(CheckName.POWER_BOUND)
def power_bound(ctx: RunContext) -> CheckResult:
    bound = power_bound_estimate(ctx.psi, 200)
    return CheckResult(
        residual=bound.estimate,
        passed=bound.bounded and bound.estimate < POWER_GUARD_BOUND,
        detail=f"max ||psi^n||_2 over n <= {bound.n_evaluated}",
    )


# ============================================================================
# COUNTEREXAMPLE CHECKS
# ============================================================================

@registry.register(CheckName.JORDAN_GROWTH)
def jordan_growth(ctx: RunContext) -> CheckResult:
    """
    Function runs: per-stage growth of the (0, 1) entry against |f'(lambda)|.
    Other runs: ||T^n||_2 / n over n in [50, 200].
    """
    if ctx.scenario.mode == ScenarioMode.FUNCTION:
        stages = [as_matrix(m) for m in ctx.report.trajectory]
        entries = [abs(m[0, 1]) for m in stages if np.all(np.isfinite(m))]
        if len(entries) < 3 or entries[-2] == 0.0:
            return _missing("not enough finite stages to measure growth")
        tail = entries[-min(len(entries), 11):]
        ratios = np.array(tail[1:]) / np.array(tail[:-1])
        eigenvalue = complex(as_matrix(ctx.operator)[0, 0])
        expected = abs(derivative_at(ctx.cycle.composite, eigenvalue))
        residual = abs(float(np.mean(ratios)) / expected - 1.0)
        ctx.notes["jordan_growth_ratio"] = float(np.mean(ratios))
        ctx.notes["jordan_expected_ratio"] = expected
        return CheckResult(residual=residual, passed=residual < GROWTH_TOL, detail=f"expected ratio {expected:.6g}")

    matrix = as_matrix(ctx.psi)
    power = np.linalg.matrix_power(matrix, 49)
    deviations = []
    for n in range(50, 201):
        power = power @ matrix
        deviations.append(abs(operator_norm(power) / n - 1.0))
    residual = max(deviations)
    return CheckResult(residual=residual, passed=residual <= LINEAR_GROWTH_TOL, detail="||T^n|| / n, n in [50, 200]")


@registry.register(CheckName.INVOLUTION_PERIOD)
def involution_period(ctx: RunContext) -> CheckResult:
    if ctx.scenario.mode != ScenarioMode.CONJUGATION:
        return _missing("involution period needs a conjugation run")
    S = np.asarray(ctx.scenario.layers[0].matrix)
    residual = frobenius(S @ S - np.eye(S.shape[0]))
    status = ctx.report.status
    period_ok = status == IterationStatus.CONVERGED or (status == IterationStatus.CYCLE and ctx.report.period == 2)
    return CheckResult(
        residual=residual,
        passed=residual < INVOLUTION_TOL and period_ok,
        detail=f"status={status.value}, period={ctx.report.period}",
    )
