"""
Verify Suites

Seeded self-checks behind `verify --suite`. Each suite returns named
CheckResults; `fixtures` runs every shipped scenario and expects exit 0.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional

import numpy as np

from core.config import settings
from core.numerics import frobenius, multiset_distance
from models.operators import DenseOperator, ExplicitPoints, NormalOperator
from models.schur_map import Affine, Blaschke, Composition, InterpolationProblem, Polynomial, Rational
from runner.fixtures import list_fixtures, load_fixture, normal_ensemble
from runner.orchestrator import ScenarioOrchestrator
from schemas.reports import CheckResult, IterationStatus, LimitTag
from services.iteration.config import IterationConfig, IterationMode
from services.iteration.engine import cesaro_projection, conjugation_cycle, iterate_operator
from services.matrix_calculus import apply_borel, apply_map, spectral_projection, spectrum_image
from services.scalar_dynamics import (
    affine_blaschke_cycle,
    classify_limit,
    closed_form_param_iterate,
    disk_grid,
    iterate_scalar,
    probe_grid,
)
from services.schur_interp import blaschke_power, solve_two_point

logger = logging.getLogger(__name__)

SUITES = ("scalar", "matrix", "engine", "fixtures")

SuiteFunction = Callable[[int], dict[str, CheckResult]]


def _result(residual: float, passed: bool, detail: Optional[str] = None) -> CheckResult:
    return CheckResult(residual=float(residual), passed=bool(passed), detail=detail)


# ============================================================================
# SUITES
# ============================================================================

def scalar_suite(seed: int) -> dict[str, CheckResult]:
    rng = np.random.default_rng(seed)
    results = {}

    worst = 0.0
    for t in (0.1, 0.5, 0.9):
        cycle = affine_blaschke_cycle(t)
        for z in probe_grid():
            trace = iterate_scalar(cycle, complex(z))
            for m, value in enumerate(trace.values[:41]):
                worst = max(worst, abs(value - closed_form_param_iterate(t, m, complex(z))))
    results["closed_form"] = _result(worst, worst < 1e-12)

    cycle = affine_blaschke_cycle(0.5)
    points = np.sqrt(rng.uniform(0, 1, 200)) * np.exp(2j * np.pi * rng.uniform(0, 1, 200))
    wrong = sum(classify_limit(iterate_scalar(cycle, complex(z)), 1e-9).tag != LimitTag.ZERO for z in points)
    wrong += classify_limit(iterate_scalar(cycle, 1.0), 1e-9).tag != LimitTag.ONE
    results["dichotomy"] = _result(wrong, wrong == 0, "misclassified points")

    claimed = Rational((0, 0, 1), (2, 0, -1))
    composed = Composition((Polynomial((0.5, 0, 0.5)), Blaschke(0.5)))
    grid = disk_grid(settings.schur_radial, settings.schur_angular)
    gap = float(np.max(np.abs(claimed(grid) - composed(grid))))
    results["claimed_composite_gap"] = _result(gap, gap > 0.1, "claimed vs composed layers")

    worst_cert = 0.0
    failures = 0
    for _ in range(20):
        t = float(rng.uniform(0.05, 0.95))
        phi = blaschke_power(float(rng.uniform(0.0, 0.9)), int(rng.integers(1, 5)))
        solution = solve_two_point(InterpolationProblem(t), phi)
        worst_cert = max(worst_cert, solution.certificate.residual_at_t, solution.certificate.residual_at_1)
        failures += solution.certificate.sup_estimate > 1.0 + 1e-9
    results["interpolation"] = _result(worst_cert, worst_cert < 1e-8 and failures == 0)
    return results


def matrix_suite(seed: int) -> dict[str, CheckResult]:
    results = {}
    ensemble = normal_ensemble(seed, 10)
    g, h = Affine(0.3), Blaschke(0.4)

    worst = 0.0
    for A in ensemble:
        inner = apply_borel(A, h)
        from_image = apply_map(DenseOperator(inner), g)
        worst = max(worst, frobenius(apply_borel(A, Composition((h, g))) - from_image))
    results["composition_law"] = _result(worst, worst < 1e-8)

    worst = 0.0
    f = Composition((Affine(0.5), Blaschke(0.5)))
    for A in ensemble:
        image = apply_borel(A, f)
        worst = max(worst, multiset_distance(np.linalg.eigvals(image), spectrum_image(A, f)))
    results["spectral_mapping"] = _result(worst, worst < 1e-8)

    A = np.array([[1.0, 2.0], [0.0, -1.0]])
    squared = apply_map(A, Polynomial((0, 0, 1)))
    averaged = apply_map(A, Affine(0.5))
    residual = max(frobenius(squared - np.eye(2)), frobenius(averaged - np.array([[1.0, 1.0], [0.0, 0.0]])))
    results["jordan_free_examples"] = _result(residual, residual < 1e-12, "polynomial layers by Horner")
    return results


def engine_suite(seed: int) -> dict[str, CheckResult]:
    results = {}
    cycle = affine_blaschke_cycle(0.5)
    config = IterationConfig(mode=IterationMode.FUNCTION)

    worst = 0.0
    unconverged = 0
    for A in normal_ensemble(seed, 10):
        report = iterate_operator(A, cycle, config)
        if report.status != IterationStatus.CONVERGED:
            unconverged += 1
            continue
        target = spectral_projection(A, ExplicitPoints((1.0,)))
        worst = max(worst, frobenius(report.limit - target))
    results["projection_limit"] = _result(worst, worst < 1e-8 and unconverged == 0)

    flip = cesaro_projection(NormalOperator.diagonal([1.0, -1.0]), tol=1e-10, max_N=10 ** 5)
    residual = frobenius(flip.limit - np.diag([1.0, 0.0])) if flip.limit is not None else float("inf")
    results["cesaro_flip"] = _result(residual, residual < 1e-6)

    swap = np.array([[0.0, 1.0], [1.0, 0.0]])
    jordan = np.array([[1.0, 1.0], [0.0, 1.0]])
    report = conjugation_cycle(jordan, swap, IterationConfig(mode=IterationMode.CONJUGATION, conjugator=swap))
    results["swap_cycle"] = _result(
        report.period or 0, report.status == IterationStatus.CYCLE and report.period == 2, "period"
    )

    report = iterate_operator(DenseOperator(jordan), cycle, config)
    results["jordan_diverges"] = _result(report.stage, report.status == IterationStatus.DIVERGED, "stage")
    return results


def fixtures_suite(seed: int) -> dict[str, CheckResult]:
    orchestrator = ScenarioOrchestrator(emit=False, timing=False)
    names = list_fixtures()

    def run(name: str) -> tuple[str, CheckResult]:
        report = orchestrator.run(load_fixture(name))
        return name, _result(report.exit_code, report.exit_code == 0, report.error or "exit code")

    if settings.workers > 1:
        with ThreadPoolExecutor(max_workers=settings.workers) as pool:
            return dict(pool.map(run, names))
    return dict(run(name) for name in names)


SUITE_FUNCTIONS: dict[str, SuiteFunction] = {
    "scalar": scalar_suite,
    "matrix": matrix_suite,
    "engine": engine_suite,
    "fixtures": fixtures_suite,
}


def run_suites(suite: str = "all", seed: int = 0) -> dict[str, CheckResult]:
    """
    Run one suite or all of them

    Returns:
        dict: '<suite>.<check>' -> CheckResult
    """
    selected = SUITES if suite == "all" else (suite,)
    results = {}
    for name in selected:
        logger.info("verify suite %s (seed=%d)", name, seed)
        for check, result in SUITE_FUNCTIONS[name](seed).items():
            results[f"{name}.{check}"] = result
    return results
