import numpy as np
import pytest

from core.errors import IncompatibleDimsError, NotPowerBoundedError, ParamOutOfRangeError, SingularConjugatorError
from core.numerics import frobenius, log_slope
from models.operators import DenseOperator, ExplicitPoints, NormalOperator
from schemas.reports import IterationStatus
from services.iteration import (
    ConvergenceMonitor,
    IterationConfig,
    IterationMode,
    cesaro_projection,
    conjugation_cycle,
    hold_unit,
    hold_unit_dense,
    iterate_operator,
    power_limit,
)
from services.matrix_calculus import spectral_projection

TOL = 1e-8


def test_config_validation():
    with pytest.raises(ParamOutOfRangeError):
        IterationConfig(tol=0.0)
    with pytest.raises(ParamOutOfRangeError):
        IterationConfig(cycle_window=1)
    with pytest.raises(SingularConjugatorError):
        IterationConfig(mode=IterationMode.CONJUGATION, conjugator=np.zeros((2, 2)))


def test_monitor_converges_after_a_quiet_streak():
    monitor = ConvergenceMonitor(IterationConfig(tol=1e-10))
    assert monitor.start(np.eye(2)) is None
    report = None
    for _ in range(3):
        report = monitor.observe(np.eye(2))
    assert report.status == IterationStatus.CONVERGED
    assert report.stage == 0
    assert len(report.trajectory) == 4


def test_monitor_detects_divergence():
    monitor = ConvergenceMonitor(IterationConfig(divergence_bound=10.0))
    monitor.start(np.eye(2))
    report = monitor.observe(100.0 * np.eye(2))
    assert report.status == IterationStatus.DIVERGED
    assert report.stage == 1


def test_monitor_budget():
    monitor = ConvergenceMonitor(IterationConfig(max_stages=2))
    monitor.start(np.zeros((1, 1)))
    assert monitor.observe(np.ones((1, 1))) is None
    assert monitor.observe(3.0 * np.ones((1, 1))).status == IterationStatus.BUDGET_EXHAUSTED


def test_hold_unit_snaps_near_one():
    operator = NormalOperator.diagonal([1.0 + 1e-10, 0.5])
    assert hold_unit(operator).eigenvalues[0] == 1.0
    exact = NormalOperator.diagonal([1.0, 0.5])
    assert hold_unit(exact) is exact


def test_function_iteration_limit_is_the_projection_at_one(ensemble, two_layer_cycle):
    config = IterationConfig(mode=IterationMode.FUNCTION)
    for A in ensemble:
        report = iterate_operator(A, two_layer_cycle, config)
        assert report.status == IterationStatus.CONVERGED
        target = spectral_projection(A, ExplicitPoints((1.0,)))
        assert frobenius(report.limit - target) < TOL


@pytest.mark.parametrize(
    "entries, target",
    [
        ([[1.0, 0.0], [0.0, 0.5]], [[1.0, 0.0], [0.0, 0.0]]),
        ([[1.0, 1.0], [0.0, 0.5]], [[1.0, 2.0], [0.0, 0.0]]),
    ],
)
def test_dense_function_iteration_keeps_the_unit_part(entries, target, two_layer_cycle):
    report = iterate_operator(DenseOperator(np.array(entries)), two_layer_cycle, IterationConfig())
    assert report.status == IterationStatus.CONVERGED
    assert frobenius(report.limit - np.array(target)) < TOL


def test_dense_and_normal_forms_share_a_limit(sample_operator, two_layer_cycle):
    normal = iterate_operator(sample_operator, two_layer_cycle, IterationConfig())
    dense = iterate_operator(sample_operator.to_dense(), two_layer_cycle, IterationConfig())
    assert dense.status == IterationStatus.CONVERGED
    assert frobenius(dense.limit - normal.limit) < TOL


def test_hold_unit_dense_snaps_the_diagonal_only(jordan):
    drifted = np.array([[1.0 + 1e-10, 3.0], [0.0, 0.5]], dtype=complex)
    held = hold_unit_dense(drifted)
    assert np.min(np.abs(np.linalg.eigvals(held) - 1.0)) < 1e-13
    assert frobenius(held - drifted) < 1e-9
    assert hold_unit_dense(jordan) is jordan


def test_function_iteration_residuals_decay_at_rate_two_thirds(sample_operator, two_layer_cycle):
    report = iterate_operator(sample_operator, two_layer_cycle, IterationConfig())
    slope = log_slope(report.residual_history, 10, 40)
    assert np.exp(slope) == pytest.approx(2.0 / 3.0, rel=0.01)


def test_jordan_block_diverges_with_growth_one_plus_t(jordan, two_layer_cycle):
    report = iterate_operator(DenseOperator(jordan), two_layer_cycle, IterationConfig())
    assert report.status == IterationStatus.DIVERGED
    entries = [abs(np.asarray(m)[0, 1]) for m in report.trajectory]
    ratios = np.array(entries[-10:]) / np.array(entries[-11:-1])
    assert np.all(np.abs(ratios / 1.5 - 1.0) < 0.01)


@pytest.mark.parametrize("r", [0.3, 0.5, 0.9])
def test_power_convergence_rate(r):
    T = NormalOperator.diagonal([1.0, r])
    report = power_limit(T, tol=1e-18, max_n=2000)
    assert report.status == IterationStatus.CONVERGED
    P = np.diag([1.0, 0.0])
    for n, stage in enumerate(report.trajectory[:60]):
        assert abs(np.linalg.norm(np.asarray(stage) - P, 2) - r ** n) < 1e-12
    distances = [np.linalg.norm(np.asarray(stage) - P, 2) for stage in report.trajectory[:40]]
    assert np.exp(log_slope(distances, 5, 30)) == pytest.approx(r, rel=0.01)


def test_powers_of_an_idempotent_are_constant():
    P = DenseOperator(np.array([[1.0, 1.0], [0.0, 0.0]]))
    report = power_limit(P)
    assert report.status == IterationStatus.CONVERGED
    assert np.array_equal(report.limit, P.matrix)


def test_powers_of_a_flip_cycle():
    report = power_limit(NormalOperator.diagonal([1.0, -1.0]))
    assert report.status == IterationStatus.CYCLE
    assert report.period == 2


def test_cesaro_of_the_flip():
    report = cesaro_projection(NormalOperator.diagonal([1.0, -1.0]), tol=1e-10, max_N=10 ** 5)
    assert report.status == IterationStatus.CONVERGED
    assert frobenius(report.limit - np.diag([1.0, 0.0])) < 1e-6


def test_cesaro_quiet_mean_that_is_not_invariant_keeps_doubling():
    # just past -1: ||S_4 - S_2|| is about 5e-11 while ||S_4 T - S_4|| is about 1e-5
    T = NormalOperator.diagonal([1.0, np.exp(1j * (np.pi + 1e-5))])
    report = cesaro_projection(T, tol=1e-10, max_N=2 ** 10)
    assert min(report.residual_history) < 1e-10
    assert report.status == IterationStatus.BUDGET_EXHAUSTED
    assert report.limit is None


def test_cesaro_and_power_limits_agree(small_ensemble, two_layer_cycle):
    for A in small_ensemble:
        psi = NormalOperator(two_layer_cycle.composite(A.eigenvalues), A.eigenbasis)
        powers = power_limit(psi, tol=1e-12)
        means = cesaro_projection(psi, tol=1e-9)
        assert powers.status == IterationStatus.CONVERGED
        assert means.status == IterationStatus.CONVERGED
        assert frobenius(powers.limit - means.limit) < 1e-7


def test_cesaro_rejects_growing_powers(jordan):
    with pytest.raises(NotPowerBoundedError):
        cesaro_projection(DenseOperator(2.0 * jordan))


def test_swap_conjugation_cycles_with_period_two(jordan, swap):
    config = IterationConfig(mode=IterationMode.CONJUGATION, conjugator=swap)
    report = conjugation_cycle(jordan, swap, config)
    assert report.status == IterationStatus.CYCLE
    assert report.period == 2
    assert np.array_equal(np.asarray(report.trajectory[1]), np.array([[1.0, 0.0], [1.0, 1.0]]))


def test_conjugation_dimension_mismatch(swap):
    config = IterationConfig(mode=IterationMode.CONJUGATION, conjugator=swap)
    with pytest.raises(IncompatibleDimsError):
        conjugation_cycle(np.eye(3), swap, config)


def test_conjugation_needs_its_mode(jordan, swap):
    with pytest.raises(ParamOutOfRangeError):
        conjugation_cycle(jordan, swap, IterationConfig())
