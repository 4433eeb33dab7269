"""
Iteration Engine

Drives operator-level iterations:
- function iteration A^(m+1) = f(A^(m)) of a layer cycle
- powers T^n and Cesaro means (1/N) sum T^n
- conjugation X -> S X S^-1

Normal operators are iterated in eigen form (Borel calculus); general
matrices through the layered contour calculus.
"""
import logging
from typing import Union

import numpy as np
import scipy.linalg

from core.config import settings
from core.errors import (
    IncompatibleDimsError,
    NotPowerBoundedError,
    OverflowDetectedError,
    ParamOutOfRangeError,
    SingularConjugatorError,
    SolverFailureError,
)
from core.numerics import frobenius
from models.operators import DenseOperator, NormalOperator, as_matrix
from schemas.reports import ConvergenceReport, IterationStatus
from services.iteration.config import IterationConfig, IterationMode
from services.iteration.monitor import ConvergenceMonitor
from services.matrix_calculus import apply_map, map_spectrum, power_bound_estimate
from services.scalar_dynamics import LayerCycle

logger = logging.getLogger(__name__)

Operator = Union[NormalOperator, DenseOperator]

POWER_GUARD_STEPS = 50
POWER_GUARD_BOUND = 1e6
MAX_DOUBLINGS = 40


def hold_unit(operator: NormalOperator, radius: float = settings.cluster_radius) -> NormalOperator:
    """Eigenvalues within `radius` of the common fixed point 1 are set to 1"""
    values = np.array(operator.eigenvalues)
    near = np.abs(values - 1.0) < radius
    if not np.any(near) or np.all(values[near] == 1.0):
        return operator
    values[near] = 1.0
    return NormalOperator(values, operator.eigenbasis)


def hold_unit_dense(matrix: np.ndarray, radius: float = settings.cluster_radius) -> np.ndarray:
    """
    Dense counterpart of hold_unit, worked in complex Schur form M = Z T Z*

    Diagonal entries of T within `radius` of 1 are set to 1; the strictly
    upper part (any nilpotent part at 1 included) is left as it is.

    Raises:
        SolverFailureError: Schur decomposition failed
    """
    try:
        T, Z = scipy.linalg.schur(matrix, output="complex")
    except (np.linalg.LinAlgError, ValueError) as e:
        raise SolverFailureError(f"Schur decomposition failed: {e}") from e
    diagonal = np.diag(T)
    near = np.abs(diagonal - 1.0) < radius
    if not np.any(near) or np.all(diagonal[near] == 1.0):
        return matrix
    T = T.copy()
    T[near, near] = 1.0
    return Z @ T @ Z.conj().T


# ============================================================================
# FUNCTION ITERATION
# ============================================================================

def iterate_operator(A: Operator, cycle: LayerCycle, config: IterationConfig) -> ConvergenceReport:
    """
    Iterate the cycle's composite on an operator

    Args:
        A: normal (eigen form) or dense operator
        cycle: admitted layer cycle
        config: stopping rules; mode must be FUNCTION

    Returns:
        ConvergenceReport: converged / cycle / diverged / budget_exhausted

    Raises:
        ContourTooCloseError: propagated from the dense calculus
    """
    if config.mode != IterationMode.FUNCTION:
        raise ParamOutOfRangeError(f"iterate_operator runs the function mode, got '{config.mode.value}'")
    if not isinstance(A, (NormalOperator, DenseOperator)):
        raise IncompatibleDimsError(f"unsupported operator type {type(A).__name__}")

    monitor = ConvergenceMonitor(config)
    logger.info("function iteration: dim=%d, cycle=%s", A.dim, cycle.composite.describe())

    if isinstance(A, NormalOperator):
        state = hold_unit(A)
        report = monitor.start(state.matrix)
        while report is None:
            state = hold_unit(map_spectrum(state, cycle.composite))
            report = monitor.observe(state.matrix)
        return report

    # 1 repels under the composite; the unit part is re-held every stage
    matrix = hold_unit_dense(as_matrix(A))
    report = monitor.start(matrix)
    while report is None:
        matrix = hold_unit_dense(apply_map(matrix, cycle.composite))
        report = monitor.observe(matrix)
    return report


# ============================================================================
# POWERS AND CESARO MEANS
# ============================================================================

def power_limit(
    T: Operator,
    tol: float = settings.operator_tol,
    max_n: int = settings.max_stages,
    cycle_window: int = settings.cycle_window,
) -> ConvergenceReport:
    """
    Iterate T^0 = I, T^1, T^2, ... (stage n holds T^n)

    Raises:
        OverflowDetectedError: non-finite entries appeared
    """
    if max_n < 1:
        raise ParamOutOfRangeError(f"max_n must be >= 1, got {max_n}")
    config = IterationConfig(mode=IterationMode.POWER, tol=tol, max_stages=max_n, cycle_window=cycle_window)
    monitor = ConvergenceMonitor(config)
    report = monitor.start(np.eye(T.dim, dtype=complex))

    if isinstance(T, NormalOperator):
        base = hold_unit(T)
        values = np.ones(T.dim, dtype=complex)
        while report is None:
            values = values * base.eigenvalues
            report = monitor.observe(NormalOperator(values, base.eigenbasis).matrix)
        return report

    matrix = as_matrix(T)
    power = np.eye(T.dim, dtype=complex)
    while report is None:
        power = power @ matrix
        if not np.all(np.isfinite(power)):
            raise OverflowDetectedError(f"T^{monitor.stage + 1} has non-finite entries")
        report = monitor.observe(power)
    return report


def cesaro_projection(
    T: Operator,
    tol: float = settings.operator_tol,
    max_N: int = 2 ** MAX_DOUBLINGS,
) -> ConvergenceReport:
    """
    Mean ergodic projection lim (1/N) sum_{n<N} T^n

    Means are taken at N = 1, 2, 4, ... through the doubling identity
    S_2N = (S_N + T^N S_N) / 2, T^2N = (T^N)^2. Converged once
    ||S_2N - S_N||_F < tol and S_2N is invariant under T on both sides
    (||S T - S||_F, ||T S - S||_F < 10 tol); the report's stage is that N,
    the limit S_2N, and the trajectory holds S_1, S_2, S_4, ...

    Raises:
        NotPowerBoundedError: ||T^n|| reaches 1e6 within 50 powers
    """
    guard = power_bound_estimate(T if not isinstance(T, NormalOperator) else T.matrix, POWER_GUARD_STEPS)
    if not guard.bounded or guard.estimate >= POWER_GUARD_BOUND:
        raise NotPowerBoundedError(
            f"||T^n|| reached {guard.estimate:.3e} within {guard.n_evaluated} powers",
            estimate=guard.estimate,
        )

    if isinstance(T, NormalOperator):
        # eigen form: means of each eigenvalue's powers
        base = hold_unit(T)
        matrix = base.matrix
        means = _doubling_means(np.array(base.eigenvalues), np.ones(T.dim, dtype=complex), np.multiply)
        trajectory = [np.eye(T.dim, dtype=complex)]

        def as_stage(values):
            return NormalOperator(values, base.eigenbasis).matrix
    else:
        matrix = as_matrix(T)
        means = _doubling_means(matrix.copy(), np.eye(T.dim, dtype=complex), np.matmul)
        trajectory = [np.eye(T.dim, dtype=complex)]
        as_stage = np.asarray

    history: list[float] = []
    N = 1
    while 2 * N <= max_N:
        current = as_stage(next(means))
        delta = frobenius(current - trajectory[-1])
        trajectory.append(current)
        history.append(delta)
        if delta < tol and _invariant(current, matrix, 10 * tol, N):
            logger.debug("cesaro mean settled at N=%d (delta %.3e)", N, delta)
            return ConvergenceReport(
                status=IterationStatus.CONVERGED,
                stage=N,
                limit=current,
                residual_history=history,
                trajectory=trajectory,
            )
        N *= 2

    return ConvergenceReport(
        status=IterationStatus.BUDGET_EXHAUSTED,
        stage=N,
        residual_history=history,
        trajectory=trajectory,
    )


def _invariant(mean: np.ndarray, matrix: np.ndarray, tol: float, N: int) -> bool:
    left = frobenius(mean @ matrix - mean)
    right = frobenius(matrix @ mean - mean)
    if left < tol and right < tol:
        return True
    logger.debug("cesaro mean at N=%d is quiet but not invariant (%.3e, %.3e)", N, left, right)
    return False


def _doubling_means(power, mean, multiply):
    """Yield S_2, S_4, S_8, ... from T^1 and S_1"""
    while True:
        mean = 0.5 * (mean + multiply(power, mean))
        power = multiply(power, power)
        yield mean


# ============================================================================
# CONJUGATION
# ============================================================================

def conjugation_cycle(A: Operator, S: np.ndarray, config: IterationConfig) -> ConvergenceReport:
    """
    Iterate X -> S X S^-1 from X = A

    Raises:
        SingularConjugatorError: S not invertible (condition >= 1e8)
        IncompatibleDimsError: S and A differ in dimension
    """
    if config.mode != IterationMode.CONJUGATION:
        raise ParamOutOfRangeError(f"conjugation_cycle runs the conjugation mode, got '{config.mode.value}'")
    S = np.asarray(S if S is not None else config.conjugator, dtype=complex)
    matrix = as_matrix(A)
    if S.shape != matrix.shape:
        raise IncompatibleDimsError(f"conjugator shape {S.shape} does not match operator shape {matrix.shape}")
    if np.linalg.cond(S) >= 1e8:
        raise SingularConjugatorError("conjugator is singular or too ill-conditioned")
    S_inv = scipy.linalg.inv(S)

    monitor = ConvergenceMonitor(config)
    report = monitor.start(matrix)
    while report is None:
        matrix = S @ matrix @ S_inv
        report = monitor.observe(matrix)
    return report
