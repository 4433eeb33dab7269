"""
Matrix Calculus

Finite-dimensional functional calculus:
- Borel calculus for normal matrices through a unitary eigenbasis
- holomorphic calculus for general matrices through trapezoidal quadrature
  of the Cauchy integral on circles
- Riesz and spectral projections
- spectral diagnostics (Ritt constant, power bounds, spectrum images)
"""
import logging
from typing import Callable, Optional, Sequence, Union

import numpy as np
import scipy.linalg
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from core.config import settings
from core.errors import (
    ContourTooCloseError,
    FunctionUndefinedError,
    IllConditionedError,
    NoConvergenceError,
    NotNormalError,
    ParamOutOfRangeError,
    PoleAtPointError,
    SolverFailureError,
    SpectralRadiusError,
    SpectrumHitError,
)
from core.numerics import cluster_values, frobenius, normality_residual, operator_norm, pairwise_sum
from models.operators import ContourSpec, DenseOperator, NormalOperator, SpectralSet, as_matrix
from models.schur_map import Composition, SchurMap
from schemas.reports import PowerBound, RittEstimate

logger = logging.getLogger(__name__)

ScalarFunction = Callable[[np.ndarray], np.ndarray]
MatrixLike = Union[DenseOperator, NormalOperator, np.ndarray]

# radius factors tried, in order, by the automatic contour
RADIUS_SCALES = (1.5, 2.0, 3.0, 1.25, 4.0, 1.1)
# relative roundoff floor of the quadrature stopping rule
QUADRATURE_FLOOR = 1e-13


def _evaluate(g: ScalarFunction, points: np.ndarray) -> np.ndarray:
    """Vectorized evaluation with a pointwise fallback; non-finite values are errors"""
    points = np.asarray(points, dtype=complex)
    try:
        try:
            values = np.asarray(g(points), dtype=complex)
            if values.shape != points.shape:
                values = np.broadcast_to(values, points.shape).astype(complex)
        except (TypeError, ValueError):
            values = np.array([complex(g(complex(p))) for p in points.ravel()]).reshape(points.shape)
    except PoleAtPointError as e:
        raise FunctionUndefinedError(f"function has a pole at {e.location:.6g}", location=e.location) from e
    if not np.all(np.isfinite(values)):
        bad = points[~np.isfinite(values)].ravel()[0]
        raise FunctionUndefinedError(f"function is not finite at {bad:.6g}", location=complex(bad))
    return values


def _eigenvalues(matrix: np.ndarray) -> np.ndarray:
    try:
        return scipy.linalg.eigvals(matrix)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise SolverFailureError(f"eigenvalue solver failed: {e}") from e


# ============================================================================
# BOREL CALCULUS (NORMAL MATRICES)
# ============================================================================

def diagonalize_normal(M: np.ndarray, tol: float = 1e-8) -> NormalOperator:
    """
    Unitary diagonalization of a normal matrix

    Uses the complex Schur form, which is diagonal for normal input;
    eigenvalues closer than cluster_radius are merged to their mean.

    Args:
        M: square complex matrix
        tol: relative normality tolerance, ||MM* - M*M||_F < tol * ||M||_F^2

    Returns:
        NormalOperator: eigenvalues and orthonormal eigenbasis

    Raises:
        NotNormalError: normality residual too large
        SolverFailureError: Schur decomposition failed or did not reconstruct M
    """
    M = np.asarray(M, dtype=complex)
    scale = frobenius(M) ** 2
    residual = normality_residual(M)
    if residual >= tol * scale and residual > 0.0:
        raise NotNormalError(
            f"normality residual {residual:.3e} exceeds {tol:g} * ||M||_F^2",
            residual=residual,
        )

    try:
        T, Z = scipy.linalg.schur(M, output="complex")
    except (np.linalg.LinAlgError, ValueError) as e:
        raise SolverFailureError(f"Schur decomposition failed: {e}") from e

    values = cluster_values(np.diag(T), settings.cluster_radius)
    operator = NormalOperator(values, Z)

    error = frobenius(operator.matrix - M)
    if error > 1e-8 * max(frobenius(M), 1.0):
        raise SolverFailureError(f"eigen-reconstruction error {error:.3e}", error=error)
    return operator


def apply_borel(A: NormalOperator, g: ScalarFunction) -> np.ndarray:
    """
    g(A) = U diag(g(lambda_i)) U*

    Raises:
        FunctionUndefinedError: g is not finite on some eigenvalue
    """
    return map_spectrum(A, g).matrix


def map_spectrum(A: NormalOperator, g: ScalarFunction) -> NormalOperator:
    """g(A) kept in eigen form (same eigenbasis, mapped eigenvalues)"""
    return NormalOperator(_evaluate(g, A.eigenvalues), A.eigenbasis)


def spectral_projection(A: NormalOperator, S: SpectralSet) -> np.ndarray:
    """Sum of eigenprojections u_i u_i* over eigenvalues selected by S"""
    mask = np.asarray(S.contains(A.eigenvalues), dtype=bool)
    selected = A.eigenbasis[:, mask]
    return selected @ selected.conj().T


def spectrum_image(A: NormalOperator, g: ScalarFunction) -> np.ndarray:
    """Multiset {g(lambda_i)}"""
    return _evaluate(g, A.eigenvalues)


# ============================================================================
# HOLOMORPHIC CALCULUS (GENERAL MATRICES)
# ============================================================================

def resolvent(A: MatrixLike, zeta: complex) -> np.ndarray:
    """
    (zeta I - A)^-1

    Raises:
        SpectrumHitError: zeta within 1e-12 of an eigenvalue
        IllConditionedError: condition number of zeta I - A above 1e12
    """
    matrix = as_matrix(A)
    n = matrix.shape[0]
    eigs = _eigenvalues(matrix)
    distance = float(np.min(np.abs(eigs - zeta)))
    if distance <= 1e-12:
        raise SpectrumHitError(f"zeta={zeta:.6g} lies on the spectrum", zeta=zeta)

    shifted = zeta * np.eye(n) - matrix
    condition = np.linalg.cond(shifted)
    if not np.isfinite(condition) or condition > 1e12:
        raise IllConditionedError(f"cond(zeta I - A) = {condition:.3e}", condition=condition)

    result = scipy.linalg.solve(shifted, np.eye(n, dtype=complex))
    check = frobenius(shifted @ result - np.eye(n))
    if check >= 1e-8:
        logger.warning("resolvent residual %.3e at zeta=%s", check, zeta)
    return result


def _quadrature_terms(matrix: np.ndarray, g: ScalarFunction, contour: ContourSpec, angles: np.ndarray) -> np.ndarray:
    """g(zeta_j) * r e^{i theta_j} * (zeta_j I - A)^-1, stacked over nodes"""
    n = matrix.shape[0]
    offsets = contour.radius * np.exp(1j * angles)
    nodes = contour.center + offsets
    weights = _evaluate(g, nodes) * offsets
    shifted = nodes[:, None, None] * np.eye(n)[None, :, :] - matrix[None, :, :]
    identity = np.broadcast_to(np.eye(n, dtype=complex), shifted.shape)
    resolvents = np.linalg.solve(shifted, identity)
    return weights[:, None, None] * resolvents


def contour_calculus(
    A: MatrixLike,
    g: ScalarFunction,
    contour: ContourSpec,
    tol: float = settings.quadrature_tol,
    max_nodes: int = settings.contour_max_nodes,
    gap_tol: float = settings.gap_tol,
) -> np.ndarray:
    """
    g(A) by trapezoidal quadrature of (1/2 pi i) ∮ g(zeta) (zeta I - A)^-1 d zeta

    The node count doubles (reusing previous nodes) until two successive
    results differ by less than tol in Frobenius norm. Results too large for
    an absolute tol to sit above roundoff stop at QUADRATURE_FLOOR * ||result||_F.

    Raises:
        ContourTooCloseError: the circle passes within gap_tol of an eigenvalue
        NoConvergenceError: node count would exceed max_nodes
        FunctionUndefinedError: g not finite on the contour
    """
    matrix = as_matrix(A)
    gap = contour.gap(_eigenvalues(matrix))
    if gap < gap_tol:
        raise ContourTooCloseError(
            f"contour (center {contour.center:.6g}, radius {contour.radius:.6g}) "
            f"passes {gap:.3e} from an eigenvalue",
            gap=gap,
        )

    n = contour.nodes
    angles = 2 * np.pi * np.arange(n) / n
    current = pairwise_sum(_quadrature_terms(matrix, g, contour, angles)) / n

    while True:
        if 2 * n > max_nodes:
            raise NoConvergenceError(
                f"quadrature not converged with {n} nodes", nodes=n,
            )
        # midpoints between the existing nodes
        angles = 2 * np.pi * (2 * np.arange(n) + 1) / (2 * n)
        fresh = pairwise_sum(_quadrature_terms(matrix, g, contour, angles)) / n
        refined = 0.5 * (current + fresh)
        n *= 2
        change = frobenius(refined - current)
        current = refined
        if change < max(tol, QUADRATURE_FLOOR * frobenius(current)):
            logger.debug("quadrature converged with %d nodes (change %.3e)", n, change)
            return current


def riesz_projection(A: MatrixLike, contour: ContourSpec, **quadrature) -> np.ndarray:
    """
    Riesz projection (1/2 pi i) ∮ (zeta I - A)^-1 d zeta on the contour

    Raises:
        ContourTooCloseError: the circle does not separate the spectrum
    """
    matrix = as_matrix(A)
    Q = contour_calculus(matrix, _constant_one, contour, **quadrature)
    idempotence = frobenius(Q @ Q - Q)
    commutator = frobenius(Q @ matrix - matrix @ Q)
    if idempotence >= 1e-8 or commutator >= 1e-8 * max(frobenius(matrix), 1.0):
        logger.warning(
            "riesz projection residuals: ||Q^2 - Q||=%.3e, ||QA - AQ||=%.3e",
            idempotence,
            commutator,
        )
    return Q


def _constant_one(z: np.ndarray) -> np.ndarray:
    return np.ones_like(np.asarray(z, dtype=complex))


def isolating_contour(
    values: Sequence[complex],
    center: complex = 1.0,
    member_tol: float = 1e-6,
    nodes: int = settings.contour_nodes,
) -> ContourSpec:
    """
    Circle around `center` that encloses the values within member_tol of it

    The radius is half the distance from the center to the nearest other
    value (0.5 when there is none).
    """
    values = np.asarray(values, dtype=complex)
    distances = np.abs(values - center)
    others = distances[distances >= member_tol]
    radius = 0.5 * float(np.min(others)) if others.size else 0.5
    return ContourSpec(center=center, radius=radius, nodes=nodes)


def enclosing_contour(
    values: Sequence[complex],
    poles: Sequence[complex] = (),
    scale: float = 1.5,
    nodes: int = settings.contour_nodes,
    gap_tol: float = settings.gap_tol,
) -> ContourSpec:
    """
    Circle enclosing every value and no pole

    Center is the centroid; radius is scale * spread (at least 0.5),
    clipped to the midpoint between the spread and the nearest pole.

    Raises:
        ContourTooCloseError: no admissible radius
    """
    values = np.asarray(values, dtype=complex)
    center = complex(np.mean(values))
    spread = float(np.max(np.abs(values - center)))
    radius = max(scale * spread, 0.5)

    if len(poles):
        pole_distance = float(np.min(np.abs(np.asarray(poles, dtype=complex) - center)))
        if pole_distance <= spread + 2 * gap_tol:
            raise ContourTooCloseError(
                f"a pole lies {pole_distance:.3e} from the spectrum centroid, inside the spread {spread:.3e}",
                gap=pole_distance - spread,
            )
        radius = min(radius, 0.5 * (spread + pole_distance))

    if radius - spread < gap_tol:
        raise ContourTooCloseError(f"radius {radius:.3e} leaves no gap to the spectrum", gap=radius - spread)
    return ContourSpec(center=center, radius=radius, nodes=nodes)


def apply_layer_dense(A: MatrixLike, layer: SchurMap, nodes: int = settings.contour_nodes) -> np.ndarray:
    """
    layer(A) for a general matrix

    Polynomial layers are evaluated by Horner's rule. Other layers go
    through contour_calculus on an automatic contour around the current
    spectrum; a failed quadrature moves on to the next distinct radius.
    """
    matrix = as_matrix(A)
    num, den = layer.as_rational()
    den = np.trim_zeros(np.asarray(den, dtype=complex), "b")
    if den.size == 1:
        return _horner(np.asarray(num, dtype=complex) / den[0], matrix)

    contours = _candidate_contours(_eigenvalues(matrix), layer.poles(), nodes)
    for attempt in Retrying(
        stop=stop_after_attempt(len(contours)),
        retry=retry_if_exception_type((ContourTooCloseError, NoConvergenceError)),
        reraise=True,
        before_sleep=lambda state: logger.info(
            "contour retry #%d for %s: %s",
            state.attempt_number,
            layer.describe(),
            state.outcome.exception(),
        ),
    ):
        with attempt:
            contour = contours[attempt.retry_state.attempt_number - 1]
            return contour_calculus(matrix, layer, contour)


def _candidate_contours(eigs: np.ndarray, poles: Sequence[complex], nodes: int) -> list[ContourSpec]:
    """
    Automatic contours over RADIUS_SCALES with repeated radii dropped,
    at most settings.contour_retries of them

    Raises:
        ContourTooCloseError: no scale gives an admissible contour
    """
    contours: list[ContourSpec] = []
    first_error: Optional[ContourTooCloseError] = None
    for scale in RADIUS_SCALES:
        try:
            contour = enclosing_contour(eigs, poles, scale=scale, nodes=nodes)
        except ContourTooCloseError as e:
            first_error = first_error or e
            continue
        if any(np.isclose(contour.radius, seen.radius, rtol=1e-12, atol=0.0) for seen in contours):
            continue
        contours.append(contour)
        if len(contours) == settings.contour_retries:
            break
    if not contours:
        raise first_error
    return contours


def _horner(coeffs: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    n = matrix.shape[0]
    result = np.zeros((n, n), dtype=complex)
    for c in coeffs[::-1]:
        result = result @ matrix + c * np.eye(n)
    return result


def apply_map(A: MatrixLike, schur_map: SchurMap) -> np.ndarray:
    """schur_map(A): Borel calculus for normal operators, layered dense calculus otherwise"""
    if isinstance(A, NormalOperator):
        return apply_borel(A, schur_map)
    matrix = as_matrix(A)
    layers = schur_map.maps if isinstance(schur_map, Composition) else (schur_map,)
    for layer in layers:
        matrix = apply_layer_dense(matrix, layer)
    return matrix


# ============================================================================
# SPECTRAL DIAGNOSTICS
# ============================================================================

def ritt_constant(
    A: MatrixLike,
    radial: int = settings.ritt_radial,
    angular: int = settings.ritt_angular,
) -> RittEstimate:
    """
    Sampled sup of (|z| - 1) * ||(zI - A)^-1||_2 on radii 1 + 2^-k

    An ill-conditioned resolvent on the grid makes the estimate infinite.

    Raises:
        SpectralRadiusError: spectral radius above 1 + 1e-9
    """
    matrix = as_matrix(A)
    rho = float(np.max(np.abs(_eigenvalues(matrix))))
    if rho > 1.0 + 1e-9:
        raise SpectralRadiusError(f"spectral radius {rho:.6g} exceeds 1", rho=rho)

    radii = 1.0 + 2.0 ** -np.arange(1, radial + 1)
    angles = 2 * np.pi * np.arange(angular) / angular
    best = 0.0
    try:
        for r in radii:
            for theta in angles:
                R = resolvent(matrix, r * np.exp(1j * theta))
                best = max(best, (r - 1.0) * operator_norm(R))
    except (IllConditionedError, SpectrumHitError) as e:
        logger.debug("ritt constant: %s", e)
        best = float("inf")

    return RittEstimate(constant=best, is_ritt=best < settings.ritt_bound, radial=radial, angular=angular)


def power_bound_estimate(A: MatrixLike, N: int, overflow: float = settings.power_overflow) -> PowerBound:
    """
    max_{1 <= n <= N} ||A^n||_2 by repeated multiplication

    Stops early once a norm exceeds `overflow` (reported as unbounded so far).
    """
    if N < 1:
        raise ParamOutOfRangeError(f"N must be >= 1, got {N}")
    matrix = as_matrix(A)
    power = np.eye(matrix.shape[0], dtype=complex)
    best = 0.0
    for n in range(1, N + 1):
        power = power @ matrix
        if not np.all(np.isfinite(power)):
            return PowerBound(estimate=float("inf"), n_evaluated=n, bounded=False)
        best = max(best, operator_norm(power))
        if best > overflow:
            logger.debug("power bound: ||A^%d|| = %.3e exceeds the overflow guard", n, best)
            return PowerBound(estimate=best, n_evaluated=n, bounded=False)
    return PowerBound(estimate=best, n_evaluated=N, bounded=True)


def eigenvalues_of(A: MatrixLike) -> np.ndarray:
    if isinstance(A, NormalOperator):
        return np.array(A.eigenvalues)
    return _eigenvalues(as_matrix(A))


def is_projection(P: np.ndarray, tol: float = 1e-8) -> bool:
    return frobenius(P @ P - P) < tol


def normal_or_none(M: np.ndarray, tol: float = 1e-8) -> Optional[NormalOperator]:
    """Diagonalize when M is normal, else None"""
    try:
        return diagonalize_normal(M, tol)
    except (NotNormalError, SolverFailureError):
        return None
