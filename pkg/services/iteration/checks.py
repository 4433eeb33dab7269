"""
Limit Checks

Residual checks on iteration limits: projection properties, one more cycle
applied to the limit, Riesz product identity and boundary separation.
"""
import logging
from itertools import combinations
from typing import Optional, Sequence, Union

import numpy as np

from core.config import settings
from core.errors import IncompatibleDimsError, IsolationFailedError, ParamOutOfRangeError
from core.numerics import frobenius, is_normal
from models.operators import ContourSpec, DenseOperator, NormalOperator, as_matrix
from models.schur_map import Composition, SchurMap
from schemas.reports import CheckResult, SeparationReport, SeparationViolation
from services.matrix_calculus import (
    apply_map,
    eigenvalues_of,
    isolating_contour,
    normal_or_none,
    riesz_projection,
)
from services.scalar_dynamics import LayerCycle, circle_grid, evaluate_on_grid

logger = logging.getLogger(__name__)

MatrixLike = Union[DenseOperator, NormalOperator, np.ndarray]

UNIT_MEMBER_TOL = 1e-6


def _result(residual: float, tol: float, detail: Optional[str] = None) -> CheckResult:
    return CheckResult(residual=float(residual), passed=bool(residual < tol), detail=detail)


def check_limit_properties(P: MatrixLike, A: MatrixLike, tol: float = 1e-8) -> dict[str, CheckResult]:
    """
    Projection residuals of a limit P against the operator A

    Returns:
        dict: idempotence ||P^2 - P||, commutation ||PA - AP||, spectrum
        distance of eig(P) from {0, 1}, and self_adjointness ||P - P*||
        when A is normal
    """
    P = as_matrix(P)
    A = as_matrix(A)
    if P.shape != A.shape:
        raise IncompatibleDimsError(f"P has shape {P.shape}, A has shape {A.shape}")

    eigs = eigenvalues_of(P)
    spectrum_gap = float(np.max(np.minimum(np.abs(eigs), np.abs(eigs - 1.0)))) if eigs.size else 0.0

    results = {
        "idempotence": _result(frobenius(P @ P - P), tol),
        "commutation": _result(frobenius(P @ A - A @ P), tol),
        "spectrum": _result(spectrum_gap, tol),
    }
    if is_normal(A):
        results["self_adjoint"] = _result(frobenius(P - P.conj().T), tol)
    return results


def stage_omega_check(P: MatrixLike, cycle: LayerCycle, tol: float = 1e-8) -> CheckResult:
    """
    One more full cycle applied to a converged limit: ||f(P) - P||_F

    Normal limits go through the Borel calculus, others through the
    layered contour calculus.
    """
    matrix = as_matrix(P)
    normal = P if isinstance(P, NormalOperator) else normal_or_none(matrix)
    image = apply_map(normal if normal is not None else matrix, cycle.composite)
    return _result(frobenius(image - matrix), tol)


def _check_isolation(matrix: np.ndarray, contour: ContourSpec, label: str) -> None:
    eigs = eigenvalues_of(matrix)
    inside = eigs[contour.encloses(eigs)]
    strays = inside[np.abs(inside - 1.0) >= UNIT_MEMBER_TOL]
    if strays.size:
        raise IsolationFailedError(
            f"contour for {label} also encloses {complex(strays[0]):.6g}",
            eigenvalue=complex(strays[0]),
        )


def riesz_product_identity(
    A: MatrixLike,
    layers: Sequence[SchurMap],
    contour_at_1: Optional[ContourSpec] = None,
    tol: float = 1e-8,
) -> dict[str, CheckResult]:
    """
    Compare the Riesz projection at 1 of the composite with the product
    of the layers' Riesz projections at 1

    Each layer is applied to A itself; Q_k is the Riesz projection of
    layer_k(A) on an isolating circle around 1.

    Returns:
        dict: 'product' ||P - Q_K ... Q_1|| plus 'commutator_j_k' entries

    Raises:
        IsolationFailedError: a contour encloses eigenvalues away from 1
        ContourTooCloseError: a contour does not separate the spectrum
    """
    if not layers:
        raise IncompatibleDimsError("riesz product identity needs at least one layer")

    projections = []
    for index, layer in enumerate(layers, start=1):
        image = apply_map(A, layer)
        contour = isolating_contour(eigenvalues_of(image), 1.0)
        _check_isolation(image, contour, f"layer {index}")
        projections.append(riesz_projection(image, contour))

    composite = apply_map(A, Composition(tuple(layers)))
    if contour_at_1 is None:
        contour_at_1 = isolating_contour(eigenvalues_of(composite), 1.0)
    _check_isolation(composite, contour_at_1, "composite")
    target = riesz_projection(composite, contour_at_1)

    product = np.eye(target.shape[0], dtype=complex)
    for Q in projections:
        product = Q @ product

    results = {"product": _result(frobenius(target - product), tol)}
    for (j, Qj), (k, Qk) in combinations(enumerate(projections, start=1), 2):
        results[f"commutator_{j}_{k}"] = _result(frobenius(Qj @ Qk - Qk @ Qj), tol)
    return results


def boundary_separation_check(
    layers: Sequence[SchurMap],
    angular: int = settings.fpp_angular,
    fixed_tol: float = 1e-9,
    layer_tol: float = 1e-8,
) -> SeparationReport:
    """
    Unit-circle points fixed by the composite must be fixed by every layer

    Returns:
        SeparationReport: composite-fixed samples and the layers that move them
    """
    if angular < 256:
        raise ParamOutOfRangeError(f"angular resolution {angular} below 256")
    circle = circle_grid(angular)
    composite = Composition(tuple(layers))
    values, _ = evaluate_on_grid(composite, circle)
    fixed_mask = np.isfinite(values) & (np.abs(values - circle) < fixed_tol)
    fixed = circle[fixed_mask]

    violations = []
    for index, layer in enumerate(layers):
        images, _ = evaluate_on_grid(layer, fixed)
        for point, image in zip(fixed, images):
            residual = abs(image - point) if np.isfinite(image) else float("inf")
            if residual >= layer_tol:
                violations.append(SeparationViolation(point=complex(point), layer=index, residual=residual))
    if violations:
        logger.info("boundary separation: %d violations", len(violations))
    return SeparationReport(composite_fixed=[complex(p) for p in fixed], violations=violations, angular=angular)
