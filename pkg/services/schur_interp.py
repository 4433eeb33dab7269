"""
Schur Interpolation

First step of the Schur algorithm and the two-point interpolation problem
with an interior node t (target 0) and the boundary node 1 (target 1).
"""
import logging

import numpy as np

from core.errors import (
    BoundaryConditionError,
    FactorizationError,
    NonzeroAtOriginError,
    NotSchurError,
    ParamOutOfRangeError,
    UnsupportedVariantError,
)
from models.schur_map import (
    Blaschke,
    Composition,
    Identity,
    InterpolationProblem,
    Polynomial,
    Product,
    Rational,
    SchurMap,
)
from schemas.reports import InterpolationReport, SchurCertificate, SchurSolution
from services.scalar_dynamics import derivative_at, eval_map, probe_grid, verify_schur_bound

logger = logging.getLogger(__name__)

INTERIOR_TOL = 1e-10
BOUNDARY_TOL = 1e-8
FACTOR_TOL = 1e-12
SLOPE_TOL = 1e-8


def blaschke(t: float) -> Blaschke:
    """
    Blaschke factor b_t(z) = (z - t) / (1 - t z)

    Raises:
        ParamOutOfRangeError: t outside [0, 1)
    """
    if not 0.0 <= t < 1.0:
        raise ParamOutOfRangeError(f"Blaschke parameter t={t} outside [0, 1)", t=t)
    return Blaschke(float(t))


def schur_step(R: SchurMap, tol: float = 1e-12) -> SchurMap:
    """
    Divide out the zero at the origin: R(z) = z * phi(z)

    Division is done on the numerator coefficients, so the denominator
    is carried over unchanged.

    Args:
        R: rational-reducible map with R(0) = 0
        tol: threshold for |R(0)|

    Returns:
        SchurMap: phi, a Polynomial when R has a trivial denominator

    Raises:
        NonzeroAtOriginError: |R(0)| >= tol
        UnsupportedVariantError: R is a Composition node
        FactorizationError: z*phi(z) misses R on the grid, or phi(0) misses R'(0)
    """
    if isinstance(R, Composition):
        raise UnsupportedVariantError(
            "schur_step works on coefficient forms; compositions are not deconvolved",
            variant=R.kind,
        )

    at_origin = eval_map(R, 0.0)
    if abs(at_origin) >= tol:
        raise NonzeroAtOriginError(f"R(0) = {at_origin:.6g} is not zero", value=at_origin)

    num, den = R.as_rational()
    num = np.asarray(num, dtype=complex)
    # constant term is zero up to tol; drop it to divide by z
    quotient = num[1:] if num.size > 1 else np.zeros(1, dtype=complex)
    den = np.asarray(den, dtype=complex)

    if den.size == 1:
        phi: SchurMap = Polynomial(tuple(quotient / den[0]))
    else:
        phi = Rational(tuple(quotient), tuple(den))

    grid = probe_grid()
    defect = float(np.max(np.abs(grid * phi(grid) - R(grid))))
    if defect >= FACTOR_TOL * max(1.0, float(np.max(np.abs(R(grid))))):
        raise FactorizationError(f"z*phi(z) differs from R by {defect:.3e} on the grid", defect=defect)

    slope = derivative_at(R, 0.0)
    mismatch = abs(phi(0.0) - slope)
    if mismatch >= SLOPE_TOL:
        raise FactorizationError(f"phi(0) differs from R'(0) by {mismatch:.3e}", mismatch=mismatch)
    logger.debug("schur step: %s -> %s", R.describe(), phi.describe())
    return phi


def solve_two_point(problem: InterpolationProblem, phi: SchurMap) -> SchurSolution:
    """
    Interpolant s(z) = b_t(z) * phi(b_t(z)) with s(t) = 0 and s(1) = 1

    Args:
        problem: interior node t (t = 0 is the degenerate case)
        phi: Schur map with phi(1) = 1

    Returns:
        SchurSolution: the map and its certificate

    Raises:
        NotSchurError: phi fails the sup-bound check
        BoundaryConditionError: |phi(1) - 1| >= 1e-8
    """
    t = problem.t
    b_t = blaschke(t)

    bound = verify_schur_bound(phi)
    if not bound.passed:
        raise NotSchurError(f"phi has grid sup {bound.sup_estimate:.6g} > 1", sup=bound.sup_estimate)
    at_one = eval_map(phi, 1.0)
    if abs(at_one - problem.boundary_target) >= BOUNDARY_TOL:
        raise BoundaryConditionError(f"phi(1) = {at_one:.6g}, expected 1", value=at_one)

    if isinstance(phi, Polynomial) and phi.coeffs == (1 + 0j,):
        # phi constant 1: the solution is the Blaschke factor itself
        s: SchurMap = b_t
    else:
        s = Composition((b_t, Product((Identity(), phi))))

    report = verify_interpolation(s, problem)
    certificate = SchurCertificate(
        residual_at_t=report.residual_at_t,
        residual_at_1=report.residual_at_1,
        sup_estimate=report.sup_estimate,
    )
    return SchurSolution(s=s, t=t, description=s.describe(), certificate=certificate)


def verify_interpolation(s: SchurMap, problem: InterpolationProblem) -> InterpolationReport:
    """Check s(t) = 0, s(1) = 1 and the sup bound"""
    residual_t = abs(eval_map(s, problem.t) - problem.interior_target)
    residual_1 = abs(eval_map(s, problem.boundary_node) - problem.boundary_target)
    bound = verify_schur_bound(s)
    return InterpolationReport(
        passed=residual_t < INTERIOR_TOL and residual_1 < BOUNDARY_TOL and bound.passed,
        residual_at_t=residual_t,
        residual_at_1=residual_1,
        sup_estimate=bound.sup_estimate,
        sup_passed=bound.passed,
    )


def blaschke_power(a: float, n: int) -> SchurMap:
    """(b_a)^n as a pointwise product (finite Blaschke product)"""
    if n < 1:
        raise ParamOutOfRangeError(f"power must be >= 1, got {n}")
    factor = blaschke(a)
    return factor if n == 1 else Product(tuple([factor] * n))
