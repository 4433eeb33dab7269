import numpy as np
import pytest
import scipy.linalg

from core.config import settings
from core.errors import (
    ContourTooCloseError,
    FunctionUndefinedError,
    NoConvergenceError,
    NotNormalError,
    SpectralRadiusError,
    SpectrumHitError,
)
from core.numerics import frobenius, multiset_distance
from models.operators import ContourSpec, DenseOperator, ExplicitPoints, NormalOperator
from models.schur_map import Affine, Blaschke, Composition, Polynomial
from services import matrix_calculus
from services.matrix_calculus import (
    apply_borel,
    apply_layer_dense,
    apply_map,
    contour_calculus,
    diagonalize_normal,
    enclosing_contour,
    is_projection,
    isolating_contour,
    normal_or_none,
    power_bound_estimate,
    resolvent,
    riesz_projection,
    ritt_constant,
    spectral_projection,
    spectrum_image,
)

TOL = 1e-8

EXAMPLE = np.array([[1.0, 2.0], [0.0, -1.0]], dtype=complex)


def test_diagonalize_normal_reconstructs(small_ensemble):
    for A in small_ensemble:
        operator = diagonalize_normal(A.matrix)
        assert frobenius(operator.matrix - A.matrix) < TOL
        assert multiset_distance(operator.eigenvalues, A.eigenvalues) < 1e-8


def test_diagonalize_rejects_non_normal(jordan):
    with pytest.raises(NotNormalError):
        diagonalize_normal(jordan)
    assert normal_or_none(jordan) is None


def test_borel_composition_law(small_ensemble):
    g, h = Affine(0.3), Blaschke(0.4)
    for A in small_ensemble:
        inner = NormalOperator(h(A.eigenvalues), A.eigenbasis)
        assert frobenius(apply_borel(A, Composition((h, g))) - apply_borel(inner, g)) < TOL


def test_spectral_mapping_for_iterates(small_ensemble, two_layer_cycle):
    f = two_layer_cycle.composite
    for A in small_ensemble:
        values = np.array(A.eigenvalues)
        for _ in range(20):
            values = f(values)
        image = apply_borel(A, Composition((f,) * 20))
        assert multiset_distance(np.linalg.eigvals(image), values) < TOL


def test_spectral_projection_onto_one(sample_operator):
    P = spectral_projection(sample_operator, ExplicitPoints((1.0,)))
    assert np.allclose(P, np.diag([1.0, 0.0, 0.0]))
    assert is_projection(P)


def test_spectrum_image(sample_operator):
    image = spectrum_image(sample_operator, Affine(0.5))
    assert np.allclose(image, 0.5 + 0.5 * sample_operator.eigenvalues)


def test_borel_rejects_poles_on_the_spectrum():
    with pytest.raises(FunctionUndefinedError):
        apply_borel(NormalOperator.diagonal([2.0]), Blaschke(0.5))


def test_resolvent(jordan):
    R = resolvent(jordan, 2.0)
    assert frobenius(R @ (2.0 * np.eye(2) - jordan) - np.eye(2)) < 1e-12
    with pytest.raises(SpectrumHitError):
        resolvent(jordan, 1.0)


def test_contour_calculus_matches_polynomial_evaluation():
    contour = ContourSpec(center=0.0, radius=2.0)
    squared = contour_calculus(EXAMPLE, lambda z: z ** 2, contour)
    assert frobenius(squared - EXAMPLE @ EXAMPLE) < 1e-8


def test_contour_too_close():
    with pytest.raises(ContourTooCloseError):
        contour_calculus(EXAMPLE, lambda z: z, ContourSpec(center=0.0, radius=1.0))


def test_contour_calculus_is_absolutely_accurate_for_large_norms():
    A = np.array([[0.5, 400.0], [0.0, 0.2]], dtype=complex)
    result = contour_calculus(A, np.exp, ContourSpec(center=0.35, radius=1.0))
    expected = scipy.linalg.expm(A)
    assert frobenius(expected) > 500.0
    assert frobenius(result - expected) < 1e-9


def test_dense_layer_retries_only_distinct_radii(monkeypatch):
    radii = []

    def failing(matrix, g, contour, **_):
        radii.append(contour.radius)
        raise NoConvergenceError("quadrature stalled")

    monkeypatch.setattr(matrix_calculus, "contour_calculus", failing)

    # spread 0.1: every radius scale lands on the 0.5 floor
    with pytest.raises(NoConvergenceError):
        apply_layer_dense(np.array([[0.0, 1.0], [0.0, 0.2]]), Blaschke(0.5))
    assert radii == [0.5]

    radii.clear()
    with pytest.raises(NoConvergenceError):
        apply_layer_dense(np.diag([0.0, 0.9]), Blaschke(0.5))
    assert len(radii) == settings.contour_retries
    assert len(set(radii)) == len(radii)


def test_riesz_projection_of_a_non_normal_matrix():
    P = riesz_projection(EXAMPLE, isolating_contour(np.linalg.eigvals(EXAMPLE), 1.0))
    assert frobenius(P - np.array([[1.0, 1.0], [0.0, 0.0]])) < TOL
    assert is_projection(P)


def test_isolating_contour_radius():
    contour = isolating_contour([1.0, 0.2, 1.0 + 1e-9])
    assert contour.radius == pytest.approx(0.4)
    assert contour.encloses(np.array([1.0 + 1e-9])).all()


def test_enclosing_contour_avoids_poles():
    contour = enclosing_contour([0.9, 1.0], poles=[2.0])
    assert contour.encloses(np.array([0.9, 1.0])).all()
    assert not contour.encloses(np.array([2.0])).any()


def test_example_matrix_polynomial_layers_are_exact():
    assert np.array_equal(apply_map(EXAMPLE, Polynomial((0.0, 0.0, 1.0))), np.eye(2))
    averaged = apply_map(EXAMPLE, Affine(0.5))
    assert np.array_equal(averaged, np.array([[1.0, 1.0], [0.0, 0.0]]))
    assert np.array_equal(averaged @ averaged, averaged)


def test_dense_layer_agrees_with_borel_on_normal_input(sample_operator):
    layer = Blaschke(0.5)
    dense = apply_layer_dense(sample_operator.matrix, layer)
    assert frobenius(dense - apply_borel(sample_operator, layer)) < 1e-8


def test_jordan_block_under_the_two_layer_composite(jordan, two_layer_cycle):
    image = apply_map(DenseOperator(jordan), two_layer_cycle.composite)
    assert image[0, 0] == pytest.approx(1.0, abs=1e-10)
    assert image[0, 1] == pytest.approx(1.5, rel=1e-8)


def test_ritt_constant_of_a_diagonal_contraction():
    estimate = ritt_constant(np.diag([1.0, 0.5]))
    assert estimate.is_ritt
    assert estimate.constant <= 1.0 + 1e-9


def test_ritt_constant_rejects_large_spectral_radius():
    with pytest.raises(SpectralRadiusError):
        ritt_constant(np.diag([1.5, 0.5]))


def test_power_bound_estimate(jordan):
    assert power_bound_estimate(np.diag([1.0, -1.0]), 50).estimate == pytest.approx(1.0)
    bound = power_bound_estimate(2.0 * np.eye(2), 100)
    assert not bound.bounded
    assert power_bound_estimate(jordan, 10).estimate > 10.0
