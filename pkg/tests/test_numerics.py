import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from core.numerics import (
    cluster_values,
    frobenius,
    is_normal,
    log_slope,
    multiset_distance,
    null_space_basis,
    operator_norm,
    pairwise_sum,
    range_basis,
    subspace_angle,
)

TOL = 1e-10

entries = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)


@seed(7)
@settings(max_examples=40, deadline=None)
@given(matrix=arrays(np.float64, (5, 4), elements=entries))
def test_operator_norm_matches_largest_singular_value(matrix):
    sigma = np.linalg.svd(matrix, compute_uv=False)[0]
    assert operator_norm(matrix) == pytest.approx(sigma, rel=1e-6, abs=1e-9)


def test_operator_norm_of_zero_matrix():
    assert operator_norm(np.zeros((3, 3))) == 0.0


def test_operator_norm_is_reproducible():
    matrix = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert operator_norm(matrix) == operator_norm(matrix)


def test_pairwise_sum_matches_plain_sum():
    terms = [np.full((2, 2), k, dtype=complex) for k in range(7)]
    assert np.allclose(pairwise_sum(terms), sum(terms))


def test_is_normal():
    assert is_normal(np.diag([1.0, 2.0j]))
    assert not is_normal(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_cluster_values_merges_close_values():
    values = np.array([1.0, 1.0 + 1e-10, 0.5])
    merged = cluster_values(values, radius=1e-8)
    assert merged[0] == merged[1]
    assert merged[2] == 0.5


def test_null_space_and_range_of_projection():
    P = np.diag([1.0, 0.0, 0.0])
    kernel = null_space_basis(P)
    image = range_basis(P)
    assert kernel.shape == (3, 2)
    assert image.shape == (3, 1)
    assert frobenius(P @ kernel) < TOL


def test_null_space_of_zero_matrix_is_everything():
    assert null_space_basis(np.zeros((3, 3))).shape == (3, 3)


def test_subspace_angle():
    e1 = np.array([[1.0], [0.0]])
    e2 = np.array([[0.0], [1.0]])
    assert subspace_angle(e1, e1) == pytest.approx(0.0, abs=TOL)
    assert subspace_angle(e1, e2) == pytest.approx(np.pi / 2)
    assert subspace_angle(e1, np.eye(2)) == pytest.approx(np.pi / 2)


def test_multiset_distance_ignores_order():
    assert multiset_distance([1, 2j, 3], [3, 1, 2j]) == 0.0
    assert multiset_distance([1, 2], [1, 2.5]) == pytest.approx(0.5)
    assert multiset_distance([1], [1, 2]) == float("inf")


def test_multiset_distance_minimizes_the_largest_gap():
    # both pairings of [0, 1] with [2, 1] cost 2 in total; only one keeps every gap at 1
    assert multiset_distance([0, 1], [2, 1]) == pytest.approx(1.0)
    assert multiset_distance([0, 1], [1, 2]) == pytest.approx(1.0)
    assert multiset_distance([], []) == 0.0


@pytest.mark.parametrize("rate", [0.3, 0.5, 0.9])
def test_log_slope_of_geometric_sequence(rate):
    values = rate ** np.arange(30)
    assert log_slope(values, 5, 25) == pytest.approx(np.log(rate), rel=1e-10)
