import numpy as np
import pytest

from core.errors import IncompatibleDimsError
from models.operators import ExplicitPoints
from models.schur_map import Affine, Blaschke
from services.iteration import angle_between, fixed_space, joint_fixed_space, range_space
from services.matrix_calculus import apply_borel, spectral_projection

ANGLE_TOL = 1e-8


def test_fixed_space_of_a_diagonal_matrix():
    space = fixed_space(np.diag([1.0, 1.0, 0.5]))
    assert space.dim == 2
    assert np.allclose(space.projector(), np.diag([1.0, 1.0, 0.0]))


def test_fixed_space_of_the_jordan_block(jordan):
    assert fixed_space(jordan).dim == 1


def test_range_of_projection_is_the_fixed_space(ensemble):
    for A in ensemble[:10]:
        P = spectral_projection(A, ExplicitPoints((1.0,)))
        assert angle_between(range_space(P), fixed_space(A)) < ANGLE_TOL


def test_joint_fixed_space_of_the_layers(ensemble):
    for A in ensemble[:10]:
        images = [apply_borel(A, Affine(0.5)), apply_borel(A, Blaschke(0.5))]
        assert angle_between(joint_fixed_space(images), fixed_space(A)) < ANGLE_TOL


def test_joint_fixed_space_errors():
    with pytest.raises(IncompatibleDimsError):
        joint_fixed_space([])
    with pytest.raises(IncompatibleDimsError):
        joint_fixed_space([np.eye(2), np.eye(3)])


def test_angle_between_different_dimensions():
    assert angle_between(fixed_space(np.eye(2)), fixed_space(np.diag([1.0, 0.0]))) == pytest.approx(np.pi / 2)
