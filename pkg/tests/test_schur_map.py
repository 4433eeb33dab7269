import numpy as np
import pytest
from numpy.polynomial import polynomial as P

from core.errors import ParamOutOfRangeError, PoleAtPointError
from models.schur_map import (
    Affine,
    Blaschke,
    Composition,
    Identity,
    Mobius,
    Polynomial,
    Product,
    Rational,
    rotation,
)
from services.scalar_dynamics import probe_grid

TOL = 1e-12


def rational_values(schur_map, z):
    num, den = schur_map.as_rational()
    return P.polyval(z, num) / P.polyval(z, den)


@pytest.mark.parametrize(
    "schur_map",
    [
        Identity(),
        Affine(0.3),
        Blaschke(0.6),
        Mobius(1.0, 0.0, 0.0, 1.0),
        Polynomial((0.5, 0.0, 0.5)),
        Rational((0.0, 0.0, 2.0), (3.0, 0.0, -1.0)),
        Composition((Affine(0.5), Blaschke(0.5))),
        Product((Blaschke(0.3), Blaschke(0.3))),
    ],
)
def test_coefficient_form_matches_evaluation(schur_map):
    grid = probe_grid()
    assert np.max(np.abs(schur_map(grid) - rational_values(schur_map, grid))) < 1e-10


@pytest.mark.parametrize("schur_map", [Identity(), Affine(0.2), Blaschke(0.7), Polynomial((0.5, 0.0, 0.5))])
def test_maps_fix_one(schur_map):
    assert schur_map(1.0) == pytest.approx(1.0, abs=TOL)


def test_scalar_input_returns_complex():
    assert isinstance(Affine(0.5)(0.0), complex)


def test_blaschke_vanishes_at_its_parameter():
    assert abs(Blaschke(0.4)(0.4)) < TOL


def test_composition_applies_left_to_right():
    composite = Composition((Affine(0.5), Blaschke(0.5)))
    z = 0.3 + 0.2j
    assert composite(z) == pytest.approx(z / (1.5 - 0.5 * z), abs=TOL)


def test_two_layer_composite_is_not_the_claimed_one():
    composed = Composition((Polynomial((0.5, 0.0, 0.5)), Blaschke(0.5)))
    claimed = Rational((0.0, 0.0, 1.0), (2.0, 0.0, -1.0))
    recomputed = Rational((0.0, 0.0, 2.0), (3.0, 0.0, -1.0))
    assert composed(0.5) == pytest.approx(recomputed(0.5), abs=TOL)
    assert abs(composed(0.5) - claimed(0.5)) > 0.03


def test_product_multiplies_pointwise():
    z = np.array([0.1, 0.5j, -0.7])
    assert np.allclose(Product((Blaschke(0.3), Affine(0.5)))(z), Blaschke(0.3)(z) * Affine(0.5)(z))


def test_poles():
    assert Blaschke(0.5).poles() == [2.0]
    assert Blaschke(0.0).poles() == []
    assert Polynomial((1.0,)).poles() == []
    assert Mobius(1.0, 0.0, 1.0, 3.0).poles() == [-3.0]


def test_pole_evaluation_raises():
    with pytest.raises(PoleAtPointError) as info:
        Blaschke(0.5)(2.0)
    assert info.value.location == 2.0


@pytest.mark.parametrize(
    "factory",
    [
        lambda: Affine(0.0),
        lambda: Affine(1.0),
        lambda: Blaschke(1.0),
        lambda: Blaschke(-0.1),
        lambda: Mobius(1.0, 0.0, 1.0, -1.0),
        lambda: Polynomial(()),
        lambda: Rational((1.0,), (0.5, -1.0)),
    ],
)
def test_invalid_parameters(factory):
    with pytest.raises(ParamOutOfRangeError):
        factory()


def test_rotation_moves_one():
    assert rotation(np.pi / 2)(1.0) == pytest.approx(1j)
