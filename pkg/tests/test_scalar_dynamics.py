import numpy as np
import pytest

from core.errors import (
    BoundaryConditionError,
    EmptyCycleError,
    IdentityCycleError,
    NotSchurError,
    ParamOutOfRangeError,
)
from models.schur_map import Blaschke, Composition, Identity, Mobius, Polynomial, rotation
from schemas.reports import LimitTag, TerminationReason
from services.scalar_dynamics import (
    LayerCycle,
    affine_blaschke_cycle,
    characteristic_set,
    classify_limit,
    closed_form_param_iterate,
    compose_cycle,
    denjoy_wolff,
    derivative_at,
    disk_grid,
    iterate_map,
    iterate_scalar,
    probe_grid,
    verify_peripheral_fpp,
    verify_schur_bound,
)

CLOSED_FORM_TOL = 1e-12


def test_probe_grid_has_64_points_including_one():
    grid = probe_grid()
    assert grid.size == 64
    assert np.any(np.abs(grid - 1.0) < 1e-15)


def test_disk_grid_reaches_the_boundary():
    grid = disk_grid(16, 64)
    assert np.max(np.abs(grid)) == pytest.approx(1.0)


@pytest.mark.parametrize("t", [0.1, 0.5, 0.9])
def test_iterates_follow_the_closed_form(t):
    cycle = affine_blaschke_cycle(t)
    for z in probe_grid():
        trace = iterate_scalar(cycle, complex(z))
        for m, value in enumerate(trace.values[:41]):
            assert abs(value - closed_form_param_iterate(t, m, complex(z))) < CLOSED_FORM_TOL


def test_closed_form_at_zero_steps_is_the_start():
    assert closed_form_param_iterate(0.5, 0, 0.3 + 0.1j) == 0.3 + 0.1j


def test_closed_form_rejects_bad_parameters():
    with pytest.raises(ParamOutOfRangeError):
        closed_form_param_iterate(1.0, 3, 0.1)
    with pytest.raises(ParamOutOfRangeError):
        closed_form_param_iterate(0.5, -1, 0.1)


def test_dichotomy_of_the_two_layer_cycle(two_layer_cycle):
    rng = np.random.default_rng(3)
    points = np.sqrt(rng.uniform(0, 1, 200)) * np.exp(2j * np.pi * rng.uniform(0, 1, 200))
    for z in points:
        assert classify_limit(iterate_scalar(two_layer_cycle, complex(z)), 1e-9).tag == LimitTag.ZERO
    assert classify_limit(iterate_scalar(two_layer_cycle, 1.0), 1e-9).tag == LimitTag.ONE


def test_start_outside_the_disk_is_rejected(two_layer_cycle):
    with pytest.raises(ParamOutOfRangeError):
        iterate_scalar(two_layer_cycle, 1.5)


def test_rotation_orbit_is_nonconvergent():
    trace = iterate_map(rotation(np.pi), 0.5)
    assert trace.terminated_reason == TerminationReason.NONCONVERGENT
    assert classify_limit(trace).tag == LimitTag.NON_CONVERGENT


def test_boundary_fixed_point_is_classified():
    trace = iterate_map(Blaschke(0.5), -1.0)
    limit = classify_limit(trace, 1e-9)
    assert limit.tag == LimitTag.BOUNDARY_POINT
    assert limit.tau == pytest.approx(-1.0)


def test_characteristic_set_selects_one(two_layer_cycle):
    mask = characteristic_set(two_layer_cycle).contains(np.array([1.0, 0.5, -1.0]))
    assert mask.tolist() == [True, False, False]


def test_cycle_admission_errors():
    with pytest.raises(EmptyCycleError):
        compose_cycle([])
    with pytest.raises(NotSchurError):
        LayerCycle((Polynomial((0.0, 2.0)),))
    with pytest.raises(BoundaryConditionError):
        LayerCycle((rotation(np.pi / 2),))


def test_composite_agrees_with_sequential_application(two_layer_cycle):
    assert two_layer_cycle.composite_defect() < 1e-14
    assert len(two_layer_cycle) == 2


def test_schur_bound():
    assert verify_schur_bound(Blaschke(0.5)).passed
    assert not verify_schur_bound(Polynomial((0.0, 2.0))).passed
    assert not verify_schur_bound(Mobius(1.0, 0.0, 1.0, -0.5)).passed


def test_schur_bound_grid_minimum():
    with pytest.raises(ParamOutOfRangeError):
        verify_schur_bound(Blaschke(0.5), radial=8)


def test_peripheral_fpp(two_layer_cycle):
    assert verify_peripheral_fpp(two_layer_cycle.composite).passed
    composed = Composition((Polynomial((0.5, 0.0, 0.5)), Blaschke(0.5)))
    report = verify_peripheral_fpp(composed)
    assert not report.passed
    assert any(abs(v.point + 1.0) < 1e-12 for v in report.violations)


def test_denjoy_wolff_point_of_the_two_layer_cycle(two_layer_cycle):
    point = denjoy_wolff(two_layer_cycle)
    assert abs(point.tau) < 1e-10
    assert point.interior


def test_denjoy_wolff_rejects_the_identity():
    with pytest.raises(IdentityCycleError):
        denjoy_wolff(LayerCycle((Identity(),)))


@pytest.mark.parametrize("t", [0.1, 0.5, 0.9])
def test_derivative_at_one_is_one_plus_t(t):
    assert abs(derivative_at(affine_blaschke_cycle(t).composite, 1.0)) == pytest.approx(1 + t, rel=1e-8)
