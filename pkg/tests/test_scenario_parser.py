import json

import numpy as np
import pytest

from core.errors import ParseError, ScenarioValidationError
from runner.fixtures import list_fixtures, load_fixture
from runner.parser import ScenarioParser, parse_scenario, serialize_scenario
from schemas.scenario import AffineLayer, CheckName, DiagonalOperatorSpec, ScenarioMode


def _document(**overrides) -> str:
    document = {
        "name": "sample",
        "operator": {"kind": "diagonal", "data": [[1.0, 0.0], [0.5, 0.0]]},
        "layers": [{"kind": "affine", "t": 0.5}],
    }
    document.update(overrides)
    return json.dumps(document)


def test_minimal_document_gets_defaults():
    scenario = parse_scenario(_document())
    assert scenario.mode == ScenarioMode.FUNCTION
    assert scenario.tolerance == 1e-10
    assert scenario.max_stages == 5000
    assert scenario.cycle_window == 8
    assert scenario.checks == []
    assert scenario.expected_status == "converged"
    assert isinstance(scenario.operator, DiagonalOperatorSpec)
    assert scenario.operator.data == [1.0, 0.5]
    assert isinstance(scenario.layers[0], AffineLayer)


def test_complex_numbers_accept_plain_reals():
    scenario = parse_scenario(_document(operator={"kind": "diagonal", "data": [1.0, [0.0, 0.5]]}))
    assert scenario.operator.data == [1.0, 0.5j]


def test_malformed_text_reports_a_position():
    with pytest.raises(ParseError) as info:
        parse_scenario('{\n  "name": "sample",\n  "operator": \n')
    assert info.value.line is not None
    assert info.value.line >= 3


def test_unknown_key_is_rejected():
    with pytest.raises(ScenarioValidationError) as info:
        parse_scenario(_document(colour="blue"))
    assert "colour" in info.value.fields


def test_affine_parameter_out_of_range():
    with pytest.raises(ScenarioValidationError) as info:
        parse_scenario(_document(layers=[{"kind": "affine", "t": 1.5}]))
    assert any(field.startswith("layers.0") for field in info.value.fields)


def test_unknown_layer_kind():
    with pytest.raises(ScenarioValidationError):
        parse_scenario(_document(layers=[{"kind": "spiral", "t": 0.5}]))


def test_function_mode_needs_layers():
    with pytest.raises(ScenarioValidationError):
        parse_scenario(_document(layers=[]))


def test_power_mode_allows_no_layers():
    scenario = parse_scenario(_document(layers=[], mode="power"))
    assert scenario.mode == ScenarioMode.POWER


def test_conjugation_layer_outside_conjugation_mode():
    swap = [[0, 1], [1, 0]]
    with pytest.raises(ScenarioValidationError):
        parse_scenario(_document(layers=[{"kind": "conjugation", "matrix": swap}]))


def test_conjugator_dimension_must_match():
    with pytest.raises(ScenarioValidationError):
        parse_scenario(_document(mode="conjugation", layers=[{"kind": "conjugation", "matrix": [[1.0]]}]))


def test_repeated_checks_are_rejected():
    with pytest.raises(ScenarioValidationError):
        parse_scenario(_document(checks=["stage_omega", "stage_omega"]))


def test_mobius_pole_at_one_fails_the_dry_build():
    layer = {"kind": "mobius", "a": 1.0, "b": 0.0, "c": 1.0, "d": -1.0}
    with pytest.raises(ScenarioValidationError) as info:
        parse_scenario(_document(layers=[layer]))
    assert info.value.fields == ["layers"]


def test_reference_needs_exactly_one_target():
    with pytest.raises(ScenarioValidationError):
        parse_scenario(_document(reference={"expect_match": True}))


def test_try_parse_returns_the_error_message():
    scenario, error = ScenarioParser().try_parse("not json")
    assert scenario is None
    assert "malformed" in error


@pytest.mark.parametrize("name", list_fixtures())
def test_fixtures_survive_serialization(name):
    scenario = load_fixture(name)
    again = parse_scenario(serialize_scenario(scenario))
    assert again.name == scenario.name
    assert again.checks == scenario.checks
    assert again.mode == scenario.mode
    assert again.expected_status == scenario.expected_status


def test_serialized_matrices_use_pairs():
    scenario = load_fixture("swap_cycle")
    payload = json.loads(serialize_scenario(scenario))
    assert payload["layers"][0]["matrix"][0][1] == [1.0, 0.0]
    assert np.array_equal(scenario.layers[0].matrix, np.array([[0, 1], [1, 0]], dtype=complex))


def test_checks_are_parsed_as_names():
    scenario = load_fixture("cesaro_flip")
    assert CheckName.RIESZ_VS_CESARO in scenario.checks
