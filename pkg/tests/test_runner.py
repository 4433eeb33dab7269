import csv
import json

import pytest

from main import main
from runner.emitter import EIGS_COLUMNS, TRACE_COLUMNS
from runner.fallback import EXIT_CHECK_FAILED, EXIT_CONFIG_ERROR, EXIT_OK, EXIT_STATUS_MISMATCH
from runner.fixtures import list_fixtures, load_fixture
from runner.orchestrator import ScenarioOrchestrator, run_scenario
from runner.parser import parse_scenario
from schemas.reports import IterationStatus


def _variant(name: str, **overrides):
    document = json.loads(load_fixture(name).model_dump_json())
    document.update(overrides)
    return parse_scenario(json.dumps(document))


def _read_csv(path):
    with open(path, newline="", encoding="utf-8") as handle:
        return list(csv.reader(handle))


@pytest.mark.parametrize("name", list_fixtures())
def test_every_fixture_exits_cleanly(name, out_dir):
    run = run_scenario(load_fixture(name), out_dir=out_dir, timing=False)
    assert run.exit_code == EXIT_OK, run.model_dump_json(indent=2)
    assert (out_dir / name / "report.json").is_file()


def test_trace_and_eigs_layout(out_dir):
    run = run_scenario(load_fixture("affine_blaschke_t05"), out_dir=out_dir, timing=False)
    trace = _read_csv(out_dir / "affine_blaschke_t05" / "trace.csv")
    eigs = _read_csv(out_dir / "affine_blaschke_t05" / "eigs.csv")
    assert tuple(trace[0]) == TRACE_COLUMNS
    assert tuple(eigs[0]) == EIGS_COLUMNS
    assert trace[1][0] == "0"
    assert trace[1][1] == "nan"
    assert float(trace[-1][2]) == 0.0
    assert len(trace) - 1 == run.stage + 4
    assert {row[1] for row in eigs[1:]} == {"0", "1", "2"}


def test_cesaro_trace_is_labelled_by_averaging_length(out_dir):
    run_scenario(load_fixture("cesaro_flip"), out_dir=out_dir, timing=False)
    trace = _read_csv(out_dir / "cesaro_flip" / "trace.csv")
    assert [int(row[0]) for row in trace[1:5]] == [1, 2, 4, 8]


def test_json_format(out_dir):
    run = run_scenario(load_fixture("averaged_idempotent"), out_dir=out_dir, output_format="json", timing=False)
    document = json.loads((out_dir / "averaged_idempotent" / "trace.json").read_text())
    assert document["rows"][0]["stage"] == 0
    assert document["eigenvalues"]
    assert any(path.endswith("trace.json") for path in run.files)


def test_runs_without_timing_are_byte_identical(tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    run_scenario(load_fixture("c4_t05"), out_dir=first, timing=False)
    run_scenario(load_fixture("c4_t05"), out_dir=second, timing=False)
    for file in ("trace.csv", "eigs.csv"):
        assert (first / "c4_t05" / file).read_bytes() == (second / "c4_t05" / file).read_bytes()
    reports = [json.loads((root / "c4_t05" / "report.json").read_text()) for root in (first, second)]
    for report in reports:
        assert report["wall_ms"] == 0.0
        report.pop("files")
    assert reports[0] == reports[1]


def test_status_mismatch_wins_over_checks(out_dir):
    run = run_scenario(_variant("affine_blaschke_t05", expect="cycle"), out_dir=out_dir)
    assert run.status == IterationStatus.CONVERGED
    assert run.exit_code == EXIT_STATUS_MISMATCH


def test_failed_check_exits_one(out_dir):
    document = json.loads(load_fixture("squared_average_claimed").model_dump_json())
    document["reference"]["expect_match"] = True
    run = run_scenario(parse_scenario(json.dumps(document)), out_dir=out_dir)
    assert run.exit_code == EXIT_CHECK_FAILED
    assert not run.checks["reference_claim"].passed
    assert run.notes["reference"]["mismatch_flagged"]


def test_singular_conjugator_is_a_config_error(out_dir):
    scenario = _variant(
        "swap_diagonal",
        layers=[{"kind": "conjugation", "matrix": [[1.0, 1.0], [1.0, 1.0]]}],
        reference=None,
    )
    run = run_scenario(scenario, out_dir=out_dir)
    assert run.exit_code == EXIT_CONFIG_ERROR
    assert run.error.startswith("SingularConjugatorError")
    assert run.notes["phase"] == "config"
    assert (out_dir / "swap_diagonal" / "report.json").is_file()


def test_growing_powers_are_an_engine_error(out_dir):
    scenario = parse_scenario(json.dumps({
        "name": "growing",
        "operator": {"kind": "jordan_block", "data": {"eigenvalue": 2.0, "size": 2}},
        "mode": "cesaro",
    }))
    run = run_scenario(scenario, out_dir=out_dir)
    assert run.exit_code == EXIT_CHECK_FAILED
    assert run.error.startswith("NotPowerBoundedError")
    assert run.notes["phase"] == "engine"


def test_orchestrator_without_emission_writes_nothing(out_dir):
    run = ScenarioOrchestrator(out_dir=out_dir, emit=False).run(load_fixture("square_involution"))
    assert run.exit_code == EXIT_OK
    assert run.files == []
    assert not out_dir.exists()


def test_orchestrator_rejects_unknown_formats(out_dir):
    with pytest.raises(ValueError):
        ScenarioOrchestrator(out_dir=out_dir, output_format="xml")


# ============================================================================
# COMMAND LINE
# ============================================================================

def test_cli_iterate_writes_outputs(out_dir, capsys):
    assert main(["iterate", "affine_blaschke_t01", "--out", str(out_dir), "--no-timing"]) == EXIT_OK
    assert (out_dir / "affine_blaschke_t01" / "trace.csv").is_file()
    assert "affine_blaschke_t01" in capsys.readouterr().out


def test_cli_environment_overrides_out(tmp_path, monkeypatch):
    env_dir = tmp_path / "env"
    monkeypatch.setenv("SPECTRAL_CASCADE_OUT", str(env_dir))
    assert main(["power", "diagonal_contraction", "--out", str(tmp_path / "flag"), "--no-timing"]) == EXIT_OK
    assert (env_dir / "diagonal_contraction" / "report.json").is_file()
    assert not (tmp_path / "flag").exists()


def test_cli_riesz_records_the_contour(out_dir):
    assert main(["riesz", "riesz_two_layer", "--out", str(out_dir), "--no-timing"]) == EXIT_OK
    report = json.loads((out_dir / "riesz_two_layer" / "report.json").read_text())
    assert report["notes"]["contour"]["nodes"] == 64


def test_cli_unknown_fixture_is_a_config_error(out_dir):
    assert main(["iterate", "no_such_fixture", "--out", str(out_dir)]) == EXIT_CONFIG_ERROR


def test_cli_mode_override_that_breaks_the_scenario(out_dir):
    assert main(["power", "swap_cycle", "--out", str(out_dir)]) == EXIT_CONFIG_ERROR


def test_cli_malformed_scenario_file(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"name": "broken",\n "operator": ')
    assert main(["iterate", str(path), "--out", str(tmp_path / "out")]) == EXIT_CONFIG_ERROR
    assert "line" in capsys.readouterr().out


def test_cli_interp(capsys):
    assert main(["interp", "--t", "0.5"]) == EXIT_OK
    assert "s(z)" in capsys.readouterr().out
    phi = json.dumps({"kind": "blaschke", "t": 0.3})
    assert main(["interp", "--t", "0.2", "--phi", phi, "--json"]) == EXIT_OK


def test_cli_interp_rejects_bad_input():
    assert main(["interp", "--t", "1.5"]) == EXIT_CONFIG_ERROR
    assert main(["interp", "--t", "0.5", "--phi", '{"kind": "affine", "t": 3}']) == EXIT_CONFIG_ERROR


def test_cli_scenario_listing(capsys):
    assert main(["scenario", "--list"]) == EXIT_OK
    listing = capsys.readouterr().out
    assert all(name in listing for name in list_fixtures())
    assert main(["scenario", "--show", "square_involution"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["name"] == "square_involution"


def test_cli_verify_scalar_suite():
    assert main(["verify", "--suite", "scalar"]) == EXIT_OK


def test_cli_runs_the_two_layer_fixture_by_name(out_dir, capsys):
    assert main(["scenario", "--show", "c4_t05"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["name"] == "c4_t05"
    assert main(["iterate", "c4_t05", "--out", str(out_dir), "--no-timing"]) == EXIT_OK
    report = json.loads((out_dir / "c4_t05" / "report.json").read_text())
    assert report["status"] == "converged"
    assert all(check["passed"] for check in report["checks"].values())


def test_dense_fixture_limit_is_the_riesz_projection(out_dir):
    run = run_scenario(load_fixture("dense_unit_projection"), out_dir=out_dir, timing=False)
    assert run.exit_code == EXIT_OK
    assert run.status == IterationStatus.CONVERGED
    assert run.checks["spectral_projection_match"].passed
    assert run.checks["spectral_projection_match"].detail == "riesz projection at 1"
