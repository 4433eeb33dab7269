"""
Scenario Orchestrator

Coordinates one scenario run:
1. Build the operator, layers, cycle and iteration config (config errors: exit 3)
2. Run the requested scheme (engine errors: exit 1)
3. Run the requested checks
4. Map status and checks to an exit code
5. Emit trace, spectra and report files
"""
import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from core.config import settings
from core.errors import SpectralCascadeError
from core.numerics import frobenius
from models.operators import ContourSpec, DenseOperator, NormalOperator, as_matrix
from models.schur_map import SchurMap
from runner.builder import build_config, build_contour, build_cycle, build_layers, build_operator
from runner.checks import RunContext, registry
from runner.emitter import emit_eigs, emit_report, emit_trace, emit_trace_json
from runner.fallback import EXIT_CHECK_FAILED, EXIT_OK, EXIT_STATUS_MISMATCH, ErrorReporter
from schemas.reports import ConvergenceReport, IterationStatus, RunReport
from schemas.scenario import Scenario, ScenarioMode
from services.iteration.config import IterationConfig
from services.iteration.engine import (
    MAX_DOUBLINGS,
    cesaro_projection,
    conjugation_cycle,
    iterate_operator,
    power_limit,
)
from services.matrix_calculus import apply_map, eigenvalues_of, isolating_contour, map_spectrum, riesz_projection
from services.scalar_dynamics import LayerCycle

logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ("csv", "json")


@dataclass
class PreparedRun:
    operator: Union[NormalOperator, DenseOperator]
    layers: list[SchurMap]
    cycle: Optional[LayerCycle]
    config: IterationConfig
    contour: Optional[ContourSpec]


class ScenarioOrchestrator:
    """
    Runs scenarios and writes their outputs

    Output layout: <out>/<scenario name>/{trace.csv, eigs.csv | trace.json, report.json}
    """

    def __init__(
        self,
        out_dir: Optional[Union[str, Path]] = None,
        output_format: str = "csv",
        timing: bool = True,
        emit: bool = True,
    ):
        if output_format not in OUTPUT_FORMATS:
            raise ValueError(f"unknown output format '{output_format}'")
        self.out_dir = Path(out_dir or settings.out_dir)
        self.output_format = output_format
        self.timing = timing
        self.emit = emit
        self.errors = ErrorReporter()

    def run(self, scenario: Scenario) -> RunReport:
        """
        Run one scenario end to end

        Returns:
            RunReport: status, checks, exit code and emitted files
        """
        started = time.perf_counter()
        logger.info("running scenario %s (mode=%s)", scenario.name, scenario.mode.value)

        try:
            prepared = self._prepare(scenario)
        except SpectralCascadeError as e:
            return self._finish(self.errors.config_error(scenario.name, e), None, started)

        notes: dict = {}
        try:
            psi = self._psi(prepared)
            report, labels = self._execute(scenario, prepared, psi, notes)
        except SpectralCascadeError as e:
            return self._finish(self.errors.engine_error(scenario.name, e), None, started)

        base = prepared.operator if scenario.mode in (ScenarioMode.FUNCTION, ScenarioMode.CONJUGATION) else psi
        context = RunContext(
            scenario=scenario,
            operator=prepared.operator,
            layers=prepared.layers,
            cycle=prepared.cycle,
            psi=psi,
            base=base,
            report=report,
            contour=prepared.contour,
            notes=notes,
        )
        checks = registry.run(scenario.checks, context)
        report.check_results = checks

        matched = report.status.value == scenario.expected_status
        if not matched:
            exit_code = EXIT_STATUS_MISMATCH
            logger.warning(
                "%s: status %s, expected %s", scenario.name, report.status.value, scenario.expected_status
            )
        elif not report.passed_checks:
            exit_code = EXIT_CHECK_FAILED
        else:
            exit_code = EXIT_OK

        run = RunReport(
            scenario=scenario.name,
            status=report.status,
            period=report.period,
            stage=report.stage,
            checks=checks,
            exit_code=exit_code,
            notes=context.notes,
        )
        return self._finish(run, (report, labels), started)

    # ------------------------------------------------------------------
    # phases
    # ------------------------------------------------------------------

    @staticmethod
    def _prepare(scenario: Scenario) -> PreparedRun:
        layers = build_layers(scenario.layers)
        return PreparedRun(
            operator=build_operator(scenario.operator),
            layers=layers,
            cycle=build_cycle(scenario),
            config=build_config(scenario),
            contour=build_contour(scenario.contour),
        )

    @staticmethod
    def _psi(prepared: PreparedRun):
        """The composite applied to A; A itself without layers"""
        A = prepared.operator
        if prepared.cycle is None:
            return A
        if isinstance(A, NormalOperator):
            return map_spectrum(A, prepared.cycle.composite)
        return DenseOperator(apply_map(A, prepared.cycle.composite))

    @staticmethod
    def _execute(scenario: Scenario, prepared: PreparedRun, psi, notes: dict) -> tuple[ConvergenceReport, Optional[list]]:
        config = prepared.config
        mode = scenario.mode

        if mode == ScenarioMode.FUNCTION:
            return iterate_operator(prepared.operator, prepared.cycle, config), None

        if mode == ScenarioMode.POWER:
            return power_limit(psi, config.tol, config.max_stages, config.cycle_window), None

        if mode == ScenarioMode.CESARO:
            report = cesaro_projection(psi, config.tol, 2 ** min(config.max_stages, MAX_DOUBLINGS))
            return report, [2 ** k for k in range(len(report.trajectory))]

        if mode == ScenarioMode.CONJUGATION:
            return conjugation_cycle(prepared.operator, config.conjugator, config), None

        contour = prepared.contour or isolating_contour(eigenvalues_of(psi), 1.0)
        notes["contour"] = {
            "center": [contour.center.real, contour.center.imag],
            "radius": contour.radius,
            "nodes": contour.nodes,
        }
        projection = riesz_projection(psi, contour)
        report = ConvergenceReport(
            status=IterationStatus.CONVERGED,
            stage=0,
            limit=projection,
            residual_history=[frobenius(projection - as_matrix(psi))],
            trajectory=[as_matrix(psi), projection],
        )
        return report, None

    def _finish(self, run: RunReport, outcome: Optional[tuple], started: float) -> RunReport:
        if self.timing:
            run.wall_ms = round(1000.0 * (time.perf_counter() - started), 3)
        if not self.emit:
            return run

        directory = self.out_dir / run.scenario
        files = []
        if outcome is not None:
            report, labels = outcome
            if self.output_format == "json":
                files.append(emit_trace_json(report, directory / "trace.json", labels))
            else:
                files.append(emit_trace(report, directory / "trace.csv", labels))
                files.append(emit_eigs(report, directory / "eigs.csv", labels))
        files.append(directory / "report.json")
        run.files = [str(path) for path in files]
        emit_report(run, directory / "report.json")
        return run


def run_scenario(
    scenario: Scenario,
    out_dir: Optional[Union[str, Path]] = None,
    output_format: str = "csv",
    timing: bool = True,
    emit: bool = True,
) -> RunReport:
    """Run one scenario with a fresh orchestrator"""
    return ScenarioOrchestrator(out_dir, output_format, timing, emit).run(scenario)
