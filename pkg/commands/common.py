"""
Shared CLI Options

Flags common to the scenario subcommands and the console output of a run.
"""
import argparse
import json
import os
from typing import Optional

from core.config import ENV_PREFIX, settings
from runner.fixtures import resolve_scenario
from runner.orchestrator import OUTPUT_FORMATS, ScenarioOrchestrator
from runner.parser import parse_scenario
from schemas.reports import RunReport
from schemas.scenario import Scenario, ScenarioMode


def add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("scenario", help="Scenario file or shipped fixture name")
    parser.add_argument("--out", default=None, help=f"Output directory (default {settings.out_dir})")
    parser.add_argument("--tol", type=float, default=None, help="Override the scenario tolerance")
    parser.add_argument("--max-stages", type=int, default=None, help="Override the stage budget")
    parser.add_argument("--format", choices=OUTPUT_FORMATS, default="csv", help="Trace file format")
    parser.add_argument("--no-timing", action="store_true", help="Write wall_ms = 0 (byte-identical reruns)")


def resolve_out_dir(flag: Optional[str]) -> str:
    """SPECTRAL_CASCADE_OUT wins over --out"""
    return os.environ.get(f"{ENV_PREFIX}OUT") or flag or settings.out_dir


def load_for_mode(args: argparse.Namespace, mode: Optional[ScenarioMode]) -> Scenario:
    """
    Load the scenario and apply mode and CLI overrides

    The result is revalidated, so an override that breaks a scenario rule
    raises ScenarioValidationError like a bad document would.
    """
    scenario = resolve_scenario(args.scenario)
    document = scenario.model_dump(mode="json")
    if mode is not None:
        document["mode"] = mode.value
    if args.tol is not None:
        document["tolerance"] = args.tol
    if args.max_stages is not None:
        document["max_stages"] = args.max_stages
    return parse_scenario(json.dumps(document))


def run_and_print(scenario: Scenario, args: argparse.Namespace) -> int:
    orchestrator = ScenarioOrchestrator(
        out_dir=resolve_out_dir(args.out),
        output_format=args.format,
        timing=not args.no_timing,
    )
    report = orchestrator.run(scenario)
    print_run(report)
    return report.exit_code


def print_run(report: RunReport) -> None:
    icon = "✅" if report.exit_code == 0 else "❌"
    period = f" (period {report.period})" if report.period else ""
    status = report.status.value if report.status is not None else "error"
    print(f"{icon} {report.scenario}: {status}{period}, stage {report.stage}, exit {report.exit_code}")
    for name, result in report.checks.items():
        mark = "✔" if result.passed else "✘"
        print(f"   {mark} {name}: residual {result.residual:.3e}")
    if report.error:
        print(f"   ⚠️  {report.error}")
    for path in report.files:
        print(f"   📄 {path}")
