"""
iterate <scenario>

Runs a function-iteration scenario; conjugation scenarios keep their mode.
"""
import argparse

from commands.common import add_run_options, load_for_mode, run_and_print
from schemas.scenario import ScenarioMode

KEPT_MODES = (ScenarioMode.FUNCTION, ScenarioMode.CONJUGATION)


def handle(args: argparse.Namespace) -> int:
    scenario = load_for_mode(args, None)
    if scenario.mode not in KEPT_MODES:
        scenario = load_for_mode(args, ScenarioMode.FUNCTION)
    return run_and_print(scenario, args)


def register(subparsers) -> None:
    parser = subparsers.add_parser("iterate", help="Iterate the layer cycle on the scenario operator")
    add_run_options(parser)
    parser.set_defaults(func=handle)
