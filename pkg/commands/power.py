"""power <scenario>"""
import argparse

from commands.common import add_run_options, load_for_mode, run_and_print
from schemas.scenario import ScenarioMode


def handle(args: argparse.Namespace) -> int:
    return run_and_print(load_for_mode(args, ScenarioMode.POWER), args)


def register(subparsers) -> None:
    parser = subparsers.add_parser("power", help="Powers of the composite applied to the operator")
    add_run_options(parser)
    parser.set_defaults(func=handle)
