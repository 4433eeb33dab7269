"""scenario --list | --show <name>"""
import argparse

from runner.fixtures import list_fixtures, load_fixture
from runner.parser import serialize_scenario


def handle(args: argparse.Namespace) -> int:
    if args.show:
        print(serialize_scenario(load_fixture(args.show)))
        return 0

    for name in list_fixtures():
        scenario = load_fixture(name)
        expect = scenario.expected_status
        print(f"📋 {name:<18} {scenario.mode.value:<12} expect={expect:<10} {scenario.description or ''}")
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("scenario", help="List or show the shipped fixture scenarios")
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--list", action="store_true", help="List fixture names")
    group.add_argument("--show", metavar="NAME", help="Print one fixture document")
    parser.set_defaults(func=handle)
