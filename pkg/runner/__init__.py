"""
Scenario Runner Package

Components:
- ScenarioParser: JSON scenario parsing and validation
- builder: descriptors -> maps, operators, cycles, configs
- CheckRegistry: named post-run checks
- ScenarioOrchestrator: build, run, check, emit
- ErrorReporter: reports for runs that could not finish
- verify: seeded self-check suites
"""

from runner.parser import ScenarioParser, parse_scenario, serialize_scenario
from runner.checks import CheckRegistry, RunContext, registry
from runner.fallback import (
    EXIT_CHECK_FAILED,
    EXIT_CONFIG_ERROR,
    EXIT_OK,
    EXIT_STATUS_MISMATCH,
    ErrorReporter,
)
from runner.orchestrator import ScenarioOrchestrator, run_scenario
from runner.fixtures import list_fixtures, load_fixture, resolve_scenario
from runner.verify import SUITES, run_suites

__all__ = [
    # Main Orchestrator
    'ScenarioOrchestrator',
    'run_scenario',

    # Parsing
    'ScenarioParser',
    'parse_scenario',
    'serialize_scenario',

    # Checks
    'CheckRegistry',
    'RunContext',
    'registry',

    # Errors / exit codes
    'ErrorReporter',
    'EXIT_OK',
    'EXIT_CHECK_FAILED',
    'EXIT_STATUS_MISMATCH',
    'EXIT_CONFIG_ERROR',

    # Fixtures and suites
    'list_fixtures',
    'load_fixture',
    'resolve_scenario',
    'SUITES',
    'run_suites',
]
