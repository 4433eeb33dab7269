"""
Spectral Cascade - command-line entry point

Subcommands are registered the way routers were included in the server app.
"""
import argparse
import logging
import sys
from typing import Optional, Sequence

from core.config import settings
from core.errors import ParamOutOfRangeError, ParseError, ScenarioValidationError, SpectralCascadeError
from core.logging_config import configure_logging
from runner.fallback import EXIT_CHECK_FAILED, EXIT_CONFIG_ERROR

# Subcommand imports
from commands import cesaro, interp, iterate, power, riesz, scenario, verify

logger = logging.getLogger("spectral_cascade")

COMMANDS = (iterate, power, cesaro, riesz, interp, verify, scenario)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectral-cascade",
        description="Iterated Schur maps, spectral projections and operator iteration checks",
    )
    parser.add_argument("--log-level", default=None, help=f"Logging level (default {settings.log_level})")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level or settings.log_level)

    try:
        return args.func(args)
    except ParseError as e:
        location = f" (line {e.line}, column {e.column})" if e.line is not None else ""
        print(f"❌ Parse error{location}: {e}")
        return EXIT_CONFIG_ERROR
    except ScenarioValidationError as e:
        fields = f" [{', '.join(e.fields)}]" if e.fields else ""
        print(f"❌ Invalid scenario{fields}: {e}")
        return EXIT_CONFIG_ERROR
    except ParamOutOfRangeError as e:
        print(f"❌ Parameter out of range: {e}")
        return EXIT_CONFIG_ERROR
    except FileNotFoundError as e:
        print(f"❌ File not found: {e.filename}")
        return EXIT_CONFIG_ERROR
    except SpectralCascadeError as e:
        logger.error("%s: %s", type(e).__name__, e)
        print(f"❌ {type(e).__name__}: {e}")
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
