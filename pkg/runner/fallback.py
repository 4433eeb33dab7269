"""
Error Reports

RunReports for runs that could not finish: configuration failures (exit 3)
and engine failures (exit 1). The error text is surfaced verbatim.
"""
import logging
from typing import Any

from core.errors import SpectralCascadeError
from schemas.reports import RunReport

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_STATUS_MISMATCH = 2
EXIT_CONFIG_ERROR = 3


def _plain(value: Any) -> Any:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


class ErrorReporter:
    """
    Builds error RunReports

    Triggered by:
    - invalid layer parameters or operators (config error)
    - contour, solver or guard failures during the run (engine error)
    """

    def config_error(self, scenario: str, error: Exception) -> RunReport:
        return self._create(scenario, error, EXIT_CONFIG_ERROR, phase="config")

    def engine_error(self, scenario: str, error: Exception) -> RunReport:
        return self._create(scenario, error, EXIT_CHECK_FAILED, phase="engine")

    def _create(self, scenario: str, error: Exception, exit_code: int, phase: str) -> RunReport:
        logger.error("%s failed during %s: %s: %s", scenario, phase, type(error).__name__, error)
        notes: dict[str, Any] = {"phase": phase, "error_type": type(error).__name__}
        if isinstance(error, SpectralCascadeError) and error.context:
            notes["context"] = {key: _plain(value) for key, value in sorted(error.context.items())}
        return RunReport(
            scenario=scenario,
            error=f"{type(error).__name__}: {error}",
            exit_code=exit_code,
            notes=notes,
        )
