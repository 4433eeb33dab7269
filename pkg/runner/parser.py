"""
Scenario Parser

Turns scenario documents (JSON text) into validated Scenario objects.
Malformed text raises ParseError with a line/column; schema violations
raise ScenarioValidationError with the offending field paths.
"""
import logging
import re
from pathlib import Path
from typing import Optional, Union

from pydantic import ValidationError

from core.errors import ParseError, ScenarioValidationError, SpectralCascadeError
from runner.builder import build_layers
from schemas.scenario import Scenario

logger = logging.getLogger(__name__)

_POSITION = re.compile(r"line (\d+) column (\d+)")


def _field_path(location: tuple) -> str:
    return ".".join(str(part) for part in location) or "<document>"


class ScenarioParser:
    """
    Scenario document parser

    Responsibilities:
    - JSON well-formedness (with position diagnostics)
    - Pydantic schema validation
    - Dry construction of the layer maps, so parameter ranges the schema
      cannot express (Mobius poles, rational denominators) fail here
    """

    def parse(self, document: Union[str, bytes]) -> Scenario:
        """
        Parse a scenario document

        Args:
            document: JSON text

        Returns:
            Scenario: fully validated, defaults filled

        Raises:
            ParseError: text is not well-formed JSON
            ScenarioValidationError: schema, range or kind violation
        """
        try:
            scenario = Scenario.model_validate_json(document)
        except ValidationError as e:
            errors = e.errors()
            malformed = [err for err in errors if err["type"] == "json_invalid"]
            if malformed:
                message = str(malformed[0].get("ctx", {}).get("error", malformed[0]["msg"]))
                match = _POSITION.search(message)
                line, column = (int(match.group(1)), int(match.group(2))) if match else (None, None)
                raise ParseError(f"malformed scenario document: {message}", line=line, column=column) from e

            fields = [_field_path(err["loc"]) for err in errors]
            summary = "; ".join(f"{_field_path(err['loc'])}: {err['msg']}" for err in errors[:5])
            raise ScenarioValidationError(f"invalid scenario: {summary}", fields=fields) from e

        self._dry_build(scenario)
        return scenario

    def try_parse(self, document: Union[str, bytes]) -> tuple[Optional[Scenario], Optional[str]]:
        """
        Parse without raising

        Returns:
            tuple: (scenario, None) on success, (None, error message) on failure
        """
        try:
            return self.parse(document), None
        except (ParseError, ScenarioValidationError) as e:
            return None, str(e)

    def parse_file(self, path: Union[str, Path]) -> Scenario:
        text = Path(path).read_text(encoding="utf-8")
        logger.debug("parsing scenario file %s", path)
        return self.parse(text)

    @staticmethod
    def _dry_build(scenario: Scenario) -> None:
        try:
            build_layers(scenario.layers)
        except SpectralCascadeError as e:
            raise ScenarioValidationError(f"invalid layer: {e}", fields=["layers"]) from e


def parse_scenario(document: Union[str, bytes]) -> Scenario:
    """Parse and validate one scenario document"""
    return ScenarioParser().parse(document)


def serialize_scenario(scenario: Scenario) -> str:
    """Scenario back to JSON text (parse_scenario inverts this)"""
    return scenario.model_dump_json(indent=2)
