"""
Fixture Scenarios and Ensembles

Access to the scenario documents shipped in scenarios/, and seeded random
operator ensembles shared by the verify suites and the tests.
"""
from pathlib import Path

import numpy as np
from scipy.stats import unitary_group

from core.errors import ScenarioValidationError
from models.operators import NormalOperator
from runner.parser import ScenarioParser
from schemas.scenario import Scenario

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


def list_fixtures() -> list[str]:
    """Names of the shipped scenarios, sorted"""
    return sorted(path.stem for path in SCENARIO_DIR.glob("*.json"))


def fixture_path(name: str) -> Path:
    path = SCENARIO_DIR / f"{name}.json"
    if not path.is_file():
        raise ScenarioValidationError(f"no fixture named '{name}'", fields=["name"])
    return path


def load_fixture(name: str) -> Scenario:
    return ScenarioParser().parse_file(fixture_path(name))


def resolve_scenario(reference: str) -> Scenario:
    """A scenario file path, or the name of a shipped fixture"""
    path = Path(reference)
    if path.is_file():
        return ScenarioParser().parse_file(path)
    return load_fixture(reference)


# ============================================================================
# RANDOM ENSEMBLES
# ============================================================================

def random_normal_operator(
    rng: np.random.Generator,
    max_dim: int = 16,
    radius: float = 0.95,
) -> NormalOperator:
    """
    Random normal matrix with eigenvalue 1 (multiplicity >= 1) and the
    remaining eigenvalues uniform in the disk of the given radius

    The eigenbasis is Haar-distributed.
    """
    dim = int(rng.integers(2, max_dim + 1))
    ones = int(rng.integers(1, dim))
    rest = dim - ones
    moduli = radius * np.sqrt(rng.uniform(0.0, 1.0, rest))
    angles = rng.uniform(0.0, 2 * np.pi, rest)
    values = np.concatenate([np.ones(ones, dtype=complex), moduli * np.exp(1j * angles)])
    values = values[rng.permutation(dim)]
    basis = unitary_group.rvs(dim, random_state=rng)
    return NormalOperator(values, basis)


def normal_ensemble(seed: int, count: int, max_dim: int = 16, radius: float = 0.95) -> list[NormalOperator]:
    rng = np.random.default_rng(seed)
    return [random_normal_operator(rng, max_dim, radius) for _ in range(count)]
