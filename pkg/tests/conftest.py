import numpy as np
import pytest

from models.operators import NormalOperator
from runner.fixtures import normal_ensemble
from services.scalar_dynamics import affine_blaschke_cycle

ENSEMBLE_SEED = 20240611
ENSEMBLE_SIZE = 50

# 1, 0.8 e^{i pi/3}, 0.3
SAMPLE_SPECTRUM = (1.0, 0.8 * np.exp(1j * np.pi / 3), 0.3)


@pytest.fixture(scope="session")
def ensemble():
    """Seeded random normal matrices with eigenvalue 1 and the rest in the open disk"""
    return normal_ensemble(ENSEMBLE_SEED, ENSEMBLE_SIZE)


@pytest.fixture(scope="session")
def small_ensemble():
    return normal_ensemble(ENSEMBLE_SEED + 1, 8)


@pytest.fixture(scope="session")
def two_layer_cycle():
    return affine_blaschke_cycle(0.5)


@pytest.fixture
def sample_operator():
    return NormalOperator.diagonal(SAMPLE_SPECTRUM)


@pytest.fixture
def jordan():
    return np.array([[1.0, 1.0], [0.0, 1.0]], dtype=complex)


@pytest.fixture
def swap():
    return np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


@pytest.fixture
def out_dir(tmp_path):
    return tmp_path / "out"
