import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import config  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long optimizer or Fock runs")


@pytest.fixture
def realistic():
    """Loss settings of the realistic comparison."""
    return {"resource_db": 9.0, "eta_s": config.REALISTIC_ETA_S, "eta_h": config.REALISTIC_ETA_H}


@pytest.fixture
def lossless():
    return {"resource_db": 9.0, "eta_s": 1.0, "eta_h": 1.0}


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)
