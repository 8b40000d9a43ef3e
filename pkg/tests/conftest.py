import numpy as np
import pytest

from models.distributions import Gaussian
from utils.randomness import make_root_generator


@pytest.fixture
def root():
    return make_root_generator(20240611)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def unit_value():
    # E U = 1, Var U = 2
    return Gaussian(1.0, 2.0)


@pytest.fixture
def ledger(tmp_path, monkeypatch):
    path = tmp_path / "runs.jsonl"
    monkeypatch.setenv("MOSAIC_AUDIT_LOG", str(path))
    return path


