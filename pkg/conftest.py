import os

import pytest

from src.solver import ShootingConfig

ROOT = os.path.dirname(os.path.abspath(__file__))


@pytest.fixture
def fast_config() -> ShootingConfig:
    return ShootingConfig(n_nu=16, n_c=16, n_time=32, n_refine=12, max_nfev=150)


@pytest.fixture
def schema_dir() -> str:
    return os.path.join(ROOT, "schema")
