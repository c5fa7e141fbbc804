"""
pytest configuration and fixtures for the qbgeom tests.
This file contains shared parameter sets, sweep grids and output locations
so every test module works on the same small, fast problems.
"""

import os
from pathlib import Path
from typing import Generator
from unittest.mock import patch

import numpy as np
import pytest

from qbgeom.models import GridSpec, ModelParams


@pytest.fixture
def short_params() -> ModelParams:
    """A short, well-resolved run with strong memory and moderate coupling."""
    return ModelParams(
        omega0=100.0,
        zeta=1.0,
        lambda_=0.5,
        l_over_lambda0=0.125,
        t_max=20.0,
        n_steps=401,
    )


@pytest.fixture
def dark_params() -> ModelParams:
    """θ = 0 without dipole coupling: the antisymmetric channel is dark."""
    return ModelParams(zeta=0.0, lambda_=0.5, l_over_lambda0=0.0, t_max=200.0)


@pytest.fixture
def l_grid() -> GridSpec:
    """Five geometries over one full period."""
    return GridSpec(axis="l_over_lambda0", min=0.0, max=0.5, n_points=5)


@pytest.fixture
def lambda_grid() -> GridSpec:
    """Three log-spaced bath widths."""
    return GridSpec(
        axis="lambda_over_gamma", min=0.1, max=1.0, n_points=3, spacing="log"
    )


@pytest.fixture
def time_grid(short_params: ModelParams) -> GridSpec:
    """Time axis matching ``short_params``."""
    return GridSpec(
        axis="time", min=0.0, max=short_params.t_max, n_points=short_params.n_steps
    )


@pytest.fixture
def out_dir(tmp_path: Path) -> Path:
    """Directory for files written by a test."""
    target = tmp_path / "out"
    target.mkdir()
    return target


@pytest.fixture
def mock_env_vars() -> Generator[None, None, None]:
    """Environment without a configured config file."""
    env = {k: v for k, v in os.environ.items() if k != "QBGEOM_CONFIG"}
    with patch.dict(os.environ, env, clear=True):
        yield


@pytest.fixture
def config_file(tmp_path: Path) -> Path:
    """A config file overriding a few simulate options."""
    path = tmp_path / "qbgeom.env"
    path.write_text(
        "# small run\n"
        "steps=101\n"
        "t-max=5\n"
        "LAMBDA_OVER_GAMMA=0.5\n"
        "solver=numeric\n",
        encoding="utf-8",
    )
    return path


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for randomized checks."""
    return np.random.default_rng(1234)
