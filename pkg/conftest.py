"""
Shared test fixtures
"""

import math
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from src.model import (  # noqa: E402
    ConstantControl,
    GaussianPulse,
    PhysicalParams,
    SimulationConfig,
    build_grid,
)


@pytest.fixture
def grid():
    return build_grid(256, 128.0)


@pytest.fixture
def params():
    return PhysicalParams(mass=1.0, hbar=1.0, g=1.0, gamma=1.0, c=1.0, alpha_mag=1.0)


@pytest.fixture
def transport_config():
    """Constant control G = g|alpha|: v_g = c / 2 and M_eff = 2M"""
    return SimulationConfig(
        grid=build_grid(256, 256.0),
        params=PhysicalParams(mass=math.inf, g=1.0, alpha_mag=1.0, c=1.0),
        control=ConstantControl(1.0),
        pulse=GaussianPulse(center=-40.0, width=5.0),
        dt=0.1,
        t_final=40.0,
        snapshot_stride=50,
        solver_tier="reduced",
    )


@pytest.fixture(autouse=True)
def _isolated_output(tmp_path, monkeypatch):
    """Keep CLI runs that omit --out inside the test's temp directory"""
    monkeypatch.setattr("src.runner.cli.OUTPUT_DIR", tmp_path / "runs", raising=False)
