from pathlib import Path

import numpy as np
import pytest

from otfs_bench.services import telemetry
from otfs_bench.types import OtfsConfig
from otfs_bench.utils.user_configuration import build_experiment, load_config

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def small_cfg():
    return OtfsConfig(M=16, N=8, N_cp=4, delta_f=15e3)


@pytest.fixture
def desk_cfg():
    return OtfsConfig(M=64, N=16, N_cp=16, delta_f=15e3)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def fixture_config_path():
    return FIXTURES / "fixture.json"


@pytest.fixture
def small_experiment():
    """Desk frame with four antennas, one sweep value and one trial."""
    overrides = {
        "n_t": 4,
        "snr_db": 10.0,
        "sweep": {"axis": "eta", "values": [0.5]},
        "trials": 1,
    }
    return build_experiment(load_config(overrides=overrides))


@pytest.fixture(autouse=True)
def telemetry_off():
    telemetry.reset()
    yield
    telemetry.reset()

