"""
Module: otfs_bench.configuration.defaults

Default experiment configuration.
Every key a config file may set appears here; profiles override subsets.
"""

from otfs_bench.constants import (AXIS_ETA, DEFAULT_PDP_DECAY, DEFAULT_ROLLOFF, ESTIMATOR_IMPULSE,
                                  ESTIMATOR_OMP, ESTIMATOR_SOMP3D, GUARD_CYCLIC)
from otfs_bench.types import UserConfig

DEFAULT_EXPERIMENT_CONFIG: UserConfig = {
    "otfs": {
        "M": 64,
        "N": 16,
        "N_cp": 16,
        "delta_f": 15e3,
        "f_c": 2.15e9,
    },
    "channel": {
        "N_p": 6,
        "N_s": 20,
        "v": 100.0,
        "tau_max": 8.0 / (64 * 15e3),
        "angle_spread": None,
        "pdp_decay": DEFAULT_PDP_DECAY,
        "rolloff": DEFAULT_ROLLOFF,
        "on_grid": False,
    },
    "pilot": {"eta": 0.5, "guard": GUARD_CYCLIC},
    "n_t": 16,
    "snr_db": 5.0,
    "estimators": [
        {"id": ESTIMATOR_IMPULSE, "params": {}},
        {"id": ESTIMATOR_OMP, "params": {}},
        {"id": ESTIMATOR_SOMP3D, "params": {}},
    ],
    "sweep": {"axis": AXIS_ETA, "values": [0.5]},
    "trials": 1,
    "base_seed": 0,
    "exclude_flagged": False,
    "record_runtime": False,
    "dump_channels": False,
}

# Keys accepted inside "pilot"
PILOT_KEYS = ("eta", "M_tau", "N_nu", "M_g", "N_g", "guard")

# Keys accepted inside each "estimators" entry
ESTIMATOR_KEYS = ("id", "params")
