"""
Module: otfs_bench.configuration.profiles

Named parameter profiles layered over the default experiment config.
"""

from typing import Dict, List

from otfs_bench.constants import ERROR_UNKNOWN_PROFILE
from otfs_bench.exceptions import ConfigurationError
from otfs_bench.types import UserConfig

DESK_PROFILE = "desk"
PAPER_PROFILE = "paper"


class ProfileRegistry:
    def __init__(self):
        self._profiles = self._load_default_profiles()

    def _load_default_profiles(self) -> Dict[str, UserConfig]:
        return {
            # Defaults are already desk scale
            DESK_PROFILE: {},
            PAPER_PROFILE: {
                "otfs": {"M": 600, "N": 12, "N_cp": 150},
                "channel": {"tau_max": 45.0 / (600 * 15e3)},
                "n_t": 32,
            },
        }

    def get_profile(self, name: str) -> UserConfig:
        if name not in self._profiles:
            raise ConfigurationError(ERROR_UNKNOWN_PROFILE.format(profile=name))
        return self._profiles[name]

    def list_profile_ids(self) -> List[str]:
        return list(self._profiles.keys())
