"""
Module: otfs_bench.utils.user_configuration

Provides experiment configuration file handling.
Loads a JSON config, layers it over the selected profile and the defaults,
rejects unknown keys and builds the resolved ExperimentConfig.
"""

import copy
import json
from json import JSONDecodeError
from typing import Any, Dict, Optional

from otfs_bench.configuration.defaults import (DEFAULT_EXPERIMENT_CONFIG, ESTIMATOR_KEYS,
                                               PILOT_KEYS)
from otfs_bench.configuration.profiles import DESK_PROFILE, ProfileRegistry
from otfs_bench.constants import (ERROR_CONFIG_DECODE, ERROR_CONFIG_NOT_FOUND, ERROR_UNKNOWN_KEY,
                                  GUARD_CYCLIC, GUARD_MODES, SWEEP_AXES)
from otfs_bench.core.estimators.registry import default_registry
from otfs_bench.exceptions import ConfigurationError
from otfs_bench.types import (ChannelGenParams, EstimatorConfig, ExperimentConfig, FilePath,
                              OtfsConfig, SweepConfig, UserConfig)


def read_config_file(path: FilePath) -> UserConfig:
    """Load a JSON config file."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError:
        raise ConfigurationError(ERROR_CONFIG_NOT_FOUND.format(path=path))
    except JSONDecodeError as e:
        raise ConfigurationError(ERROR_CONFIG_DECODE.format(path=path, error=e))
    except OSError as e:
        raise ConfigurationError(e)
    if not isinstance(data, dict):
        raise ConfigurationError(f"Config file '{path}' must hold a JSON object")
    return data


def _check_keys(entry: Dict[str, Any], allowed, prefix: str) -> None:
    for key in entry:
        if key not in allowed:
            raise ConfigurationError(ERROR_UNKNOWN_KEY.format(key=f"{prefix}{key}"))


def merge_config(base: UserConfig, override: UserConfig, prefix: str = "") -> UserConfig:
    """Recursively overlay ``override`` on ``base``; unknown keys are errors.

    ``pilot`` and ``estimators`` are replaced as a whole.
    """
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if key not in base:
            raise ConfigurationError(ERROR_UNKNOWN_KEY.format(key=f"{prefix}{key}"))
        if key == "pilot" and not prefix:
            if not isinstance(value, dict):
                raise ConfigurationError("'pilot' must be an object")
            _check_keys(value, PILOT_KEYS, "pilot.")
            merged[key] = dict(value)
        elif key == "estimators" and not prefix:
            if not isinstance(value, list):
                raise ConfigurationError("'estimators' must be a list")
            for entry in value:
                if not isinstance(entry, dict) or "id" not in entry:
                    raise ConfigurationError("each estimator needs an 'id'")
                _check_keys(entry, ESTIMATOR_KEYS, "estimators.")
            merged[key] = [{"id": e["id"], "params": dict(e.get("params", {}))} for e in value]
        elif isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ConfigurationError(f"'{prefix}{key}' must be an object")
            merged[key] = merge_config(base[key], value, prefix=f"{prefix}{key}.")
        else:
            merged[key] = value
    return merged


def load_config(
    path: Optional[FilePath] = None,
    profile: Optional[str] = None,
    overrides: Optional[UserConfig] = None,
) -> UserConfig:
    """Defaults, then the profile, then the file, then explicit overrides.

    A ``profile`` key in the file is honoured unless ``profile`` is passed.
    """
    data = read_config_file(path) if path else {}
    file_profile = data.pop("profile", None)
    name = profile or file_profile or DESK_PROFILE

    config = merge_config(DEFAULT_EXPERIMENT_CONFIG, ProfileRegistry().get_profile(name))
    config = merge_config(config, data)
    if overrides:
        config = merge_config(config, overrides)
    config["profile"] = name
    return config


def build_experiment(config: UserConfig) -> ExperimentConfig:
    """Turn a merged config dict into a validated ExperimentConfig."""
    try:
        otfs = OtfsConfig(**config["otfs"])
        channel = ChannelGenParams(**config["channel"])
        estimators = tuple(
            EstimatorConfig(id=str(e["id"]), params=dict(e.get("params", {})))
            for e in config["estimators"]
        )
        sweep = SweepConfig(
            axis=str(config["sweep"]["axis"]),
            values=tuple(float(v) for v in config["sweep"]["values"]),
        )
        experiment = ExperimentConfig(
            otfs=otfs,
            channel=channel,
            pilot=dict(config["pilot"]),
            n_t=int(config["n_t"]),
            snr_db=None if config["snr_db"] is None else float(config["snr_db"]),
            estimators=estimators,
            sweep=sweep,
            trials=int(config["trials"]),
            base_seed=int(config["base_seed"]),
            exclude_flagged=bool(config["exclude_flagged"]),
            record_runtime=bool(config["record_runtime"]),
            dump_channels=bool(config["dump_channels"]),
            profile=config.get("profile", DESK_PROFILE),
        )
    except (TypeError, ValueError, KeyError) as e:
        raise ConfigurationError(f"Invalid experiment config: {e}") from e
    validate_experiment(experiment)
    return experiment


def validate_experiment(experiment: ExperimentConfig) -> None:
    if experiment.trials < 1:
        raise ConfigurationError(f"trials must be >= 1, got {experiment.trials}")
    if experiment.n_t < 2 or experiment.n_t % 2:
        raise ConfigurationError(f"n_t must be even and >= 2, got {experiment.n_t}")
    if experiment.sweep.axis not in SWEEP_AXES:
        raise ConfigurationError(
            f"Unknown sweep axis '{experiment.sweep.axis}', expected one of {', '.join(SWEEP_AXES)}"
        )
    if not experiment.sweep.values:
        raise ConfigurationError("sweep.values must not be empty")
    if not experiment.estimators:
        raise ConfigurationError("at least one estimator is required")
    ids = [e.id for e in experiment.estimators]
    if len(set(ids)) != len(ids):
        raise ConfigurationError(f"estimator ids must be unique, got {ids}")
    for config in experiment.estimators:
        default_registry.create(config)
    if "M_tau" not in experiment.pilot and "eta" not in experiment.pilot:
        raise ConfigurationError("pilot needs either 'eta' or 'M_tau' and 'N_nu'")
    if "M_tau" in experiment.pilot and "N_nu" not in experiment.pilot:
        raise ConfigurationError("pilot 'M_tau' needs 'N_nu'")
    guard = experiment.pilot.get("guard", GUARD_CYCLIC)
    if guard not in GUARD_MODES:
        choices = ", ".join(GUARD_MODES)
        raise ConfigurationError(f"pilot guard must be one of {choices}, got '{guard}'")
