"""
Module: otfs_bench.services.results

Output store for experiment runs.

Writes results.csv with fixed float formatting and row order, meta.json with
the resolved config and version, optional per-trial channel dumps and the
binary sensing-system dump.
"""

import csv
import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np

from otfs_bench.constants import FLOAT_FORMAT, RESULTS_HEADER
from otfs_bench.core.state import TrialState
from otfs_bench.exceptions import ResultsError
from otfs_bench.types import (ComplexArray, ExperimentConfig, FilePath, PathSet, ResultRow,
                              SensingSystem)
from otfs_bench.utils.file_utils import ensure_dir, write_json
from otfs_bench.utils.system import environment_info, get_version

SNR_DEFINITION = (
    "mean noiseless received power over the cells the estimator reads "
    "divided by the per-sample noise variance"
)


def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(value).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return FLOAT_FORMAT.format(float(value))
    return str(value)


def row_fields(row: ResultRow) -> List[str]:
    return [
        row.sweep_axis,
        format_value(row.sweep_value),
        row.estimator,
        format_value(row.seed),
        format_value(row.nmse),
        format_value(row.runtime_ms),
        "|".join(row.flags),
        format_value(row.eta),
        format_value(row.snr_db),
        format_value(row.n_t),
    ]


def write_results_csv(rows: Iterable[ResultRow], path: FilePath) -> Path:
    """Write one line per row in the given order; same rows give the same bytes."""
    path = Path(path)
    try:
        ensure_dir(path.parent)
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(RESULTS_HEADER)
            for row in rows:
                writer.writerow(row_fields(row))
    except OSError as e:
        raise ResultsError("write", path, str(e), e) from e
    return path


def read_results_csv(path: FilePath) -> List[Dict[str, str]]:
    try:
        with open(path, "r", encoding="utf-8", newline="") as f:
            return list(csv.DictReader(f))
    except OSError as e:
        raise ResultsError("read", path, str(e), e) from e


def write_meta_json(
    experiment: ExperimentConfig, path: FilePath, extra: Optional[Dict[str, Any]] = None
) -> Path:
    payload = {
        "config": experiment.to_dict(),
        "version": get_version(),
        "environment": environment_info(),
        "snr_definition": SNR_DEFINITION,
    }
    if extra:
        payload.update(extra)
    try:
        return write_json(path, payload)
    except (OSError, TypeError) as e:
        raise ResultsError("write", path, str(e), e) from e


def channel_dump_name(seed: int, sweep_value: float) -> str:
    return f"trial_{seed}_{sweep_value:g}.json"


def dump_trial_channel(state: TrialState, directory: FilePath) -> Path:
    """Path set, pilot dims and support of one trial as JSON."""
    path = Path(directory) / channel_dump_name(state.seed, state.sweep_value)
    payload = {
        "seed": state.seed,
        "sweep_axis": state.experiment.sweep.axis,
        "sweep_value": state.sweep_value,
        "eta": state.eta,
        "support": {"M_max": state.support.M_max, "N_max": state.support.N_max},
        "pilot_dims": state.dims.to_dict(),
        "path_set": state.path_set.to_dict() if state.path_set else None,
        "noise_power": dict(state.noise_power),
    }
    try:
        return write_json(path, payload)
    except (OSError, TypeError) as e:
        raise ResultsError("dump", path, str(e), e) from e


def dump_sensing(system: SensingSystem, path: FilePath) -> Path:
    """Binary dump of Psi and y.

    Layout, all little-endian: int64 rows, int64 cols, then Psi row-major,
    then y; every complex entry is a (real, imag) pair of float64.
    """
    path = Path(path)
    psi = np.ascontiguousarray(system.psi, dtype="<c16")
    y = np.ascontiguousarray(system.y, dtype="<c16")
    try:
        ensure_dir(path.parent)
        with open(path, "wb") as f:
            f.write(np.array(psi.shape, dtype="<i8").tobytes())
            f.write(psi.tobytes(order="C"))
            f.write(y.tobytes())
    except OSError as e:
        raise ResultsError("dump", path, str(e), e) from e
    return path


def load_sensing(path: FilePath) -> Tuple[ComplexArray, ComplexArray]:
    """Read a dump written by ``dump_sensing`` back as (Psi, y)."""
    try:
        raw = Path(path).read_bytes()
    except OSError as e:
        raise ResultsError("read", path, str(e), e) from e
    rows, cols = np.frombuffer(raw[:16], dtype="<i8")
    body = np.frombuffer(raw[16:], dtype="<c16")
    if body.size != rows * cols + rows:
        raise ResultsError("read", path, f"expected {rows * cols + rows} entries, got {body.size}")
    return body[: rows * cols].reshape(rows, cols).copy(), body[rows * cols :].copy()


def load_trial_channel(path: FilePath) -> PathSet:
    """Path set of a channel dump written by ``dump_trial_channel``."""
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as e:
        raise ResultsError("read", path, str(e), e) from e
    if not payload.get("path_set"):
        raise ResultsError("read", path, "dump carries no path set")
    return PathSet.from_dict(payload["path_set"])
