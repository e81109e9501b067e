"""
Module: otfs_bench.utils.file_utils

Provides file system utilities and helper classes.
Includes DotDict for dot notation access and deterministic JSON writing.
"""

import json
from pathlib import Path
from typing import Any

from otfs_bench.types import FilePath


class DotDict(dict):
    """dot.notation access to dictionary attributes"""

    __getattr__ = dict.get
    __setattr__ = dict.__setitem__
    __delattr__ = dict.__delitem__


def ensure_dir(path: FilePath) -> Path:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    return path


def write_json(path: FilePath, payload: Any) -> Path:
    """Write ``payload`` with sorted keys and a trailing newline."""
    path = Path(path)
    ensure_dir(path.parent)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")
    return path
