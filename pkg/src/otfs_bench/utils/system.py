"""
Module: otfs_bench.utils.system

Provides system information used in run metadata.
"""

import platform
import subprocess
from pathlib import Path
from typing import Dict

import numpy as np
import scipy

from ..configuration.settings import ApplicationSettings


def get_version() -> str:
    """
    Git-describe-style version string of the source tree.

    Falls back to the package version when git or the repository is unavailable.

    Returns:
        str: e.g. ``0.1.0-3-gabc1234-dirty`` or ``0.1.0``.
    """
    app_settings = ApplicationSettings()
    try:
        result = subprocess.run(
            ["git", "describe", "--tags", "--always", "--dirty"],
            capture_output=True,
            text=True,
            check=True,
            cwd=Path(__file__).resolve().parent,
        )
        described = result.stdout.strip()
        return described or app_settings.version
    except Exception:
        return app_settings.version


def environment_info() -> Dict[str, str]:
    return {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
    }
