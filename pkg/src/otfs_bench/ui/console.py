"""Main console coordination module for OTFS Bench UI.

This module re-exports functions from the specialized UI modules so callers
(and the UILogger protocol) see a single facade.
"""

from .output import console, info, muted, print, status, success, version, warning
from .panels import check_table, error, overhead_table, panel, results_table

__all__ = [
    # From output module
    "console",
    "info",
    "muted",
    "print",
    "status",
    "success",
    "version",
    "warning",
    # From panels module
    "check_table",
    "error",
    "overhead_table",
    "panel",
    "results_table",
]
