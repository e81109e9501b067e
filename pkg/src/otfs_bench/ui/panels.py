"""Panel and table display functions for OTFS Bench UI."""

import math
from typing import Any, Iterable, Optional, Union

from rich.padding import Padding
from rich.panel import Panel
from rich.table import Table

from otfs_bench.constants import (PANEL_CHECKS, PANEL_ERROR, PANEL_OVERHEAD, PANEL_RESULTS,
                                  UI_COLORS)
from otfs_bench.utils.file_utils import DotDict

from .constants import DB_FORMAT, DEFAULT_PANEL_PADDING, FAIL_MARK, NMSE_FORMAT, PASS_MARK
from .output import print

colors = DotDict(UI_COLORS)


def panel(
    title: str,
    text: Union[str, Table],
    top: int = DEFAULT_PANEL_PADDING["top"],
    right: int = DEFAULT_PANEL_PADDING["right"],
    bottom: int = DEFAULT_PANEL_PADDING["bottom"],
    left: int = DEFAULT_PANEL_PADDING["left"],
    border_style: Optional[str] = None,
    **kwargs: Any,
) -> None:
    """Display a rich panel."""
    border_style = border_style or kwargs.get("style")
    panel_obj = Panel(Padding(text, 1), title=title, title_align="left", border_style=border_style)
    print(Padding(panel_obj, (top, right, bottom, left)), **kwargs)


def error(text: str) -> None:
    """Display an error panel."""
    panel(PANEL_ERROR, text, style=colors.error)


def _nmse(value: float) -> str:
    return NMSE_FORMAT.format(value) if math.isfinite(value) else "n/a"


def _db(value: float) -> str:
    return DB_FORMAT.format(10 * math.log10(value)) if value > 0 and math.isfinite(value) else "n/a"


def results_table(axis: str, aggregates: Iterable) -> None:
    """Mean/median NMSE per (sweep value, estimator)."""
    table = Table(box=None, padding=(0, 2, 0, 0))
    table.add_column(axis, justify="right")
    table.add_column("Estimator")
    table.add_column("Mean NMSE", justify="right")
    table.add_column("Mean (dB)", justify="right")
    table.add_column("Median NMSE", justify="right")
    table.add_column("Std err", justify="right")
    table.add_column("Trials", justify="right")
    table.add_column("Flagged", justify="right")
    for row in aggregates:
        table.add_row(
            f"{row.sweep_value:g}",
            row.estimator,
            _nmse(row.mean_nmse),
            _db(row.mean_nmse),
            _nmse(row.median_nmse),
            _nmse(row.std_err),
            str(row.trials),
            str(row.flagged) if row.flagged else "",
        )
    panel(PANEL_RESULTS, table, border_style=colors.primary)


def check_table(results: Iterable) -> None:
    """Pass/fail report of the validation checks."""
    table = Table(box=None, padding=(0, 2, 0, 0))
    table.add_column("Check")
    table.add_column("Result")
    table.add_column("Value", justify="right")
    table.add_column("Threshold", justify="right")
    table.add_column("Detail", style=colors.muted)
    for result in results:
        mark = (
            f"[{colors.success}]{PASS_MARK}[/]" if result.passed else f"[{colors.error}]{FAIL_MARK}[/]"
        )
        table.add_row(
            result.name, mark, f"{result.value:.3e}", f"{result.threshold:.1e}", result.detail
        )
    panel(PANEL_CHECKS, table, border_style=colors.muted)


def overhead_table(reports: Iterable) -> None:
    """Impulse vs structured-sparse pilot resource counts per antenna count."""
    table = Table(box=None, padding=(0, 2, 0, 0))
    table.add_column("N_t", justify="right")
    table.add_column("D", justify="right")
    table.add_column("Impulse units", justify="right")
    table.add_column("Impulse ratio", justify="right")
    table.add_column("Sparse units", justify="right")
    table.add_column("Sparse ratio", justify="right")
    table.add_column("Reduction", justify="right")
    for report in reports:
        table.add_row(
            str(report.n_t),
            str(report.D),
            str(report.impulse_units),
            f"{report.impulse_ratio:.3f}",
            f"{report.sparse_units:.1f}",
            f"{report.sparse_ratio:.3f}",
            f"{report.reduction:.2f}x",
        )
    panel(PANEL_OVERHEAD, table, border_style=colors.muted)
