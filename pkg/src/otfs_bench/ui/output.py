"""Output and display functions for OTFS Bench UI."""

from rich.console import Console

from otfs_bench.constants import MSG_VERSION_DISPLAY, UI_COLORS
from otfs_bench.utils.file_utils import DotDict
from otfs_bench.utils.system import get_version

console = Console()
colors = DotDict(UI_COLORS)


def print(message, **kwargs) -> None:
    """Print a message to the console."""
    console.print(message, **kwargs)


def info(text: str) -> None:
    """Print an informational message."""
    print(f"• {text}", style=colors.primary)


def success(message: str) -> None:
    """Print a success message."""
    print(f"• {message}", style=colors.success)


def warning(text: str) -> None:
    """Print a warning message."""
    print(f"• {text}", style=colors.warning)


def muted(text: str, spaces: int = 0) -> None:
    """Print a muted message."""
    print(f"{' ' * spaces}• {text}", style=colors.muted)


def version() -> None:
    """Print version information."""
    info(MSG_VERSION_DISPLAY.format(version=get_version()))


def status(message: str):
    """Spinner shown while a sweep runs."""
    return console.status(message, spinner="dots")
