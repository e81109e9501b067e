"""
Module: otfs_bench.services.telemetry

Provides error tracking with Sentry and optional tracing spans with Logfire.
Both are opt-in: Sentry needs a DSN in the environment, Logfire needs --logfire.
"""

import os
from contextlib import contextmanager, nullcontext
from typing import Any, Dict, Iterator, List, Optional

import logfire
import sentry_sdk

from otfs_bench.constants import APP_VERSION, ENV_SENTRY_DSN, ENV_SENTRY_ENV
from otfs_bench.exceptions import TelemetryError

_state = {"sentry": False, "logfire": False}


def _before_send(event: Dict[str, Any], hint: Dict[str, Any]) -> Optional[Dict[str, Any]]:
    """Drop local file paths from argv before events leave the machine."""
    if not _state["sentry"]:
        return None

    if event.get("extra") and event["extra"].get("sys.argv"):
        args: List[str] = event["extra"]["sys.argv"]
        for i, arg in enumerate(args):
            if os.sep in arg or arg.endswith(".json"):
                args[i] = "[Filtered]"

    return event


def setup(enabled: bool = True, dsn: Optional[str] = None) -> bool:
    """Initialize Sentry when enabled and a DSN is available.

    Returns:
        True if crash reporting is active.
    """
    dsn = dsn or os.environ.get(ENV_SENTRY_DSN)
    if not enabled or not dsn:
        _state["sentry"] = False
        return False

    try:
        sentry_sdk.init(
            dsn=dsn,
            traces_sample_rate=0.0,
            send_default_pii=False,
            before_send=_before_send,
            environment=os.environ.get(ENV_SENTRY_ENV, "production"),
            release=APP_VERSION,
            debug=False,
            shutdown_timeout=0,
        )
    except Exception as e:
        raise TelemetryError(f"Failed to initialize Sentry: {e}") from e
    _state["sentry"] = True
    return True


def setup_tracing(enabled: bool) -> bool:
    """Configure Logfire spans; traces are only shipped when a token is present."""
    if not enabled:
        _state["logfire"] = False
        return False
    try:
        logfire.configure(send_to_logfire="if-token-present", console=False)
    except Exception as e:
        raise TelemetryError(f"Failed to configure Logfire: {e}") from e
    _state["logfire"] = True
    return True


def tracing_enabled() -> bool:
    return _state["logfire"]


@contextmanager
def trace(name: str, **attributes: Any) -> Iterator[None]:
    """Logfire span when tracing is on, no-op otherwise."""
    span = logfire.span(name, **attributes) if _state["logfire"] else nullcontext()
    with span:
        yield


def capture_exception(*args: Any, **kwargs: Any) -> Optional[str]:
    if not _state["sentry"]:
        return None
    return sentry_sdk.capture_exception(*args, **kwargs)


def reset() -> None:
    """Disable both integrations (used by tests and at CLI start)."""
    _state["sentry"] = False
    _state["logfire"] = False
