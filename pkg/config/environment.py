"""
Environment-driven runtime settings.

Values come from the process environment, which ``app.py`` populates from
a ``.env`` file via python-dotenv before anything else is imported.
"""

from __future__ import annotations

import os
from typing import Optional

THREADS_ENV = "MBNSEP_THREADS"
LOG_LEVEL_ENV = "MBNSEP_LOG_LEVEL"
TRACING_ENV = "MBNSEP_TRACING"


def _get_env(key: str, default: Optional[str] = None) -> Optional[str]:
    """Helper to fetch trimmed environment variables with default fallback."""
    value = os.getenv(key)
    if value is None:
        return default
    trimmed = value.strip()
    return trimmed or default


def get_thread_count() -> int:
    """Return the worker cap from ``MBNSEP_THREADS`` (default: CPU count, at least 1)."""
    default = os.cpu_count() or 1
    raw = _get_env(THREADS_ENV)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        return default
    return max(1, value)


def get_log_level() -> str:
    """Return the logging level name from ``MBNSEP_LOG_LEVEL`` (default INFO)."""
    return (_get_env(LOG_LEVEL_ENV, "INFO") or "INFO").upper()


def tracing_enabled() -> bool:
    """Return True when ``MBNSEP_TRACING`` asks for langsmith stage tracing."""
    return (_get_env(TRACING_ENV, "0") or "0").lower() in {"1", "true", "yes", "on"}
