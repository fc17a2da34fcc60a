"""
Logging setup.

All modules obtain their logger through ``get_logger(__name__)``. The first
call installs a single stderr handler on the ``mbnsep`` root logger with
the level taken from ``MBNSEP_LOG_LEVEL``.
"""

from __future__ import annotations

import logging
import sys

from config.environment import get_log_level

_ROOT_NAME = "mbnsep"
_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
_configured = False


def configure_logging(level: str | None = None) -> logging.Logger:
    """Install the stderr handler once and (re)apply the level."""
    global _configured
    root = logging.getLogger(_ROOT_NAME)
    if not _configured:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(_FORMAT))
        root.addHandler(handler)
        root.propagate = False
        _configured = True
    root.setLevel((level or get_log_level()).upper())
    return root


def get_logger(name: str) -> logging.Logger:
    """Return a child of the ``mbnsep`` logger for the given module name."""
    configure_logging()
    return logging.getLogger(f"{_ROOT_NAME}.{name}")
