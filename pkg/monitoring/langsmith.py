"""
LangSmith tracing helpers.

Provides a thin shim around ``langsmith.traceable`` so pipeline stages can
be decorated unconditionally. Tracing is active only when the optional
dependency is installed *and* ``MBNSEP_TRACING`` is enabled; otherwise the
decorator returns the function unchanged.
"""

from __future__ import annotations

from functools import wraps
from typing import Any, Callable, TypeVar

from config.environment import tracing_enabled

F = TypeVar("F", bound=Callable[..., Any])


def _identity_decorator(func: F) -> F:
    """Return the function unchanged (used when tracing is unavailable)."""
    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        return func(*args, **kwargs)

    return wrapper  # type: ignore[return-value]


try:  # pragma: no cover - optional dependency path
    from langsmith import traceable as _traceable  # type: ignore

    _TRACING = tracing_enabled()
except Exception:  # pragma: no cover - fallback when langsmith is absent
    _traceable = None
    _TRACING = False


def traceable(*args: Any, **kwargs: Any):
    """
    Pass-through wrapper for ``langsmith.traceable`` that also supports being
    used with or without parentheses.
    """
    bare = bool(args) and callable(args[0]) and len(args) == 1 and not kwargs

    if _TRACING and _traceable is not None:
        if bare:
            return _traceable(args[0])
        return _traceable(*args, **kwargs)

    if bare:
        return _identity_decorator(args[0])

    def decorator(func: F) -> F:
        return _identity_decorator(func)

    return decorator
