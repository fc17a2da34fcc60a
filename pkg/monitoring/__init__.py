"""Monitoring and observability utilities."""

from .langsmith import traceable  # re-export convenience
from .log import configure_logging, get_logger

__all__ = ["configure_logging", "get_logger", "traceable"]
