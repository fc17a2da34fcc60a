"""Feature extraction services."""
from .service import (
    DEFAULT_FLOOR,
    assemble_features,
    assemble_log_magnitude_features,
    cos_ipd,
    log_magnitude,
)

__all__ = [
    "DEFAULT_FLOOR",
    "assemble_features",
    "assemble_log_magnitude_features",
    "cos_ipd",
    "log_magnitude",
]
