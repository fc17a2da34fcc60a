"""Shared utilities."""

from .files import atomic_write
from .parallel import ordered_map, resolve_workers
from .seeding import derive_rng, derive_seed

__all__ = ["atomic_write", "derive_rng", "derive_seed", "ordered_map", "resolve_workers"]
