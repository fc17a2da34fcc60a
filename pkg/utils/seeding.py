"""Seed derivation for reproducible, parallel-safe random streams."""

from __future__ import annotations

import numpy as np


def derive_rng(seed: int, *keys: int) -> np.random.Generator:
    """
    Return an independent generator for ``(seed, *keys)``.

    The stream depends only on the key tuple, e.g. ``(seed, layer, clustering)``,
    never on the order in which streams are requested.
    """
    entropy = [int(seed)] + [int(key) for key in keys]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def derive_seed(seed: int, *keys: int) -> int:
    """Integer seed for ``(seed, *keys)``, for APIs that take a seed rather than a stream."""
    entropy = [int(seed)] + [int(key) for key in keys]
    return int(np.random.SeedSequence(entropy).generate_state(1)[0])
