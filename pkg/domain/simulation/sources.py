"""
Deterministic speech-like test sources.

A source reference ``synth:<seed>`` names a harmonic signal with a wandering
pitch contour in the male/female range, a syllable-rate amplitude envelope
and a falling spectral tilt. It stands in for recorded speech so that a
manifest alone fully determines a dataset.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from core.errors import SimulationError
from utils.seeding import derive_rng

SYNTH_PREFIX = "synth:"
F0_RANGE = (90.0, 250.0)
SYLLABLE_RATE_HZ = 4.0
# Pitch anchors per second; the contour is linearly interpolated between them.
F0_ANCHORS_PER_SECOND = 8
_SOURCE_STREAM = 11


def is_synth_reference(reference: str) -> bool:
    return reference.startswith(SYNTH_PREFIX)


def parse_synth_reference(reference: str) -> int:
    """Seed encoded in ``synth:<seed>``."""
    if not is_synth_reference(reference):
        raise SimulationError(f"{reference!r} is not a synthetic source reference")
    raw = reference[len(SYNTH_PREFIX):]
    try:
        seed = int(raw)
    except ValueError as exc:
        raise SimulationError(f"{reference!r}: seed must be a non-negative integer") from exc
    if seed < 0:
        raise SimulationError(f"{reference!r}: seed must be a non-negative integer")
    return seed


def synth_source(
    seed: int,
    duration: float = 1.0,
    sample_rate: int = 8000,
    f0_range: Optional[tuple] = None,
) -> np.ndarray:
    """
    Generate a speech-like waveform.

    Args:
        seed: Determines every random choice.
        duration: Length in seconds.
        sample_rate: Sampling rate in Hz.
        f0_range: Pitch bounds in Hz (default 90-250).

    Returns:
        1-D signal of ``round(duration * sample_rate)`` samples with RMS 0.1.
    """
    if duration <= 0:
        raise SimulationError(f"duration must be positive, got {duration}")
    low, high = f0_range or F0_RANGE
    rng = derive_rng(seed, _SOURCE_STREAM)
    n = int(round(duration * sample_rate))
    t = np.arange(n) / sample_rate

    n_anchors = max(2, int(math.ceil(duration * F0_ANCHORS_PER_SECOND)) + 1)
    anchor_times = np.linspace(0.0, duration, n_anchors)
    center = rng.uniform(low, high)
    anchors = np.clip(center + rng.normal(0.0, 0.15 * (high - low), n_anchors), low, high)
    f0 = np.interp(t, anchor_times, anchors)
    phase = 2.0 * np.pi * np.cumsum(f0) / sample_rate

    n_harmonics = int((0.95 * sample_rate / 2.0) // high)
    signal = np.zeros(n)
    for h in range(1, n_harmonics + 1):
        audible = h * f0 < 0.95 * sample_rate / 2.0
        signal += audible * np.cos(h * phase + rng.uniform(0, 2 * np.pi)) / h

    rate = SYLLABLE_RATE_HZ * rng.uniform(0.8, 1.25)
    envelope = 0.5 * (1.0 - np.cos(2.0 * np.pi * rate * t + rng.uniform(0, 2 * np.pi)))
    signal *= envelope ** 1.5

    rms = float(np.sqrt(np.mean(signal ** 2)))
    if rms == 0:
        raise SimulationError(f"synth:{seed} produced a silent signal")
    return 0.1 * signal / rms
