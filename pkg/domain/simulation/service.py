"""
Two-channel mixture simulation.

Each source reaches the two microphones through its own impulse response:
a unit direct-path impulse at an integer delay, followed (when T60 > 0) by
an exponentially decaying white-noise tail. The interchannel delay ``d``
of a source places its direct path at ``max(0, -d)`` samples on channel 1
and ``max(0, d)`` on channel 2. Gains are set so source 1 leads every other
source by ``sir_db`` on channel 1, and the channels are the exact sum of
the per-source images.

This is a deliberately simple reverberation model, not a room simulator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.signal import fftconvolve

from core.errors import SimulationError
from utils.seeding import derive_rng

MAX_DELAY = 8
MIN_REVERB_T60 = 0.05
MAX_T60 = 1.0
DEFAULT_SAMPLE_RATE = 8000
N_CHANNELS = 2

# Tail energy relative to the direct path (0 dB direct-to-reverberant ratio).
TAIL_ENERGY = 1.0


class MixSpec(BaseModel):
    """Recipe for one mixture."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    sources: List[str] = Field(min_length=1)
    sir_db: float = 0.0
    delays: List[int]
    t60: float = 0.0
    seed: int = Field(0, ge=0)

    @model_validator(mode="after")
    def _check(self) -> "MixSpec":
        if len(self.delays) != len(self.sources):
            raise ValueError(
                f"{len(self.delays)} delays given for {len(self.sources)} sources"
            )
        for delay in self.delays:
            if abs(delay) > MAX_DELAY:
                raise ValueError(f"delay {delay} exceeds +/-{MAX_DELAY} samples")
        if self.t60 != 0.0 and not MIN_REVERB_T60 <= self.t60 <= MAX_T60:
            raise ValueError(
                f"t60 must be 0 or within [{MIN_REVERB_T60}, {MAX_T60}] s, got {self.t60}"
            )
        return self

    @property
    def n_sources(self) -> int:
        return len(self.sources)


@dataclass(frozen=True)
class Mixture:
    """
    A simulated recording.

    ``channels`` is ``2 x N``; ``references`` is ``S x 2 x N`` and holds each
    source's gained image on each channel.
    """

    channels: np.ndarray
    references: np.ndarray
    spec: MixSpec
    sample_rate: int = DEFAULT_SAMPLE_RATE

    @property
    def n_samples(self) -> int:
        return self.channels.shape[1]

    def reference(self, source: int, channel: int = 0) -> np.ndarray:
        return self.references[source, channel]


def decay_envelope(t60: float, length: int, sample_rate: int = DEFAULT_SAMPLE_RATE) -> np.ndarray:
    """Amplitude envelope ``10 ** (-3 t / t60)``; energy falls 60 dB at ``t = t60``."""
    if t60 <= 0:
        raise SimulationError(f"decay_envelope needs t60 > 0, got {t60}")
    t = np.arange(length) / sample_rate
    return 10.0 ** (-3.0 * t / t60)


def synth_rir(
    t60: float,
    direct_delay: int,
    seed: int,
    sample_rate: int = DEFAULT_SAMPLE_RATE,
    rng: Optional[np.random.Generator] = None,
) -> np.ndarray:
    """
    Synthesize an impulse response.

    Args:
        t60: Reverberation time in seconds (0 = anechoic).
        direct_delay: Samples before the direct-path impulse.
        seed: Seed for the noise tail (ignored when ``rng`` is given).
        sample_rate: Sampling rate in Hz.
        rng: Optional explicit stream for the tail.

    Returns:
        ``direct_delay + 1`` samples for ``t60 = 0``; otherwise followed by a
        tail of ``ceil(t60 * sample_rate)`` samples scaled to unit energy.
    """
    if t60 < 0:
        raise SimulationError(f"t60 must be non-negative, got {t60}")
    if direct_delay < 0:
        raise SimulationError(f"direct_delay must be non-negative, got {direct_delay}")

    direct = np.zeros(direct_delay + 1)
    direct[direct_delay] = 1.0
    if t60 == 0:
        return direct

    length = int(math.ceil(t60 * sample_rate))
    rng = rng if rng is not None else derive_rng(seed)
    tail = rng.standard_normal(length) * decay_envelope(t60, length, sample_rate)
    tail *= math.sqrt(TAIL_ENERGY / float(tail @ tail))
    return np.concatenate([direct, tail])


def apply_rir(wave: np.ndarray, rir: np.ndarray) -> np.ndarray:
    """Filter ``wave`` with ``rir``, truncated to the input length."""
    n = wave.shape[0]
    nonzero = np.flatnonzero(rir)
    if nonzero.size == 1 and rir[nonzero[0]] == 1.0:
        # Pure delay: shift exactly.
        delay = int(nonzero[0])
        out = np.zeros(n)
        if delay < n:
            out[delay:] = wave[: n - delay]
        return out
    return fftconvolve(wave, rir)[:n]


def _pad_to(waves: Sequence[np.ndarray], length: int) -> np.ndarray:
    out = np.zeros((len(waves), length))
    for index, wave in enumerate(waves):
        out[index, : wave.shape[0]] = wave
    return out


def source_images(
    spec: MixSpec,
    waves: np.ndarray,
    sample_rate: int = DEFAULT_SAMPLE_RATE,
) -> np.ndarray:
    """Ungained ``S x 2 x N`` images of padded sources through their RIRs."""
    images = np.zeros((waves.shape[0], N_CHANNELS, waves.shape[1]))
    for j, (wave, delay) in enumerate(zip(waves, spec.delays)):
        channel_delays = (max(0, -delay), max(0, delay))
        for ch, direct_delay in enumerate(channel_delays):
            rir = synth_rir(
                spec.t60, direct_delay, spec.seed, sample_rate, rng=derive_rng(spec.seed, j, ch)
            )
            images[j, ch] = apply_rir(wave, rir)
    return images


def mix(
    spec: MixSpec,
    waves: Sequence[np.ndarray],
    sample_rate: int = DEFAULT_SAMPLE_RATE,
    source_rates: Optional[Sequence[int]] = None,
) -> Mixture:
    """
    Build a two-channel mixture from source waveforms.

    Args:
        spec: Mixture recipe; ``spec.sources[j]`` names ``waves[j]``.
        waves: 1-D source signals, zero-padded to the longest.
        sample_rate: Target rate in Hz.
        source_rates: Native rates of ``waves``; all must equal ``sample_rate``.

    Returns:
        ``Mixture`` whose channels equal the sum of its references exactly.

    Raises:
        SimulationError: On count or rate mismatch, non 1-D sources, or a
            silent source that cannot be gained to the requested SIR.
    """
    if len(waves) != spec.n_sources:
        raise SimulationError(f"MixSpec lists {spec.n_sources} sources, {len(waves)} waveforms given")
    if source_rates is not None:
        for name, rate in zip(spec.sources, source_rates):
            if rate != sample_rate:
                raise SimulationError(f"{name}: sample rate {rate} Hz, expected {sample_rate} Hz")
    arrays = [np.asarray(wave, dtype=np.float64) for wave in waves]
    for name, wave in zip(spec.sources, arrays):
        if wave.ndim != 1 or wave.size == 0:
            raise SimulationError(f"{name}: source must be a non-empty 1-D signal")

    padded = _pad_to(arrays, max(wave.shape[0] for wave in arrays))
    images = source_images(spec, padded, sample_rate)

    energies = np.einsum("jn,jn->j", images[:, 0], images[:, 0])
    if energies[0] == 0:
        raise SimulationError(f"{spec.sources[0]}: reference source is silent on channel 1")
    gains = np.ones(spec.n_sources)
    for j in range(1, spec.n_sources):
        if energies[j] == 0:
            raise SimulationError(f"{spec.sources[j]}: source is silent on channel 1")
        gains[j] = math.sqrt(energies[0] / (energies[j] * 10.0 ** (spec.sir_db / 10.0)))

    references = images * gains[:, np.newaxis, np.newaxis]
    channels = references.sum(axis=0)
    return Mixture(channels=channels, references=references, spec=spec, sample_rate=sample_rate)
