"""
STFT analysis and weighted overlap-add synthesis.

Frame ``t`` covers samples ``[t * hop, t * hop + frame_len)`` of the
zero-padded signal, is multiplied by a periodic Hamming window and
transformed to a one-sided spectrum. Synthesis windows each inverse frame
with the same window, overlap-adds, and divides every sample by the summed
squared window, which reconstructs the input exactly whatever the hop.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import fft as sp_fft
from scipy.signal import get_window

from config.settings import StftConfig
from core.errors import SignalError
from core.models import Spectrogram

NORMALIZATION_FLOOR = 1e-12


def analysis_window(config: StftConfig) -> np.ndarray:
    """Periodic window of length ``frame_len``."""
    return get_window(config.window, config.frame_len, fftbins=True).astype(np.float64)


def frame_count(n_samples: int, config: StftConfig) -> int:
    """Number of frames once the tail is zero-padded to a whole frame."""
    if n_samples < config.frame_len:
        return 0
    return int(math.ceil((n_samples - config.frame_len) / config.hop)) + 1


def stft(wave: np.ndarray, config: StftConfig | None = None) -> Spectrogram:
    """
    Compute the one-sided STFT of a real signal.

    Args:
        wave: 1-D real samples, at least one frame long.
        config: Framing (defaults: 8 kHz, 256-sample frames, 64-sample hop).

    Returns:
        Spectrogram of shape ``frames x (frame_len // 2 + 1)``.

    Raises:
        SignalError: If the signal is not 1-D, not finite or shorter than one frame.
    """
    config = config or StftConfig()
    wave = np.asarray(wave, dtype=np.float64)
    if wave.ndim != 1:
        raise SignalError(f"stft expects a 1-D signal, got shape {wave.shape}")
    if wave.shape[0] < config.frame_len:
        raise SignalError(
            f"Signal of {wave.shape[0]} samples is shorter than one frame ({config.frame_len})"
        )
    if not np.all(np.isfinite(wave)):
        raise SignalError("Signal contains non-finite samples")

    n_frames = frame_count(wave.shape[0], config)
    padded_len = (n_frames - 1) * config.hop + config.frame_len
    padded = np.zeros(padded_len, dtype=np.float64)
    padded[: wave.shape[0]] = wave

    frames = sliding_window_view(padded, config.frame_len)[:: config.hop]
    spectrum = sp_fft.rfft(frames * analysis_window(config), axis=1)
    return Spectrogram(data=spectrum, config=config, original_len=wave.shape[0])


def istft(spec: Spectrogram) -> np.ndarray:
    """
    Resynthesize a waveform by weighted overlap-add.

    Args:
        spec: Spectrogram to invert.

    Returns:
        Real samples truncated to ``spec.original_len``.

    Raises:
        SignalError: If the squared-window normalization falls below 1e-12 at
            any retained sample.
    """
    config = spec.config
    window = analysis_window(config)
    n_frames = spec.n_frames
    padded_len = (n_frames - 1) * config.hop + config.frame_len if n_frames else 0

    frames = sp_fft.irfft(spec.data, n=config.frame_len, axis=1) * window
    output = np.zeros(padded_len, dtype=np.float64)
    norm = np.zeros(padded_len, dtype=np.float64)
    squared = window ** 2
    for t in range(n_frames):
        start = t * config.hop
        output[start : start + config.frame_len] += frames[t]
        norm[start : start + config.frame_len] += squared

    retained = min(spec.original_len, padded_len)
    if retained < spec.original_len:
        raise SignalError(
            f"Spectrogram covers {padded_len} samples but original_len is {spec.original_len}"
        )
    if retained and np.min(norm[:retained]) < NORMALIZATION_FLOOR:
        raise SignalError("Overlap-add normalization vanishes; window/hop leave samples uncovered")
    return output[:retained] / norm[:retained]
