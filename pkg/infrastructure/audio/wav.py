"""
WAV read/write helpers.

Only what the pipeline needs: mono or 2-channel files, PCM 16-bit or
32-bit float, at the configured sample rate (8 kHz by default). Resampling
is not performed; a file at any other rate is rejected.
"""

from __future__ import annotations

import os
from typing import Literal

import numpy as np
import soundfile as sf

from core.errors import AudioIOError
from utils.files import atomic_write

WavSubtype = Literal["PCM_16", "FLOAT"]

_SUPPORTED_SUBTYPES = {"PCM_16", "FLOAT"}
_MAX_CHANNELS = 2


def read_wav(path: str, expected_rate: int = 8000) -> np.ndarray:
    """
    Read a WAV file as float64 samples.

    Args:
        path: File to read.
        expected_rate: Required sample rate in Hz.

    Returns:
        Array of shape ``samples x channels`` (always 2-D).

    Raises:
        AudioIOError: If the file is missing, unreadable, has an unsupported
            subtype or channel count, or is not at ``expected_rate``.
    """
    if not os.path.exists(path):
        raise AudioIOError(f"Audio file not found: {path}")
    try:
        info = sf.info(path)
        if info.subtype not in _SUPPORTED_SUBTYPES:
            raise AudioIOError(
                f"{path}: unsupported WAV subtype {info.subtype} (expected PCM_16 or FLOAT)"
            )
        if info.channels > _MAX_CHANNELS:
            raise AudioIOError(f"{path}: {info.channels} channels, at most 2 are supported")
        if info.samplerate != expected_rate:
            raise AudioIOError(
                f"{path}: sample rate {info.samplerate} Hz, expected {expected_rate} Hz "
                "(resampling is not supported)"
            )
        data, _ = sf.read(path, dtype="float64", always_2d=True)
    except AudioIOError:
        raise
    except Exception as exc:
        raise AudioIOError(f"Failed to read {path}: {exc}") from exc
    return data


def write_wav(
    path: str,
    data: np.ndarray,
    sample_rate: int = 8000,
    subtype: WavSubtype = "FLOAT",
) -> None:
    """
    Write samples to a WAV file atomically.

    Args:
        path: Destination file.
        data: 1-D mono samples or ``samples x channels``.
        sample_rate: Sample rate in Hz.
        subtype: ``"FLOAT"`` (32-bit float, lossless for the pipeline) or ``"PCM_16"``.

    Raises:
        AudioIOError: If the data shape or subtype is unsupported or writing fails.
    """
    if subtype not in _SUPPORTED_SUBTYPES:
        raise AudioIOError(f"Unsupported WAV subtype {subtype!r}")
    data = np.asarray(data, dtype=np.float64)
    if data.ndim == 2 and data.shape[1] > _MAX_CHANNELS:
        raise AudioIOError(f"Cannot write {data.shape[1]} channels to {path}; at most 2")
    if data.ndim not in (1, 2):
        raise AudioIOError(f"Cannot write array of shape {data.shape} to {path}")
    try:
        with atomic_write(path, "wb") as handle:
            sf.write(handle, data, sample_rate, subtype=subtype, format="WAV")
    except Exception as exc:
        raise AudioIOError(f"Failed to write {path}: {exc}") from exc
