"""
Spectrogram container.

A ``Spectrogram`` is the complex T-F matrix of one channel together with
the framing it was computed with and the length of the original signal,
which synthesis needs to undo the tail padding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from config.settings import StftConfig
from core.errors import SignalError


@dataclass(frozen=True)
class Spectrogram:
    """Complex STFT of one channel, shape ``frames x bins``."""

    data: np.ndarray
    config: StftConfig
    original_len: int

    def __post_init__(self) -> None:
        if self.data.ndim != 2:
            raise SignalError(f"Spectrogram data must be 2-D, got shape {self.data.shape}")
        if self.data.shape[1] != self.config.n_bins:
            raise SignalError(
                f"Spectrogram has {self.data.shape[1]} bins but the framing implies "
                f"{self.config.n_bins}"
            )
        if not np.all(np.isfinite(self.data)):
            raise SignalError("Spectrogram contains non-finite entries")
        if self.original_len < 0:
            raise SignalError("original_len must be non-negative")

    @property
    def n_frames(self) -> int:
        return self.data.shape[0]

    @property
    def n_bins(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple:
        return self.data.shape

    def with_data(self, data: np.ndarray) -> "Spectrogram":
        """Return a spectrogram with the same framing and new T-F values."""
        return Spectrogram(data=data, config=self.config, original_len=self.original_len)
