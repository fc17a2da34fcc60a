"""
Shared T-F tensor types.

The pipeline indexes T-F units ``i = (t, f)`` row-major over frames then
bins: ``i = t * n_bins + f``. Every flattening in the toolkit goes through
``flatten_units`` / ``unflatten_units`` so the convention cannot drift.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from core.errors import DpclError, FeatureError, MaskError

SPATIAL_LAYOUT: Tuple[str, ...] = ("log_mag_1", "log_mag_2", "cos_ipd")
SINGLE_CHANNEL_LAYOUT: Tuple[str, ...] = ("log_mag_1",)

UNIT_NORM_TOLERANCE = 1e-6


def flatten_units(grid: np.ndarray) -> np.ndarray:
    """Flatten a ``frames x bins [x c]`` array to ``n [x c]`` rows (row-major)."""
    if grid.ndim == 2:
        return grid.reshape(-1)
    return grid.reshape(grid.shape[0] * grid.shape[1], *grid.shape[2:])


def unflatten_units(rows: np.ndarray, frames: int, bins: int) -> np.ndarray:
    """Inverse of ``flatten_units``."""
    if rows.shape[0] != frames * bins:
        raise FeatureError(
            f"Cannot unflatten {rows.shape[0]} rows into {frames} x {bins} units"
        )
    return rows.reshape(frames, bins, *rows.shape[1:])


@dataclass(frozen=True)
class FeatureTensor:
    """Per-unit feature vectors, shape ``frames x bins x c`` with a named component layout."""

    data: np.ndarray
    layout: Tuple[str, ...] = SPATIAL_LAYOUT

    def __post_init__(self) -> None:
        if self.data.ndim != 3:
            raise FeatureError(f"FeatureTensor must be 3-D, got shape {self.data.shape}")
        if self.data.shape[2] != len(self.layout):
            raise FeatureError(
                f"FeatureTensor has {self.data.shape[2]} components, layout names {len(self.layout)}"
            )
        if not np.all(np.isfinite(self.data)):
            raise FeatureError("FeatureTensor contains non-finite entries")
        if "cos_ipd" in self.layout:
            ipd = self.data[..., self.layout.index("cos_ipd")]
            if ipd.size and (ipd.min() < -1.0 or ipd.max() > 1.0):
                raise FeatureError("cosIPD component outside [-1, 1]")

    @property
    def n_frames(self) -> int:
        return self.data.shape[0]

    @property
    def n_bins(self) -> int:
        return self.data.shape[1]

    @property
    def n_units(self) -> int:
        return self.data.shape[0] * self.data.shape[1]

    def component(self, name: str) -> np.ndarray:
        """Return one ``frames x bins`` component by layout name."""
        return self.data[..., self.layout.index(name)]

    def flat(self) -> np.ndarray:
        """Feature rows ``n x c`` in pipeline unit order."""
        return flatten_units(self.data)


@dataclass(frozen=True)
class IndicatorMatrix:
    """Ground-truth one-hot speaker assignment per unit, shape ``n x U``."""

    data: np.ndarray

    def __post_init__(self) -> None:
        if self.data.ndim != 2:
            raise DpclError(f"IndicatorMatrix must be 2-D, got shape {self.data.shape}")
        if self.data.size and not (
            np.all((self.data == 0) | (self.data == 1)) and np.all(self.data.sum(axis=1) == 1)
        ):
            raise DpclError("IndicatorMatrix rows must be one-hot")

    @property
    def speaker_count(self) -> int:
        return self.data.shape[1]

    @property
    def n_units(self) -> int:
        return self.data.shape[0]

    def labels(self) -> np.ndarray:
        """Dominant speaker index per unit."""
        return np.argmax(self.data, axis=1)

    @classmethod
    def from_labels(cls, labels: np.ndarray, speaker_count: int) -> "IndicatorMatrix":
        labels = np.asarray(labels, dtype=np.int64)
        return cls(np.eye(speaker_count, dtype=np.float64)[labels])


@dataclass(frozen=True)
class EmbeddingMatrix:
    """Per-unit embeddings, shape ``n x D`` with unit-norm rows."""

    data: np.ndarray

    def __post_init__(self) -> None:
        if self.data.ndim != 2:
            raise DpclError(f"EmbeddingMatrix must be 2-D, got shape {self.data.shape}")
        if not np.all(np.isfinite(self.data)):
            raise DpclError("EmbeddingMatrix contains non-finite entries")
        if self.data.size:
            norms = np.linalg.norm(self.data, axis=1)
            worst = float(np.max(np.abs(norms - 1.0)))
            if worst > UNIT_NORM_TOLERANCE:
                raise DpclError(f"EmbeddingMatrix rows must be unit-norm (worst deviation {worst:.3g})")

    @property
    def dim(self) -> int:
        return self.data.shape[1]

    @property
    def n_units(self) -> int:
        return self.data.shape[0]


@dataclass(frozen=True)
class MaskSet:
    """``O`` binary masks over the T-F plane that partition it."""

    masks: np.ndarray

    def __post_init__(self) -> None:
        if self.masks.ndim != 3:
            raise MaskError(f"MaskSet must be O x frames x bins, got shape {self.masks.shape}")
        if not np.all((self.masks == 0) | (self.masks == 1)):
            raise MaskError("Masks must be binary")
        if not np.all(self.masks.sum(axis=0) == 1):
            raise MaskError("Masks must partition the T-F plane (sum to one everywhere)")

    @property
    def n_sources(self) -> int:
        return self.masks.shape[0]

    @property
    def grid_shape(self) -> Tuple[int, int]:
        return self.masks.shape[1], self.masks.shape[2]

    def __len__(self) -> int:
        return self.masks.shape[0]

    def __getitem__(self, index: int) -> np.ndarray:
        return self.masks[index]
