"""
Embedders: FeatureTensor -> EmbeddingMatrix with unit-norm rows.

The trained recurrent embedder of the original system is replaced by an
interface with three implementations:

- ``OracleEmbedder`` maps each unit's ground-truth speaker to a fixed
  orthonormal direction and adds isotropic Gaussian noise, giving
  embeddings with a controllable amount of "noise and small variations".
- ``SpatialFeatureEmbedder`` needs no ground truth: it standardizes the
  per-unit features and lifts them with a fixed random-Fourier map.
- ``PrecomputedEmbedder`` serves a matrix loaded from disk.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, runtime_checkable

import numpy as np

from core.errors import DpclError
from core.models import EmbeddingMatrix, FeatureTensor, IndicatorMatrix
from utils.seeding import derive_rng

_NORM_FLOOR = 1e-12


@runtime_checkable
class Embedder(Protocol):
    """Maps a feature tensor to one unit-norm embedding row per T-F unit."""

    def embed(self, features: FeatureTensor) -> EmbeddingMatrix:
        ...


def normalize_rows(matrix: np.ndarray) -> np.ndarray:
    """Scale every row to unit Euclidean norm."""
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    return matrix / np.maximum(norms, _NORM_FLOOR)


def oracle_embedder(
    indicator: IndicatorMatrix,
    noise_sigma: float = 0.0,
    dim: int = 40,
    seed: int = 0,
) -> EmbeddingMatrix:
    """
    Produce oracle embeddings from a ground-truth indicator matrix.

    Each one-hot row is mapped through a seeded ``U x D`` matrix with
    orthonormal rows, isotropic Gaussian noise of scale ``noise_sigma`` is
    added, and rows are re-normalized.

    Args:
        indicator: ``n x U`` ground truth.
        noise_sigma: Standard deviation of the additive noise (>= 0).
        dim: Embedding dimension ``D`` (>= U).
        seed: Seed for both the orthonormal map and the noise.

    Returns:
        ``n x D`` embedding matrix with unit-norm rows.

    Raises:
        DpclError: If ``dim < U`` or ``noise_sigma < 0``.
    """
    n_speakers = indicator.speaker_count
    if dim < n_speakers:
        raise DpclError(f"Embedding dimension {dim} is smaller than the speaker count {n_speakers}")
    if noise_sigma < 0:
        raise DpclError(f"noise_sigma must be non-negative, got {noise_sigma}")

    map_rng = derive_rng(seed, 0)
    q, _ = np.linalg.qr(map_rng.standard_normal((dim, n_speakers)))
    projection = q.T  # U x D, orthonormal rows

    clean = indicator.data @ projection
    if noise_sigma > 0:
        noise_rng = derive_rng(seed, 1)
        clean = clean + noise_sigma * noise_rng.standard_normal(clean.shape)
    return EmbeddingMatrix(normalize_rows(clean))


@dataclass(frozen=True)
class OracleEmbedder:
    """Embedder backed by ground truth; see ``oracle_embedder``."""

    indicator: IndicatorMatrix
    noise_sigma: float = 0.0
    dim: int = 40
    seed: int = 0

    def embed(self, features: FeatureTensor) -> EmbeddingMatrix:
        if features.n_units != self.indicator.n_units:
            raise DpclError(
                f"Feature tensor has {features.n_units} units, indicator has {self.indicator.n_units}"
            )
        return oracle_embedder(self.indicator, self.noise_sigma, self.dim, self.seed)


@dataclass(frozen=True)
class SpatialFeatureEmbedder:
    """
    Ground-truth-free embedder.

    Features are standardized per component over the utterance, then mapped
    through ``cos(z W + b)`` with a seeded Gaussian ``W`` of scale
    ``1 / bandwidth`` and uniform phases ``b``.
    """

    dim: int = 40
    bandwidth: float = 1.0
    seed: int = 0

    def embed(self, features: FeatureTensor) -> EmbeddingMatrix:
        if self.dim < 1:
            raise DpclError(f"Embedding dimension must be positive, got {self.dim}")
        if self.bandwidth <= 0:
            raise DpclError(f"bandwidth must be positive, got {self.bandwidth}")
        z = features.flat().astype(np.float64)
        std = z.std(axis=0)
        z = (z - z.mean(axis=0)) / np.where(std > _NORM_FLOOR, std, 1.0)

        rng = derive_rng(self.seed, 2)
        weights = rng.standard_normal((z.shape[1], self.dim)) / self.bandwidth
        phases = rng.uniform(0.0, 2.0 * np.pi, size=self.dim)
        return EmbeddingMatrix(normalize_rows(np.cos(z @ weights + phases)))


@dataclass(frozen=True)
class PrecomputedEmbedder:
    """Serves embeddings computed earlier (e.g. loaded from a tensor file)."""

    embeddings: EmbeddingMatrix

    def embed(self, features: FeatureTensor) -> EmbeddingMatrix:
        if features.n_units != self.embeddings.n_units:
            raise DpclError(
                f"Feature tensor has {features.n_units} units, embeddings have "
                f"{self.embeddings.n_units} rows"
            )
        return self.embeddings
