"""
Mask estimation and resynthesis.

The test-stage chain: embed every T-F unit, optionally hold out silent
units, map embeddings to m-vectors with a freshly fitted MBN, cluster the
m-vectors with k-means into ``O`` groups, and turn cluster labels into
binary masks over the T-F plane. Masks are applied to the reference
channel (channel 1) and inverted with the ISTFT.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from config.settings import MbnConfig
from core.errors import MaskError, MbnError
from core.models import FeatureTensor, MaskSet, MbnModel, Spectrogram, flatten_units, unflatten_units
from domain.dpcl import Embedder
from domain.mbn import fit as mbn_fit
from domain.mbn import transform as mbn_transform
from domain.signal import istft
from monitoring import get_logger, traceable

from .kmeans import DEFAULT_MAX_ITER, KMeansResult, assign_to_centroids, kmeans

logger = get_logger(__name__)

DEFAULT_VAD_THRESHOLD_DB = 40.0


@dataclass(frozen=True)
class SeparationResult:
    """Masks plus the intermediate representations behind them."""

    masks: MaskSet
    labels: np.ndarray
    embeddings: np.ndarray
    m_vectors: np.ndarray
    retained: np.ndarray
    clustering: KMeansResult
    model: Optional[MbnModel] = None

    @property
    def n_retained(self) -> int:
        return int(np.count_nonzero(self.retained))


def masks_from_labels(labels: np.ndarray, frames: int, bins: int, n_sources: int) -> MaskSet:
    """
    One binary mask per source: mask ``o`` is 1 exactly where the label is ``o``.

    Raises:
        MaskError: If a label is outside ``[0, n_sources)`` or the count is not
            ``frames * bins``.
    """
    labels = np.asarray(labels)
    if labels.ndim != 1 or labels.shape[0] != frames * bins:
        raise MaskError(f"Expected {frames * bins} labels for a {frames} x {bins} grid, got {labels.shape}")
    if labels.size and (labels.min() < 0 or labels.max() >= n_sources):
        raise MaskError(f"Labels must lie in [0, {n_sources})")
    grid = unflatten_units(labels.astype(np.int64), frames, bins)
    masks = (grid[np.newaxis, :, :] == np.arange(n_sources)[:, np.newaxis, np.newaxis]).astype(np.float64)
    return MaskSet(masks)


def labels_from_masks(maskset: MaskSet) -> np.ndarray:
    """Inverse of ``masks_from_labels``: the winning source per unit, row-major."""
    return flatten_units(np.argmax(maskset.masks, axis=0)).astype(np.int64)


def apply_masks_and_resynthesize(maskset: MaskSet, mixture_spec: Spectrogram) -> List[np.ndarray]:
    """
    Mask the reference-channel spectrogram per source and invert it.

    Raises:
        MaskError: If the mask grid differs from the spectrogram shape.
    """
    if maskset.grid_shape != mixture_spec.shape:
        raise MaskError(
            f"Mask grid {maskset.grid_shape} does not match spectrogram {mixture_spec.shape}"
        )
    return [istft(mixture_spec.with_data(mixture_spec.data * mask)) for mask in maskset.masks]


def activity_mask(features: FeatureTensor, threshold_db: float = DEFAULT_VAD_THRESHOLD_DB) -> np.ndarray:
    """
    Units whose channel-1 log-magnitude is within ``threshold_db`` of the maximum.

    Log-magnitudes are natural logs, so the cut sits ``ln(10 ** (threshold_db / 20))``
    below the loudest unit.
    """
    log_mag = flatten_units(features.component("log_mag_1"))
    cut = log_mag.max() - (threshold_db / 20.0) * math.log(10.0)
    return log_mag >= cut


@traceable(name="separate", run_type="chain")
def separate(
    features: FeatureTensor,
    embedder: Embedder,
    mbn_config: MbnConfig,
    n_sources: int,
    restarts: int = 10,
    seed: int = 0,
    use_mbn: bool = True,
    vad: bool = True,
    vad_threshold_db: float = DEFAULT_VAD_THRESHOLD_DB,
    max_iter: int = DEFAULT_MAX_ITER,
    workers: Optional[int] = None,
) -> SeparationResult:
    """
    Estimate ``n_sources`` binary masks for one mixture.

    Args:
        features: Per-unit features of the mixture.
        embedder: Produces unit-norm embeddings from the features.
        mbn_config: MBN hyperparameters (``n_classes`` must equal ``n_sources``).
        n_sources: Number of speakers ``O``.
        restarts: k-means restarts.
        seed: Root seed for k-means.
        use_mbn: If False, k-means runs on the raw embeddings.
        vad: Hold out units more than ``vad_threshold_db`` below the loudest one.
        vad_threshold_db: Silence cut in dB.
        max_iter: Lloyd iteration cap.
        workers: Cap on concurrent work.

    Returns:
        ``SeparationResult`` whose ``masks`` partition the T-F plane.

    Raises:
        MbnError: If ``mbn_config.n_classes`` differs from ``n_sources``.
    """
    if use_mbn and mbn_config.n_classes != n_sources:
        raise MbnError(
            f"mbn n_classes ({mbn_config.n_classes}) must equal the source count ({n_sources})"
        )
    embeddings = embedder.embed(features).data
    n_units = embeddings.shape[0]

    minimum = max(n_sources, mbn_config.k1 + 1) if use_mbn else n_sources
    retained = activity_mask(features, vad_threshold_db) if vad else np.ones(n_units, dtype=bool)
    if np.count_nonzero(retained) < minimum:
        logger.warning(
            "Only %d active units (need %d); clustering all %d units",
            int(np.count_nonzero(retained)),
            minimum,
            n_units,
        )
        retained = np.ones(n_units, dtype=bool)
    logger.info(
        "Separation: %d units retained, %d held out", int(retained.sum()), int((~retained).sum())
    )

    model: Optional[MbnModel] = None
    if use_mbn:
        model = mbn_fit(embeddings[retained], mbn_config, workers)
        m_vectors = mbn_transform(model, embeddings, workers)
    else:
        m_vectors = embeddings

    clustering = kmeans(m_vectors[retained], n_sources, restarts, seed, max_iter, workers)
    labels = np.empty(n_units, dtype=np.int64)
    labels[retained] = clustering.labels
    labels[~retained] = assign_to_centroids(m_vectors[~retained], clustering.centroids)

    masks = masks_from_labels(labels, features.n_frames, features.n_bins, n_sources)
    return SeparationResult(
        masks=masks,
        labels=labels,
        embeddings=embeddings,
        m_vectors=m_vectors,
        retained=retained,
        clustering=clustering,
        model=model,
    )
