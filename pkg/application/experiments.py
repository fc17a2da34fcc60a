"""
Desk-scale experiments on oracle embeddings.

Oracle embeddings put every unit of speaker ``u`` near a fixed direction
and perturb it with Gaussian noise, which is the "noise and small
variations" MBN is meant to remove. These helpers compare k-means on raw
embeddings with k-means on m-vectors, sweep the network depth, and
build the fixed-T60 mixture sets used for ideal-mask and end-to-end runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from config.settings import MbnConfig, PipelineConfig
from core.models import IndicatorMatrix
from domain.dpcl import oracle_embedder
from domain.mbn import fit_transform, plan_k_schedule
from domain.metrics import EvalReport, clustering_accuracy
from domain.separation import apply_masks_and_resynthesize, kmeans, masks_from_labels
from domain.signal import stft
from domain.simulation import ManifestEntry, generate_manifest
from monitoring import get_logger
from utils.seeding import derive_rng, derive_seed

from .pipeline import evaluate, ideal_indicator, simulate

logger = get_logger(__name__)

SWEEP_COLUMNS = ["delta", "k_schedule", "n_layers", "median_accuracy", "raw_median_accuracy"]


@dataclass(frozen=True)
class DenoisingTrial:
    seed: int
    raw_accuracy: float
    mbn_accuracy: float
    n_layers: int


def oracle_points(
    n: int,
    n_speakers: int = 2,
    dim: int = 40,
    sigma: float = 0.5,
    seed: int = 0,
) -> Tuple[np.ndarray, np.ndarray]:
    """Balanced random labels and their oracle embeddings (``n x dim``)."""
    rng = derive_rng(seed, 101)
    labels = rng.permutation(np.arange(n) % n_speakers)
    indicator = IndicatorMatrix.from_labels(labels, n_speakers)
    embeddings = oracle_embedder(indicator, sigma, dim, derive_seed(seed, 102))
    return embeddings.data, labels


def denoising_trial(
    n: int,
    sigma: float,
    seed: int,
    mbn_config: MbnConfig,
    dim: int = 40,
    restarts: int = 10,
    workers: Optional[int] = None,
) -> DenoisingTrial:
    """k-means accuracy on raw embeddings and on m-vectors for one seed."""
    n_speakers = mbn_config.n_classes
    points, labels = oracle_points(n, n_speakers, dim, sigma, seed)
    raw = kmeans(points, n_speakers, restarts, derive_seed(seed, 103), workers=workers)
    config = mbn_config.model_copy(update={"seed": derive_seed(seed, 104)})
    model, m_vectors = fit_transform(points, config, workers)
    refined = kmeans(m_vectors, n_speakers, restarts, derive_seed(seed, 103), workers=workers)
    return DenoisingTrial(
        seed=seed,
        raw_accuracy=clustering_accuracy(raw.labels, labels, n_speakers),
        mbn_accuracy=clustering_accuracy(refined.labels, labels, n_speakers),
        n_layers=model.n_layers,
    )


def denoising_experiment(
    seeds: Iterable[int],
    n: int,
    sigma: float,
    mbn_config: MbnConfig,
    dim: int = 40,
    restarts: int = 10,
    workers: Optional[int] = None,
) -> List[DenoisingTrial]:
    trials = []
    for seed in seeds:
        trial = denoising_trial(n, sigma, seed, mbn_config, dim, restarts, workers)
        logger.info(
            "seed %d: raw accuracy %.4f, MBN accuracy %.4f", seed, trial.raw_accuracy, trial.mbn_accuracy
        )
        trials.append(trial)
    return trials


def depth_sweep(
    deltas: Sequence[float],
    base_config: MbnConfig,
    seeds: Sequence[int],
    n: int = 2000,
    sigma: float = 0.5,
    dim: int = 40,
    restarts: int = 10,
    workers: Optional[int] = None,
) -> List[dict]:
    """
    One row per ``delta``: planned schedule, depth and median accuracies.

    Deep schedules need more samples than their bottom ``k``; ``n`` must
    exceed ``base_config.k1``.
    """
    rows = []
    for delta in deltas:
        config = base_config.model_copy(update={"delta": float(delta)})
        schedule = plan_k_schedule(config.k1, config.delta, config.n_classes)
        trials = denoising_experiment(seeds, n, sigma, config, dim, restarts, workers)
        rows.append(
            {
                "delta": float(delta),
                "k_schedule": ";".join(str(k) for k in schedule),
                "n_layers": len(schedule),
                "median_accuracy": float(np.median([t.mbn_accuracy for t in trials])),
                "raw_median_accuracy": float(np.median([t.raw_accuracy for t in trials])),
            }
        )
        logger.info("delta %.3f: schedule %s", delta, schedule)
    return rows


def fixed_t60_manifest(
    seed: int = 0,
    per_condition: int = 10,
    t60: float = 0.3,
    n_speakers: int = 2,
) -> List[ManifestEntry]:
    """``per_condition`` anechoic mixtures followed by as many at a fixed T60."""
    anechoic = generate_manifest(per_condition, n_speakers, reverberant=False, seed=seed)
    reverberant = [
        ManifestEntry(
            name=entry.name,
            spec=entry.spec.model_copy(update={"t60": t60}),
        )
        for entry in generate_manifest(per_condition, n_speakers, reverberant=True, seed=seed + 1)
    ]
    return anechoic + reverberant


def ideal_mask_report(entry: ManifestEntry, config: PipelineConfig) -> EvalReport:
    """Resynthesize with the ideal binary mask and score it."""
    mixture = simulate(entry, config)
    images = [mixture.reference(j, 0) for j in range(entry.spec.n_sources)]
    mixture_spec = stft(mixture.channels[0], config.stft)
    labels = ideal_indicator(images, config.stft).labels()
    masks = masks_from_labels(labels, mixture_spec.n_frames, mixture_spec.n_bins, entry.spec.n_sources)
    estimates = apply_masks_and_resynthesize(masks, mixture_spec)
    return evaluate(entry.name, estimates, images, mixture.channels[0], masks, labels)
