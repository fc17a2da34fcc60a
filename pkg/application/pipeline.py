"""
Pipeline orchestration.

Each mixture of a manifest lives in its own directory under ``--out-dir``:

    <out-dir>/<mixture>/mix.wav          2-channel mixture
    <out-dir>/<mixture>/ref<j>.wav       2-channel image of source j
    <out-dir>/<mixture>/features.mbnt    frames x bins x c features
    <out-dir>/<mixture>/embeddings.mbnt  n x D embeddings
    <out-dir>/<mixture>/masks.mbnt       O x frames x bins binary masks
    <out-dir>/<mixture>/mvectors.mbnt    n x m vectors clustered by k-means
    <out-dir>/<mixture>/labels.mbnt      n cluster labels
    <out-dir>/<mixture>/est<o>.wav       resynthesized source o

Stages read what the previous stage wrote, so any of them can be re-run on
its own. ``run_mixture`` chains the same steps in memory for experiments.
Mixtures are processed concurrently; every random draw is seeded from the
configuration seed and the mixture's own seed, never from its position.
"""

from __future__ import annotations

import glob
import os
import re
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, TypeVar

import numpy as np

from config.settings import PipelineConfig, StftConfig
from core.errors import MbnsepError, SimulationError
from core.models import (
    SINGLE_CHANNEL_LAYOUT,
    SPATIAL_LAYOUT,
    EmbeddingMatrix,
    FeatureTensor,
    IndicatorMatrix,
    MaskSet,
)
from domain.dpcl import OracleEmbedder, PrecomputedEmbedder, SpatialFeatureEmbedder, indicator_matrix
from domain.features import assemble_features, assemble_log_magnitude_features
from domain.metrics import EvalReport, clustering_accuracy, nmi, permutation_invariant_eval
from domain.separation import SeparationResult, apply_masks_and_resynthesize, separate
from domain.signal import stft
from domain.simulation import (
    ManifestEntry,
    Mixture,
    is_synth_reference,
    mix,
    parse_synth_reference,
    synth_source,
)
from infrastructure.audio import read_wav, write_wav
from infrastructure.storage import load_embeddings, read_tensor, save_embeddings, write_tensor
from monitoring import get_logger, traceable
from utils.parallel import ordered_map
from utils.seeding import derive_seed

from .reporting import write_eval_outputs

logger = get_logger(__name__)

T = TypeVar("T")

# Per-component keys mixed into every mixture seed.
_EMBEDDER_KEY = 1
_MBN_KEY = 2
_KMEANS_KEY = 3


@dataclass(frozen=True)
class MixtureOutcome:
    """In-memory result of the full chain on one mixture."""

    name: str
    report: EvalReport
    separation: SeparationResult
    estimates: List[np.ndarray]


def mixture_dir(out_dir: str, name: str) -> str:
    return os.path.join(out_dir, name)


def component_seed(root: int, entry: ManifestEntry, key: int) -> int:
    """Seed of one random component for one mixture."""
    return derive_seed(root, entry.spec.seed, key)


# --------------------------------------------------------------------------- #
# In-memory steps
# --------------------------------------------------------------------------- #


def load_source(reference: str, config: PipelineConfig) -> np.ndarray:
    """Resolve a manifest source: ``synth:<seed>`` or a mono WAV at the configured rate."""
    rate = config.simulation.sample_rate
    if is_synth_reference(reference):
        return synth_source(parse_synth_reference(reference), config.simulation.synth_duration, rate)
    samples = read_wav(reference, expected_rate=rate)
    if samples.shape[1] != 1:
        raise SimulationError(f"{reference}: source files must be mono, got {samples.shape[1]} channels")
    return samples[:, 0]


def simulate(entry: ManifestEntry, config: PipelineConfig) -> Mixture:
    waves = [load_source(reference, config) for reference in entry.spec.sources]
    return mix(entry.spec, waves, sample_rate=config.simulation.sample_rate)


def extract_features(channels: np.ndarray, config: PipelineConfig) -> FeatureTensor:
    """Features of a ``2 x N`` (or ``1 x N``) recording per ``config.features``."""
    spec1 = stft(channels[0], config.stft)
    if not config.features.spatial:
        return assemble_log_magnitude_features(spec1, config.features.floor)
    if channels.shape[0] < 2:
        raise SimulationError("Spatial features need a 2-channel recording")
    return assemble_features(spec1, stft(channels[1], config.stft), config.features.floor)


def ideal_indicator(reference_images: Sequence[np.ndarray], stft_config: StftConfig) -> IndicatorMatrix:
    """Ground-truth dominant source per unit from the channel-1 source images."""
    return indicator_matrix([np.abs(stft(image, stft_config).data) for image in reference_images])


def build_embedder(
    config: PipelineConfig,
    entry: ManifestEntry,
    indicator: Optional[IndicatorMatrix] = None,
    oracle: bool = False,
):
    """Oracle embedder (needs ``indicator``) or the ground-truth-free spatial embedder."""
    seed = component_seed(config.embedder.seed, entry, _EMBEDDER_KEY)
    if oracle or config.embedder.kind == "oracle":
        if indicator is None:
            raise SimulationError(f"{entry.name}: the oracle embedder needs reference images")
        return OracleEmbedder(indicator, config.embedder.sigma, config.embedder.dim, seed)
    return SpatialFeatureEmbedder(dim=config.embedder.dim, seed=seed)


def separate_features(
    features: FeatureTensor,
    embedder,
    config: PipelineConfig,
    entry: ManifestEntry,
    workers: Optional[int] = None,
) -> SeparationResult:
    sep = config.separation
    mbn_config = config.mbn.model_copy(
        update={"seed": component_seed(config.mbn.seed, entry, _MBN_KEY)}
    )
    return separate(
        features,
        embedder,
        mbn_config,
        sep.n_sources,
        restarts=sep.restarts,
        seed=component_seed(sep.seed, entry, _KMEANS_KEY),
        use_mbn=sep.use_mbn,
        vad=sep.vad,
        vad_threshold_db=sep.vad_threshold_db,
        max_iter=sep.max_iter,
        workers=workers,
    )


def evaluate(
    name: str,
    estimates: Sequence[np.ndarray],
    reference_images: Sequence[np.ndarray],
    mixture_channel: np.ndarray,
    masks: Optional[MaskSet] = None,
    true_labels: Optional[np.ndarray] = None,
) -> EvalReport:
    """Permutation-invariant SI-SDR plus, when labels are known, mask accuracy and NMI."""
    report = permutation_invariant_eval(estimates, reference_images, mixture_channel, name=name)
    if masks is None or true_labels is None:
        return report
    predicted = np.argmax(masks.masks, axis=0).reshape(-1)
    return EvalReport(
        per_speaker_si_sdr=report.per_speaker_si_sdr,
        best_permutation=report.best_permutation,
        si_sdr_improvement=report.si_sdr_improvement,
        mixture_si_sdr=report.mixture_si_sdr,
        mask_accuracy=clustering_accuracy(predicted, true_labels, masks.n_sources),
        nmi=nmi(predicted, true_labels),
        name=name,
    )


@traceable(name="run_mixture", run_type="chain")
def run_mixture(
    entry: ManifestEntry,
    config: PipelineConfig,
    oracle: bool = False,
    workers: Optional[int] = None,
) -> MixtureOutcome:
    """Simulate, featurize, embed, separate and evaluate one mixture in memory."""
    _check_source_count(entry, config)
    mixture = simulate(entry, config)
    images = [mixture.reference(j, 0) for j in range(entry.spec.n_sources)]
    features = extract_features(mixture.channels, config)
    indicator = ideal_indicator(images, config.stft)
    embedder = build_embedder(config, entry, indicator, oracle)
    result = separate_features(features, embedder, config, entry, workers)
    estimates = apply_masks_and_resynthesize(result.masks, stft(mixture.channels[0], config.stft))
    report = evaluate(entry.name, estimates, images, mixture.channels[0], result.masks, indicator.labels())
    return MixtureOutcome(name=entry.name, report=report, separation=result, estimates=estimates)


def run_manifest(
    entries: Sequence[ManifestEntry],
    config: PipelineConfig,
    oracle: bool = False,
    workers: Optional[int] = None,
) -> List[MixtureOutcome]:
    """``run_mixture`` over a manifest, in manifest order."""
    return for_each_mixture(lambda entry, inner: run_mixture(entry, config, oracle, inner), entries, workers)


# --------------------------------------------------------------------------- #
# File-based stages
# --------------------------------------------------------------------------- #


def for_each_mixture(
    func: Callable[[ManifestEntry, Optional[int]], T],
    entries: Sequence[ManifestEntry],
    workers: Optional[int] = None,
) -> List[T]:
    """
    Apply ``func(entry, inner_workers)`` to every mixture concurrently.

    Inner work runs single-threaded when several mixtures share the pool.
    Errors are re-raised with the mixture name prefixed.
    """
    inner = 1 if len(entries) > 1 else workers

    def _run(entry: ManifestEntry) -> T:
        try:
            return func(entry, inner)
        except MbnsepError as exc:
            raise type(exc)(f"[{entry.name}] {exc}") from exc

    return ordered_map(_run, entries, workers)


def _check_source_count(entry: ManifestEntry, config: PipelineConfig) -> None:
    if entry.spec.n_sources != config.separation.n_sources:
        raise SimulationError(
            f"{entry.name} has {entry.spec.n_sources} sources but separation.n_sources is "
            f"{config.separation.n_sources}"
        )


def _reference_paths(directory: str) -> List[str]:
    paths = glob.glob(os.path.join(directory, "ref*.wav"))
    return sorted(paths, key=lambda p: int(re.findall(r"ref(\d+)\.wav$", p)[0]))


def _read_channels(path: str, config: PipelineConfig) -> np.ndarray:
    return read_wav(path, expected_rate=config.stft.sample_rate).T


def stage_mix(entry: ManifestEntry, config: PipelineConfig, out_dir: str) -> str:
    directory = mixture_dir(out_dir, entry.name)
    mixture = simulate(entry, config)
    rate = config.simulation.sample_rate
    write_wav(os.path.join(directory, "mix.wav"), mixture.channels.T, rate)
    for j in range(entry.spec.n_sources):
        write_wav(os.path.join(directory, f"ref{j}.wav"), mixture.references[j].T, rate)
    logger.info("%s: mixed %d sources (t60=%.3f s)", entry.name, entry.spec.n_sources, entry.spec.t60)
    return directory


def stage_features(entry: ManifestEntry, config: PipelineConfig, out_dir: str) -> str:
    directory = mixture_dir(out_dir, entry.name)
    channels = _read_channels(os.path.join(directory, "mix.wav"), config)
    features = extract_features(channels, config)
    path = os.path.join(directory, "features.mbnt")
    write_tensor(path, features.data)
    return path


def _load_features(directory: str) -> FeatureTensor:
    data = read_tensor(os.path.join(directory, "features.mbnt"), expected_rank=3).astype(np.float64)
    layout = SPATIAL_LAYOUT if data.shape[2] == len(SPATIAL_LAYOUT) else SINGLE_CHANNEL_LAYOUT
    return FeatureTensor(data=data, layout=layout)


def _load_reference_images(directory: str, config: PipelineConfig) -> List[np.ndarray]:
    paths = _reference_paths(directory)
    if not paths:
        raise SimulationError(f"{directory}: no ref<j>.wav files")
    return [_read_channels(path, config)[0] for path in paths]


def stage_embed(entry: ManifestEntry, config: PipelineConfig, out_dir: str, oracle: bool = False) -> str:
    directory = mixture_dir(out_dir, entry.name)
    features = _load_features(directory)
    indicator = None
    if oracle or config.embedder.kind == "oracle":
        indicator = ideal_indicator(_load_reference_images(directory, config), config.stft)
    embeddings = build_embedder(config, entry, indicator, oracle).embed(features)
    path = os.path.join(directory, "embeddings.mbnt")
    save_embeddings(embeddings, path)
    return path


def stage_separate(
    entry: ManifestEntry,
    config: PipelineConfig,
    out_dir: str,
    workers: Optional[int] = None,
) -> SeparationResult:
    directory = mixture_dir(out_dir, entry.name)
    _check_source_count(entry, config)
    features = _load_features(directory)
    # float32 storage: renormalize to restore unit rows exactly.
    raw = load_embeddings(os.path.join(directory, "embeddings.mbnt")).data
    raw /= np.linalg.norm(raw, axis=1, keepdims=True)
    embedder = PrecomputedEmbedder(EmbeddingMatrix(raw))
    result = separate_features(features, embedder, config, entry, workers)

    channels = _read_channels(os.path.join(directory, "mix.wav"), config)
    estimates = apply_masks_and_resynthesize(result.masks, stft(channels[0], config.stft))
    write_tensor(os.path.join(directory, "masks.mbnt"), result.masks.masks)
    write_tensor(os.path.join(directory, "mvectors.mbnt"), result.m_vectors)
    write_tensor(os.path.join(directory, "labels.mbnt"), result.labels)
    for o, estimate in enumerate(estimates):
        write_wav(os.path.join(directory, f"est{o}.wav"), estimate, config.stft.sample_rate)
    return result


def stage_eval(entry: ManifestEntry, config: PipelineConfig, out_dir: str) -> EvalReport:
    directory = mixture_dir(out_dir, entry.name)
    channels = _read_channels(os.path.join(directory, "mix.wav"), config)
    images = _load_reference_images(directory, config)
    estimates = [
        _read_channels(os.path.join(directory, f"est{o}.wav"), config)[0] for o in range(len(images))
    ]
    masks_path = os.path.join(directory, "masks.mbnt")
    masks = true_labels = None
    if os.path.exists(masks_path):
        masks = MaskSet(read_tensor(masks_path, expected_rank=3).astype(np.float64))
        true_labels = ideal_indicator(images, config.stft).labels()
    return evaluate(entry.name, estimates, images, channels[0], masks, true_labels)


def evaluate_manifest(
    entries: Sequence[ManifestEntry],
    config: PipelineConfig,
    out_dir: str,
    workers: Optional[int] = None,
) -> List[EvalReport]:
    """Evaluate every mixture and write ``eval.csv`` plus ``report.txt``."""
    reports = for_each_mixture(lambda entry, _: stage_eval(entry, config, out_dir), entries, workers)
    sep = config.separation
    # Embeddings come from disk; the embed stage alone knows the sigma that made them.
    write_eval_outputs(
        reports,
        out_dir,
        settings={"seed": config.seed, "use_mbn": sep.use_mbn, "vad": sep.vad},
    )
    return reports
