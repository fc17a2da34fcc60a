"""
Separation and clustering quality scores.

SI-SDR projects the estimate onto the reference and compares the energy of
that target component with the residual. Outputs of a clustering-based
separator come in arbitrary order, so evaluation searches every assignment
of estimates to references (at most 5! = 120 for five speakers).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from sklearn.metrics import normalized_mutual_info_score

from core.errors import MetricsError

SI_SDR_CLAMP_DB = 100.0
MAX_PERMUTATION_SOURCES = 5


@dataclass(frozen=True)
class EvalReport:
    """Scores of one separated mixture."""

    per_speaker_si_sdr: Tuple[float, ...]
    best_permutation: Tuple[int, ...]
    si_sdr_improvement: float
    mixture_si_sdr: Tuple[float, ...] = ()
    mask_accuracy: Optional[float] = None
    nmi: Optional[float] = None
    name: str = ""

    def __post_init__(self) -> None:
        if sorted(self.best_permutation) != list(range(len(self.best_permutation))):
            raise MetricsError(f"best_permutation {self.best_permutation} is not a bijection")
        if self.mask_accuracy is not None and not 0.0 <= self.mask_accuracy <= 1.0:
            raise MetricsError(f"mask_accuracy {self.mask_accuracy} outside [0, 1]")

    @property
    def mean_si_sdr(self) -> float:
        return float(np.mean(self.per_speaker_si_sdr))


def si_sdr(est: np.ndarray, ref: np.ndarray) -> float:
    """
    Scale-invariant SDR in dB, clamped to [-100, 100]. A silent estimate scores -100.

    Raises:
        MetricsError: If lengths differ or the reference is all zero.
    """
    est = np.asarray(est, dtype=np.float64).ravel()
    ref = np.asarray(ref, dtype=np.float64).ravel()
    if est.shape != ref.shape:
        raise MetricsError(f"Estimate has {est.size} samples, reference has {ref.size}")
    ref_energy = float(ref @ ref)
    if ref_energy == 0.0:
        raise MetricsError("Reference signal is all zero")

    target = (float(est @ ref) / ref_energy) * ref
    residual = est - target
    target_energy = float(target @ target)
    residual_energy = float(residual @ residual)
    # A silent estimate has no target and no residual; it scores the floor.
    if target_energy == 0.0:
        return -SI_SDR_CLAMP_DB
    if residual_energy == 0.0:
        return SI_SDR_CLAMP_DB
    value = 10.0 * np.log10(target_energy / residual_energy)
    return float(np.clip(value, -SI_SDR_CLAMP_DB, SI_SDR_CLAMP_DB))


def _check_count(count: int) -> None:
    if count > MAX_PERMUTATION_SOURCES:
        raise MetricsError(
            f"Exhaustive permutation search supports at most {MAX_PERMUTATION_SOURCES} sources, got {count}"
        )
    if count < 1:
        raise MetricsError("At least one source is required")


def permutation_invariant_eval(
    ests: Sequence[np.ndarray],
    refs: Sequence[np.ndarray],
    mixture: np.ndarray,
    name: str = "",
) -> EvalReport:
    """
    Score estimates against references under the best assignment.

    ``best_permutation[o]`` is the estimate matched to reference ``o``. The
    improvement is the mean SI-SDR minus the mean SI-SDR of the mixture
    against every reference.

    Raises:
        MetricsError: If counts or lengths differ, or more than five sources.
    """
    if len(ests) != len(refs):
        raise MetricsError(f"{len(ests)} estimates for {len(refs)} references")
    count = len(refs)
    _check_count(count)

    scores = np.array([[si_sdr(est, ref) for est in ests] for ref in refs])
    best_perm: Tuple[int, ...] = tuple(range(count))
    best_score = -np.inf
    for perm in itertools.permutations(range(count)):
        score = float(np.mean(scores[np.arange(count), perm]))
        if score > best_score:
            best_score, best_perm = score, tuple(perm)

    baseline = tuple(si_sdr(mixture, ref) for ref in refs)
    per_speaker = tuple(float(scores[o, best_perm[o]]) for o in range(count))
    return EvalReport(
        per_speaker_si_sdr=per_speaker,
        best_permutation=best_perm,
        si_sdr_improvement=float(np.mean(per_speaker) - np.mean(baseline)),
        mixture_si_sdr=baseline,
        name=name,
    )


def _check_labels(pred: np.ndarray, true: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    pred = np.asarray(pred).ravel().astype(np.int64)
    true = np.asarray(true).ravel().astype(np.int64)
    if pred.shape != true.shape:
        raise MetricsError(f"Label vectors differ in length: {pred.size} vs {true.size}")
    return pred, true


def clustering_accuracy(pred_labels: np.ndarray, true_labels: np.ndarray, n_classes: int) -> float:
    """
    Fraction of units labelled correctly under the best relabelling of ``pred``.

    Raises:
        MetricsError: If lengths differ, labels fall outside ``[0, n_classes)``
            or ``n_classes > 5``.
    """
    pred, true = _check_labels(pred_labels, true_labels)
    _check_count(n_classes)
    if pred.size == 0:
        raise MetricsError("Cannot score an empty labelling")
    for labels in (pred, true):
        if labels.min() < 0 or labels.max() >= n_classes:
            raise MetricsError(f"Labels must lie in [0, {n_classes})")

    confusion = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(confusion, (pred, true), 1)
    best = max(
        int(confusion[np.arange(n_classes), perm].sum())
        for perm in itertools.permutations(range(n_classes))
    )
    return best / pred.size


def nmi(pred_labels: np.ndarray, true_labels: np.ndarray) -> float:
    """Normalized mutual information (arithmetic normalization, natural logs)."""
    pred, true = _check_labels(pred_labels, true_labels)
    if pred.size == 0:
        raise MetricsError("Cannot score an empty labelling")
    return float(normalized_mutual_info_score(true, pred, average_method="arithmetic"))
