"""
k-means clustering of m-vectors.

k-means++ seeding followed by Lloyd iterations until the assignment stops
changing (or ``max_iter``). A cluster left empty by an update takes over
the point farthest from its centroid. The best of ``restarts`` runs by
inertia wins; restarts draw from independent streams ``(seed, restart)``
and ties go to the lowest restart index, so the outcome does not depend on
how many restarts run concurrently.

The Lloyd loop is written out rather than taken from
``sklearn.cluster.KMeans``: every run keeps its per-iteration inertia
history, which sklearn does not expose, so the non-increasing inertia of
each Lloyd step can be checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.spatial.distance import cdist

from core.errors import KMeansError
from monitoring import get_logger
from utils.parallel import ordered_map
from utils.seeding import derive_rng

logger = get_logger(__name__)

DEFAULT_MAX_ITER = 300


@dataclass(frozen=True)
class KMeansResult:
    """Outcome of the winning restart."""

    labels: np.ndarray
    centroids: np.ndarray
    inertia: float
    inertia_history: Tuple[float, ...]
    n_iter: int
    restart: int = 0

    @property
    def n_clusters(self) -> int:
        return self.centroids.shape[0]


def kmeans_plus_plus(points: np.ndarray, n_clusters: int, rng: np.random.Generator) -> np.ndarray:
    """Pick ``n_clusters`` initial centroids by D^2 sampling."""
    n = points.shape[0]
    chosen = [int(rng.integers(n))]
    closest = cdist(points, points[chosen], "sqeuclidean").ravel()
    for _ in range(1, n_clusters):
        total = closest.sum()
        if total > 0:
            index = int(rng.choice(n, p=closest / total))
        else:
            # Every point coincides with a chosen centroid.
            remaining = np.setdiff1d(np.arange(n), chosen)
            index = int(rng.choice(remaining))
        chosen.append(index)
        closest = np.minimum(closest, cdist(points, points[[index]], "sqeuclidean").ravel())
    return points[chosen].copy()


def _update_centroids(
    points: np.ndarray,
    labels: np.ndarray,
    distances: np.ndarray,
    n_clusters: int,
) -> Tuple[np.ndarray, np.ndarray]:
    labels = labels.copy()
    counts = np.bincount(labels, minlength=n_clusters)
    point_cost = distances[np.arange(points.shape[0]), labels]
    for empty in np.flatnonzero(counts == 0):
        # Only steal from clusters that keep at least one member.
        candidates = np.flatnonzero(counts[labels] > 1)
        donor = candidates[np.argmax(point_cost[candidates])]
        counts[labels[donor]] -= 1
        labels[donor] = empty
        counts[empty] = 1
        point_cost[donor] = 0.0

    centroids = np.zeros((n_clusters, points.shape[1]), dtype=np.float64)
    np.add.at(centroids, labels, points)
    centroids /= counts[:, np.newaxis]
    return centroids, labels


def lloyd(
    points: np.ndarray,
    initial_centroids: np.ndarray,
    max_iter: int = DEFAULT_MAX_ITER,
) -> KMeansResult:
    """
    Run Lloyd iterations from the given centroids.

    ``inertia_history`` holds the inertia after every assignment step and
    never increases.
    """
    n_clusters = initial_centroids.shape[0]
    centroids = np.asarray(initial_centroids, dtype=np.float64)
    labels: Optional[np.ndarray] = None
    history = []
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        distances = cdist(points, centroids, "sqeuclidean")
        assigned = np.argmin(distances, axis=1)
        history.append(float(distances[np.arange(points.shape[0]), assigned].sum()))
        if labels is not None and np.array_equal(assigned, labels):
            break
        centroids, labels = _update_centroids(points, assigned, distances, n_clusters)

    assert labels is not None
    inertia = float(((points - centroids[labels]) ** 2).sum())
    return KMeansResult(
        labels=labels,
        centroids=centroids,
        inertia=inertia,
        inertia_history=tuple(history),
        n_iter=n_iter,
    )


def kmeans(
    points: np.ndarray,
    n_clusters: int,
    restarts: int = 10,
    seed: int = 0,
    max_iter: int = DEFAULT_MAX_ITER,
    workers: Optional[int] = None,
) -> KMeansResult:
    """
    Cluster rows of ``points`` into ``n_clusters`` groups.

    Args:
        points: ``n x dim`` data.
        n_clusters: Number of clusters ``O``.
        restarts: Independent k-means++ initializations.
        seed: Root of the per-restart streams.
        max_iter: Lloyd iteration cap per restart.
        workers: Cap on concurrent restarts.

    Returns:
        The restart with the lowest inertia (lowest index on ties).

    Raises:
        KMeansError: If ``n < n_clusters`` or the arguments are out of range.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points[:, np.newaxis]
    if points.ndim != 2:
        raise KMeansError(f"kmeans expects an n x dim matrix, got shape {points.shape}")
    if n_clusters < 1:
        raise KMeansError(f"n_clusters must be positive, got {n_clusters}")
    if points.shape[0] < n_clusters:
        raise KMeansError(f"Cannot form {n_clusters} clusters from {points.shape[0]} points")
    if restarts < 1 or max_iter < 1:
        raise KMeansError("restarts and max_iter must be positive")
    if not np.all(np.isfinite(points)):
        raise KMeansError("kmeans input contains non-finite values")

    def _run(restart: int) -> KMeansResult:
        rng = derive_rng(seed, restart)
        result = lloyd(points, kmeans_plus_plus(points, n_clusters, rng), max_iter)
        return KMeansResult(
            labels=result.labels,
            centroids=result.centroids,
            inertia=result.inertia,
            inertia_history=result.inertia_history,
            n_iter=result.n_iter,
            restart=restart,
        )

    runs = ordered_map(_run, range(restarts), workers)
    best = runs[int(np.argmin([run.inertia for run in runs]))]
    logger.debug(
        "k-means: best restart %d of %d, inertia %.6g after %d iterations",
        best.restart,
        restarts,
        best.inertia,
        best.n_iter,
    )
    return best


def assign_to_centroids(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """Nearest-centroid labels (lowest index on ties)."""
    points = np.asarray(points, dtype=np.float64)
    if points.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    return np.argmin(cdist(points, centroids, "sqeuclidean"), axis=1)
