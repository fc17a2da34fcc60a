"""
Multilayer Bootstrap Network model types.

A network is a stack of hidden layers, each an ensemble of ``V``
k-centroids clusterings, topped by a PCA projection. Clusterings at the
bottom layer compare raw input vectors by squared Euclidean distance;
upper layers receive the concatenated one-hot codes of the layer below
and compare by inner product (the number of shared active units).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional, Tuple, Union

import numpy as np
from scipy import sparse
from scipy.spatial.distance import cdist

from config.settings import MbnConfig
from core.errors import DimensionMismatchError, MbnError

Metric = Literal["sqeuclidean", "dot"]
LayerInput = Union[np.ndarray, sparse.spmatrix]

ORTHONORMAL_TOLERANCE = 1e-8


@dataclass(frozen=True)
class KCentroidsClustering:
    """``k`` sampled data points restricted to a random feature subset."""

    feature_indices: np.ndarray
    centroids: np.ndarray
    metric: Metric
    input_dim: int

    def __post_init__(self) -> None:
        idx = self.feature_indices
        if idx.ndim != 1 or idx.size == 0:
            raise MbnError("feature_indices must be a non-empty 1-D array")
        if np.unique(idx).size != idx.size:
            raise MbnError("feature_indices must be distinct")
        if idx.min() < 0 or idx.max() >= self.input_dim:
            raise MbnError(f"feature_indices must lie in [0, {self.input_dim})")
        if self.centroids.ndim != 2 or self.centroids.shape[1] != idx.size:
            raise MbnError(
                f"centroids must be k x {idx.size}, got shape {self.centroids.shape}"
            )
        if self.metric not in ("sqeuclidean", "dot"):
            raise MbnError(f"Unknown metric {self.metric!r}")

    @property
    def k(self) -> int:
        return self.centroids.shape[0]

    @property
    def d_hat(self) -> int:
        return self.feature_indices.size

    def scores(self, data: LayerInput) -> np.ndarray:
        """
        Score every centroid for every row of ``data`` (``n x k``).

        Lower is better for ``sqeuclidean``, higher for ``dot``.
        """
        if data.shape[1] != self.input_dim:
            raise DimensionMismatchError(
                f"Input has dimension {data.shape[1]}, clustering expects {self.input_dim}"
            )
        if self.metric == "sqeuclidean":
            dense = data.toarray() if sparse.issparse(data) else np.asarray(data, dtype=np.float64)
            return cdist(dense[:, self.feature_indices], self.centroids, "sqeuclidean")
        if sparse.issparse(data):
            lifted = np.zeros((self.input_dim, self.k), dtype=np.float64)
            lifted[self.feature_indices] = self.centroids.T
            return np.asarray(data @ lifted)
        return np.asarray(data, dtype=np.float64)[:, self.feature_indices] @ self.centroids.T

    def assign(self, data: LayerInput) -> np.ndarray:
        """Index of the winning centroid per row; ties go to the lowest index."""
        scores = self.scores(data)
        if self.metric == "sqeuclidean":
            return np.argmin(scores, axis=1)
        return np.argmax(scores, axis=1)


@dataclass(frozen=True)
class SparseCode:
    """
    One-hot ensemble codes for ``n`` samples.

    ``active[s, v]`` is the index of the active unit of clustering ``v`` for
    sample ``s``; it lies in block ``[v * k, (v + 1) * k)``.
    """

    active: np.ndarray
    block_size: int

    def __post_init__(self) -> None:
        if self.active.ndim != 2:
            raise MbnError(f"SparseCode.active must be n x V, got shape {self.active.shape}")
        offsets = np.arange(self.active.shape[1]) * self.block_size
        local = self.active - offsets
        if local.size and (local.min() < 0 or local.max() >= self.block_size):
            raise MbnError("SparseCode entries must lie in their clustering's block")

    @property
    def n_samples(self) -> int:
        return self.active.shape[0]

    @property
    def n_clusterings(self) -> int:
        return self.active.shape[1]

    @property
    def dim(self) -> int:
        return self.n_clusterings * self.block_size

    def to_csr(self) -> sparse.csr_matrix:
        """Binary ``n x (V * k)`` sparse matrix."""
        n, v = self.active.shape
        indptr = np.arange(0, n * v + 1, v, dtype=np.int64)
        data = np.ones(n * v, dtype=np.float64)
        return sparse.csr_matrix((data, self.active.ravel(), indptr), shape=(n, self.dim))

    def to_dense(self) -> np.ndarray:
        return self.to_csr().toarray()


@dataclass(frozen=True)
class MbnLayer:
    """Ensemble of ``V`` clusterings sharing ``k`` and the metric."""

    clusterings: Tuple[KCentroidsClustering, ...]

    def __post_init__(self) -> None:
        if not self.clusterings:
            raise MbnError("A layer needs at least one clustering")
        first = self.clusterings[0]
        for clustering in self.clusterings[1:]:
            if clustering.k != first.k or clustering.metric != first.metric:
                raise MbnError("All clusterings of a layer must share k and metric")
            if clustering.input_dim != first.input_dim:
                raise MbnError("All clusterings of a layer must share the input dimension")

    @property
    def k(self) -> int:
        return self.clusterings[0].k

    @property
    def metric(self) -> Metric:
        return self.clusterings[0].metric

    @property
    def input_dim(self) -> int:
        return self.clusterings[0].input_dim

    @property
    def output_dim(self) -> int:
        return len(self.clusterings) * self.k


@dataclass(frozen=True)
class PcaResult:
    """PCA output layer: ``components`` is ``output_dim x dim`` with orthonormal rows."""

    mean: np.ndarray
    components: np.ndarray
    explained_variance: np.ndarray
    rank_deficient: bool = False

    @property
    def output_dim(self) -> int:
        return self.components.shape[0]

    def project(self, data: LayerInput) -> np.ndarray:
        """Mean-center and project rows of ``data``."""
        projected = np.asarray(data @ self.components.T)
        return projected - self.mean @ self.components.T


@dataclass(frozen=True)
class MbnModel:
    """A fitted network: hidden layers bottom-up plus the PCA output layer."""

    layers: Tuple[MbnLayer, ...]
    pca: PcaResult
    config: MbnConfig

    def __post_init__(self) -> None:
        if not self.layers:
            raise MbnError("A model needs at least one hidden layer")
        ks = [layer.k for layer in self.layers]
        if any(b >= a for a, b in zip(ks, ks[1:])):
            raise MbnError(f"Layer k values must strictly decrease, got {ks}")
        for lower, upper in zip(self.layers, self.layers[1:]):
            if upper.input_dim != lower.output_dim:
                raise MbnError("Layer input dimension does not match the layer below")
        if self.pca.components.shape[1] != self.layers[-1].output_dim:
            raise MbnError("PCA dimension does not match the top layer")
        check_orthonormal_rows(self.pca.components)

    @property
    def input_dim(self) -> int:
        return self.layers[0].input_dim

    @property
    def k_schedule(self) -> Tuple[int, ...]:
        return tuple(layer.k for layer in self.layers)

    @property
    def n_layers(self) -> int:
        return len(self.layers)

    @property
    def output_dim(self) -> int:
        return self.pca.output_dim


def check_orthonormal_rows(components: np.ndarray, tol: Optional[float] = None) -> None:
    """
    Verify ``components @ components.T`` is the identity on non-zero rows.

    All-zero rows are padding for missing rank and are skipped.
    """
    tol = ORTHONORMAL_TOLERANCE if tol is None else tol
    live = np.linalg.norm(components, axis=1) > 0
    rows = components[live]
    gram = rows @ rows.T
    error = np.max(np.abs(gram - np.eye(rows.shape[0]))) if rows.size else 0.0
    if error > tol:
        raise MbnError(f"PCA components are not orthonormal (max error {error:.3g})")
