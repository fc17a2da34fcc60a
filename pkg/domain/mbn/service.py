"""
Multilayer Bootstrap Networks.

MBN is built layer by layer from the bottom up as a gradually narrowed
network. Every hidden layer holds ``V`` independent k-centroids
clusterings, each trained by

1. random sampling of features: ``d_hat = max(1, round(a * d))`` input
   dimensions drawn without replacement;
2. random sampling of data: ``k`` samples drawn without replacement serve
   as centroids;
3. one-nearest-neighbour encoding: an input is represented by the one-hot
   indicator of its nearest centroid.

The ``V`` one-hot vectors of a layer are concatenated and fed to the layer
above. ``k`` shrinks by a factor ``delta`` per layer until it would no
longer exceed ``ceil(1.5 * n_classes)``. A PCA output layer turns the top
codes into m-vectors.

Every clustering draws from its own stream derived from
``(seed, layer, clustering)``, so models are identical for any worker count.
"""

from __future__ import annotations

import math
from typing import List, Optional, Union

import numpy as np
from scipy import sparse

from config.settings import MbnConfig
from core.errors import DimensionMismatchError, InsufficientDataError, MbnError
from core.models import KCentroidsClustering, MbnLayer, MbnModel, Metric, SparseCode
from monitoring import get_logger, traceable
from utils.parallel import ordered_map
from utils.seeding import derive_rng

from .pca import pca_fit

logger = get_logger(__name__)

LayerInput = Union[np.ndarray, sparse.spmatrix, SparseCode]

# Guards floor() against products like 0.29 * 100 = 28.999999999999996.
_FLOOR_EPS = 1e-9


def minimum_top_k(n_classes: int) -> int:
    """Smallest admissible k at the top layer: ``ceil(1.5 * n_classes)``."""
    return math.ceil(1.5 * n_classes)


def plan_k_schedule(k1: int, delta: float, n_classes: int) -> List[int]:
    """
    Plan the per-layer ``k`` values.

    ``schedule[0] = k1``; ``schedule[l + 1] = floor(delta * schedule[l])`` is
    appended while it exceeds ``ceil(1.5 * n_classes)``.

    Raises:
        MbnError: If ``k1 < ceil(1.5 * n_classes)`` or ``delta`` is outside [0, 1).
    """
    if not 0.0 <= delta < 1.0:
        raise MbnError(f"delta must lie in [0, 1), got {delta}")
    if n_classes < 1:
        raise MbnError(f"n_classes must be positive, got {n_classes}")
    floor_k = minimum_top_k(n_classes)
    if k1 < floor_k:
        raise MbnError(f"k1 ({k1}) is below ceil(1.5 * n_classes) = {floor_k}")

    schedule = [int(k1)]
    while True:
        nxt = int(math.floor(delta * schedule[-1] + _FLOOR_EPS))
        if nxt <= floor_k:
            return schedule
        schedule.append(nxt)


def sampled_feature_count(a: float, d: int) -> int:
    """``d_hat = max(1, round(a * d))`` with halves rounded up."""
    return max(1, int(math.floor(a * d + 0.5)))


def _as_matrix(data: LayerInput) -> Union[np.ndarray, sparse.csr_matrix]:
    if isinstance(data, SparseCode):
        return data.to_csr()
    if sparse.issparse(data):
        return sparse.csr_matrix(data)
    array = np.asarray(data, dtype=np.float64)
    if array.ndim == 1:
        array = array[np.newaxis, :]
    if array.ndim != 2:
        raise DimensionMismatchError(f"Expected a vector or matrix, got shape {array.shape}")
    return array


def train_clustering(
    data: LayerInput,
    k: int,
    a: float,
    rng: np.random.Generator,
    metric: Metric = "sqeuclidean",
) -> KCentroidsClustering:
    """
    Train one k-centroids clustering by random feature and data sampling.

    Args:
        data: ``n x d`` training data (dense, sparse or codes of the layer below).
        k: Number of centroids.
        a: Fraction of input dimensions to sample.
        rng: Random stream owned by this clustering.
        metric: ``"sqeuclidean"`` at the bottom layer, ``"dot"`` above.

    Raises:
        InsufficientDataError: If ``n < k``.
    """
    matrix = _as_matrix(data)
    n, d = matrix.shape
    if d < 1:
        raise MbnError("Training data has no features")
    if n < k:
        raise InsufficientDataError(f"Cannot draw {k} centroids from {n} samples")

    d_hat = sampled_feature_count(a, d)
    feature_indices = np.sort(rng.choice(d, size=d_hat, replace=False))
    sample_indices = rng.choice(n, size=k, replace=False)
    rows = matrix[sample_indices]
    if sparse.issparse(rows):
        centroids = rows[:, feature_indices].toarray()
    else:
        centroids = rows[:, feature_indices]
    return KCentroidsClustering(
        feature_indices=feature_indices.astype(np.int64),
        centroids=np.array(centroids, dtype=np.float64),
        metric=metric,
        input_dim=d,
    )


def encode_clustering(clustering: KCentroidsClustering, x: np.ndarray) -> int:
    """
    Index of the centroid nearest to ``x`` (lowest index on ties).

    Raises:
        DimensionMismatchError: If ``x`` does not have the clustering's input dimension.
    """
    vector = np.asarray(x, dtype=np.float64).ravel()
    if vector.shape[0] != clustering.input_dim:
        raise DimensionMismatchError(
            f"Input has dimension {vector.shape[0]}, clustering expects {clustering.input_dim}"
        )
    return int(clustering.assign(vector[np.newaxis, :])[0])


def encode_layer(layer: MbnLayer, x: LayerInput, workers: Optional[int] = None) -> SparseCode:
    """
    Encode one vector (or a batch of rows) through every clustering of a layer.

    Returns:
        ``SparseCode`` with exactly ``V`` active indices per sample, clustering
        ``v``'s winner offset into block ``[v * k, (v + 1) * k)``.
    """
    matrix = _as_matrix(x)
    if matrix.shape[1] != layer.input_dim:
        raise DimensionMismatchError(
            f"Input has dimension {matrix.shape[1]}, layer expects {layer.input_dim}"
        )
    winners = ordered_map(lambda clustering: clustering.assign(matrix), layer.clusterings, workers)
    offsets = np.arange(len(layer.clusterings), dtype=np.int64) * layer.k
    active = np.stack(winners, axis=1).astype(np.int64) + offsets
    return SparseCode(active=active, block_size=layer.k)


def train_layer(
    data: LayerInput,
    k: int,
    config: MbnConfig,
    layer_index: int,
    workers: Optional[int] = None,
) -> MbnLayer:
    """Train the ``V`` clusterings of one layer, each on its own derived stream."""
    matrix = _as_matrix(data)
    metric: Metric = "sqeuclidean" if layer_index == 0 else "dot"

    def _train(index: int) -> KCentroidsClustering:
        rng = derive_rng(config.seed, layer_index, index)
        return train_clustering(matrix, k, config.feature_fraction, rng, metric=metric)

    return MbnLayer(clusterings=tuple(ordered_map(_train, range(config.n_clusterings), workers)))


@traceable(name="mbn_fit", run_type="chain")
def fit(data: np.ndarray, config: MbnConfig, workers: Optional[int] = None) -> MbnModel:
    """
    Fit an MBN bottom-up and its PCA output layer.

    Args:
        data: ``n x d`` training data.
        config: Hyperparameters; the seed fixes every random draw.
        workers: Cap on concurrent clusterings (results do not depend on it).

    Returns:
        Immutable ``MbnModel``.

    Raises:
        InsufficientDataError: If ``n <= k`` for any planned layer.
        MbnError: If the schedule cannot be planned.
    """
    matrix = _as_matrix(data)
    n = matrix.shape[0]
    schedule = plan_k_schedule(config.k1, config.delta, config.n_classes)
    logger.info(
        "MBN fit: %d samples x %d dims, k schedule %s (%d hidden layer%s), V=%d, a=%.3g",
        n,
        matrix.shape[1],
        schedule,
        len(schedule),
        "" if len(schedule) == 1 else "s",
        config.n_clusterings,
        config.feature_fraction,
    )

    layers: List[MbnLayer] = []
    current: LayerInput = matrix
    for layer_index, k in enumerate(schedule):
        if n <= k:
            raise InsufficientDataError(
                f"Layer {layer_index + 1} needs more than k={k} samples, got {n}"
            )
        layer = train_layer(current, k, config, layer_index, workers)
        codes = encode_layer(layer, current, workers)
        layers.append(layer)
        current = codes.to_csr()

    pca = pca_fit(current, config.resolved_output_dim, seed=config.seed)
    return MbnModel(layers=tuple(layers), pca=pca, config=config)


def encode_network(model: MbnModel, x: LayerInput, workers: Optional[int] = None) -> SparseCode:
    """Top-layer codes for one vector or a batch of rows."""
    matrix = _as_matrix(x)
    if matrix.shape[1] != model.input_dim:
        raise DimensionMismatchError(
            f"Input has dimension {matrix.shape[1]}, model expects {model.input_dim}"
        )
    codes: Optional[SparseCode] = None
    current: LayerInput = matrix
    for layer in model.layers:
        codes = encode_layer(layer, current, workers)
        current = codes.to_csr()
    assert codes is not None
    return codes


def transform(model: MbnModel, x: LayerInput, workers: Optional[int] = None) -> np.ndarray:
    """
    Map inputs to m-vectors.

    Args:
        model: Fitted network.
        x: One input vector (returns a 1-D m-vector) or ``n x d`` rows
            (returns ``n x output_dim``).

    Raises:
        DimensionMismatchError: If the input dimension differs from training.
    """
    single = not isinstance(x, SparseCode) and not sparse.issparse(x) and np.ndim(x) == 1
    codes = encode_network(model, x, workers)
    projected = model.pca.project(codes.to_csr())
    return projected[0] if single else projected


def fit_transform(data: np.ndarray, config: MbnConfig, workers: Optional[int] = None):
    """Fit on ``data`` and return ``(model, m_vectors)``."""
    model = fit(data, config, workers)
    return model, transform(model, data, workers)
