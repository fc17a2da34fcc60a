import numpy as np
import pytest
from scipy import sparse

from config.settings import MbnConfig
from core.errors import DimensionMismatchError, MbnError
from core.models import KCentroidsClustering, MbnLayer, SparseCode, check_orthonormal_rows


def _clustering(centroids, metric="sqeuclidean", input_dim=None, features=None):
    centroids = np.asarray(centroids, dtype=float)
    features = np.arange(centroids.shape[1]) if features is None else np.asarray(features)
    return KCentroidsClustering(
        feature_indices=features,
        centroids=centroids,
        metric=metric,
        input_dim=input_dim or centroids.shape[1],
    )


def test_clustering_rejects_duplicate_features():
    with pytest.raises(MbnError):
        _clustering(np.zeros((2, 2)), features=[1, 1], input_dim=3)


def test_clustering_rejects_feature_outside_input():
    with pytest.raises(MbnError):
        _clustering(np.zeros((2, 2)), features=[0, 3], input_dim=3)


def test_scores_check_input_dimension():
    with pytest.raises(DimensionMismatchError):
        _clustering([[0.0, 0.0]]).scores(np.zeros((1, 3)))


def test_sparse_dot_scores_match_dense():
    centroids = (np.random.default_rng(0).random((4, 6)) > 0.5).astype(float)
    clustering = _clustering(centroids, metric="dot", input_dim=9, features=[0, 1, 3, 4, 6, 8])
    data = (np.random.default_rng(1).random((5, 9)) > 0.5).astype(float)
    dense = clustering.scores(data)
    assert np.array_equal(clustering.scores(sparse.csr_matrix(data)), dense)


def test_sparse_code_dense_rows_sum_to_v():
    code = SparseCode(active=np.array([[0, 3, 4], [1, 2, 5]]), block_size=2)
    dense = code.to_dense()
    assert dense.shape == (2, 6)
    assert dense.sum(axis=1).tolist() == [3, 3]
    assert set(np.unique(dense)) <= {0.0, 1.0}


def test_sparse_code_rejects_index_outside_block():
    with pytest.raises(MbnError):
        SparseCode(active=np.array([[0, 1]]), block_size=2)


def test_layer_requires_shared_k():
    with pytest.raises(MbnError):
        MbnLayer((_clustering(np.zeros((2, 2))), _clustering(np.zeros((3, 2)))))


def test_layer_output_dimension():
    layer = MbnLayer(tuple(_clustering(np.eye(2) * i) for i in range(3)))
    assert (layer.k, layer.output_dim, layer.input_dim) == (2, 6, 2)


def test_orthonormal_check_skips_zero_padding():
    check_orthonormal_rows(np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]))
    with pytest.raises(MbnError):
        check_orthonormal_rows(np.array([[1.0, 0.0], [1.0, 0.0]]))


def test_mbn_config_aliases_and_default_output_dim():
    config = MbnConfig(V=5, a=0.5, k1=10, n_classes=3)
    assert (config.V, config.a, config.resolved_output_dim) == (5, 0.5, 3)
