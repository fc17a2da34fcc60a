import math

import numpy as np
import pytest
from scipy.spatial.distance import cdist

from config.settings import MbnConfig
from core.errors import DimensionMismatchError, InsufficientDataError, MbnError
from core.models import KCentroidsClustering, MbnLayer
from domain.mbn import (
    encode_clustering,
    encode_layer,
    fit,
    pca_fit,
    plan_k_schedule,
    sampled_feature_count,
    train_clustering,
    transform,
)
from utils.seeding import derive_rng


@pytest.mark.parametrize(
    "k1, delta, n_classes, expected",
    [
        (20, 0.0, 2, [20]),
        (20, 0.15, 2, [20]),
        (20, 0.3, 2, [20, 6]),
        (100, 0.5, 2, [100, 50, 25, 12, 6]),
    ],
)
def test_schedule_examples(k1, delta, n_classes, expected):
    assert plan_k_schedule(k1, delta, n_classes) == expected


def test_schedule_shallow_deep_boundary():
    for delta in (0.0, 0.05, 0.1, 0.15):
        assert len(plan_k_schedule(20, delta, 2)) == 1
    for delta in (0.2, 0.3, 0.5, 0.7):
        assert len(plan_k_schedule(20, delta, 2)) >= 2


def test_schedule_law_holds_over_a_grid():
    for k1 in range(5, 120, 7):
        for delta in np.linspace(0.0, 0.95, 20):
            for n_classes in (2, 3):
                floor_k = math.ceil(1.5 * n_classes)
                if k1 < floor_k:
                    continue
                schedule = plan_k_schedule(k1, float(delta), n_classes)
                assert schedule[0] == k1
                assert all(k > floor_k for k in schedule[1:])
                assert all(b == math.floor(delta * a + 1e-9) for a, b in zip(schedule, schedule[1:]))
                assert math.floor(delta * schedule[-1] + 1e-9) <= floor_k


def test_schedule_rejects_small_k1():
    with pytest.raises(MbnError):
        plan_k_schedule(2, 0.0, 2)


def test_feature_count_rule():
    assert sampled_feature_count(1.0, 40) == 40
    assert sampled_feature_count(0.9, 40) == 36
    assert sampled_feature_count(0.01, 10) == 1


def test_train_clustering_samples_features_and_points():
    data = np.random.default_rng(0).standard_normal((50, 40))
    clustering = train_clustering(data, 20, 0.9, derive_rng(1))
    assert clustering.d_hat == 36
    assert len(set(clustering.feature_indices.tolist())) == 36
    assert clustering.centroids.shape == (20, 36)
    restricted = data[:, clustering.feature_indices]
    rows = [int(np.flatnonzero(np.all(restricted == c, axis=1))[0]) for c in clustering.centroids]
    assert len(set(rows)) == 20


def test_train_clustering_full_fraction_keeps_all_features():
    data = np.random.default_rng(0).standard_normal((30, 40))
    clustering = train_clustering(data, 5, 1.0, derive_rng(2))
    assert sorted(clustering.feature_indices.tolist()) == list(range(40))


def test_train_clustering_is_seeded():
    data = np.random.default_rng(0).standard_normal((30, 8))
    a = train_clustering(data, 5, 0.5, derive_rng(9, 0, 3))
    b = train_clustering(data, 5, 0.5, derive_rng(9, 0, 3))
    assert np.array_equal(a.feature_indices, b.feature_indices)
    assert np.array_equal(a.centroids, b.centroids)


def test_train_clustering_needs_k_samples():
    with pytest.raises(InsufficientDataError):
        train_clustering(np.zeros((3, 2)), 5, 1.0, derive_rng(0))


def _clustering(centroids, metric="sqeuclidean", input_dim=None):
    centroids = np.asarray(centroids, dtype=float)
    return KCentroidsClustering(
        feature_indices=np.arange(centroids.shape[1]),
        centroids=centroids,
        metric=metric,
        input_dim=input_dim or centroids.shape[1],
    )


def test_encode_clustering_nearest_centroid():
    assert encode_clustering(_clustering([[0, 0], [10, 10]]), np.array([1.0, 1.0])) == 0


def test_encode_clustering_dot_counts_overlap():
    def one_hot(active):
        vector = np.zeros(14)
        vector[list(active)] = 1.0
        return vector

    clustering = _clustering([one_hot({0, 7, 13}), one_hot({1, 8, 12})], metric="dot")
    assert encode_clustering(clustering, one_hot({0, 7, 12})) == 0


def test_encode_clustering_ties_go_to_lowest_index():
    centroids = np.array([[9.0], [8.0], [1.0], [7.0], [6.0], [1.0]])
    assert encode_clustering(_clustering(centroids), np.array([1.0])) == 2


def test_encode_clustering_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        encode_clustering(_clustering([[0, 0]]), np.zeros(3))


def test_encode_layer_offsets_blocks():
    layer = MbnLayer(
        (
            _clustering([[0.0], [5.0]]),
            _clustering([[5.0], [0.0]]),
            _clustering([[0.0], [5.0]]),
        )
    )
    code = encode_layer(layer, np.array([0.0]))
    assert code.active.tolist() == [[0, 3, 4]]
    assert code.to_dense().sum() == 3


def test_fit_default_schedule_gives_one_hidden_layer(two_blobs):
    points, _ = two_blobs
    model = fit(points, MbnConfig(V=10, a=0.9, k1=20, delta=0.0, n_classes=2))
    assert model.n_layers == 1
    assert model.k_schedule == (20,)
    assert model.layers[0].metric == "sqeuclidean"


def test_fit_deep_schedule_uses_dot_above_the_bottom():
    points = np.random.default_rng(0).standard_normal((300, 6))
    model = fit(points, MbnConfig(V=4, a=0.9, k1=100, delta=0.5, n_classes=2))
    assert model.k_schedule == (100, 50, 25, 12, 6)
    assert [layer.metric for layer in model.layers] == ["sqeuclidean"] + ["dot"] * 4
    assert model.layers[1].input_dim == 4 * 100


def test_fit_rejects_too_few_samples():
    with pytest.raises(InsufficientDataError):
        fit(np.zeros((20, 3)), MbnConfig(V=2, k1=20))


def test_fit_is_deterministic_across_worker_counts(two_blobs, small_mbn_config):
    points, _ = two_blobs
    serial = fit(points, small_mbn_config, workers=1)
    parallel = fit(points, small_mbn_config, workers=4)
    for a, b in zip(serial.layers[0].clusterings, parallel.layers[0].clusterings):
        assert np.array_equal(a.feature_indices, b.feature_indices)
        assert np.array_equal(a.centroids, b.centroids)
    assert np.array_equal(serial.pca.components, parallel.pca.components)
    assert np.array_equal(transform(serial, points), transform(parallel, points, workers=3))


def test_transform_shapes_and_repeatability(two_blobs, small_mbn_config):
    points, _ = two_blobs
    model = fit(points, small_mbn_config.model_copy(update={"output_dim": 3}))
    single = transform(model, points[0])
    assert single.shape == (3,)
    assert np.array_equal(single, transform(model, points[0]))
    assert transform(model, points).shape == (200, 3)
    with pytest.raises(DimensionMismatchError):
        transform(model, np.zeros(4))


def test_codes_have_mass_v_and_bounded_overlap(two_blobs, small_mbn_config):
    points, _ = two_blobs
    model = fit(points, small_mbn_config)
    codes = encode_layer(model.layers[0], points).to_dense()
    assert np.all(codes.sum(axis=1) == small_mbn_config.V)
    similarity = codes @ codes.T
    assert similarity.min() >= 0 and similarity.max() <= small_mbn_config.V
    shared = (encode_layer(model.layers[0], points).active[0] == encode_layer(model.layers[0], points).active[1]).sum()
    assert similarity[0, 1] == shared


def test_m_vectors_separate_far_blobs(two_blobs):
    points, labels = two_blobs
    model = fit(points, MbnConfig(V=40, a=0.9, k1=8, n_classes=2, seed=11))
    m = transform(model, points)
    distances = cdist(m, m)
    np.fill_diagonal(distances, np.inf)
    nearest = np.argmin(distances, axis=1)
    assert np.mean(labels[nearest] == labels) >= 0.99


def test_shallow_model_matches_direct_single_ensemble(two_blobs, small_mbn_config):
    points, _ = two_blobs
    model = fit(points, small_mbn_config)
    cfg = small_mbn_config
    direct = [
        train_clustering(points, cfg.k1, cfg.a, derive_rng(cfg.seed, 0, v)) for v in range(cfg.V)
    ]
    for mine, theirs in zip(model.layers[0].clusterings, direct):
        assert np.array_equal(mine.feature_indices, theirs.feature_indices)
        assert np.array_equal(mine.centroids, theirs.centroids)
    codes = encode_layer(MbnLayer(tuple(direct)), points).to_csr()
    pca = pca_fit(codes, cfg.resolved_output_dim, seed=cfg.seed)
    assert np.allclose(pca.components, model.pca.components, atol=1e-12)
