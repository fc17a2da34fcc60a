import numpy as np
import pytest

from core.errors import KMeansError
from domain.separation import assign_to_centroids, kmeans, lloyd


def test_one_dimensional_example():
    result = kmeans(np.array([0.0, 0.1, 10.0, 10.1]), 2, restarts=3, seed=0)
    assert result.labels[0] == result.labels[1]
    assert result.labels[2] == result.labels[3]
    assert result.labels[0] != result.labels[2]


def test_fixed_seed_is_repeatable_and_worker_independent():
    points = np.random.default_rng(0).standard_normal((120, 3))
    a = kmeans(points, 4, restarts=6, seed=5, workers=1)
    b = kmeans(points, 4, restarts=6, seed=5, workers=4)
    assert np.array_equal(a.labels, b.labels)
    assert a.inertia == b.inertia
    assert a.restart == b.restart


def test_every_cluster_is_nonempty_and_inertia_finite():
    gen = np.random.default_rng(1)
    for _ in range(20):
        points = gen.standard_normal((30, 2))
        result = kmeans(points, 5, restarts=2, seed=int(gen.integers(100)))
        assert np.bincount(result.labels, minlength=5).min() >= 1
        assert np.isfinite(result.inertia)


def test_duplicate_points_still_fill_every_cluster():
    points = np.zeros((10, 2))
    result = kmeans(points, 3, restarts=1, seed=0)
    assert sorted(np.unique(result.labels).tolist()) == [0, 1, 2]


def test_inertia_never_increases_across_iterations():
    gen = np.random.default_rng(2)
    for _ in range(20):
        points = gen.standard_normal((80, 4))
        init = points[gen.choice(80, size=4, replace=False)]
        history = np.array(lloyd(points, init).inertia_history)
        assert np.all(np.diff(history) <= 1e-9 * history[0])


def test_beats_random_assignments():
    gen = np.random.default_rng(3)
    for _ in range(5):
        points = gen.standard_normal((50, 2))
        result = kmeans(points, 3, restarts=10, seed=1)
        for _ in range(1000):
            labels = gen.integers(0, 3, 50)
            inertia = sum(
                ((points[labels == c] - points[labels == c].mean(axis=0)) ** 2).sum()
                for c in range(3)
                if np.any(labels == c)
            )
            assert result.inertia <= inertia + 1e-9


def test_too_few_points_rejected():
    with pytest.raises(KMeansError):
        kmeans(np.zeros((2, 2)), 3)


def test_assign_to_centroids_ties_low():
    labels = assign_to_centroids(np.array([[1.0]]), np.array([[0.0], [2.0]]))
    assert labels.tolist() == [0]
