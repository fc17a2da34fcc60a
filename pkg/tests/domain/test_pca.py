import numpy as np
import pytest
from scipy import sparse

import domain.mbn.pca as pca_module
from core.errors import PcaError
from core.models import check_orthonormal_rows
from domain.mbn import pca_fit


def test_line_in_three_dimensions():
    direction = np.array([1.0, 2.0, -2.0]) / 3.0
    t = np.linspace(-5, 5, 40)
    data = np.outer(t, direction) + np.array([1.0, 0.0, 3.0])
    result = pca_fit(data, 1)
    assert abs(abs(result.components[0] @ direction) - 1.0) < 1e-10


def test_full_rank_reconstruction_is_exact():
    data = np.random.default_rng(0).standard_normal((30, 5))
    result = pca_fit(data, 5)
    projected = result.project(data)
    reconstructed = projected @ result.components + result.mean
    assert np.max(np.abs(reconstructed - data)) < 1e-8


def test_explained_variance_matches_covariance_eigenvalues():
    data = np.random.default_rng(1).standard_normal((100, 6)) * np.array([5, 4, 3, 2, 1, 0.5])
    result = pca_fit(data, 4)
    eigenvalues = np.sort(np.linalg.eigvalsh(np.cov(data.T)))[::-1][:4]
    assert np.allclose(result.explained_variance, eigenvalues, atol=1e-8)
    check_orthonormal_rows(result.components)


def test_components_are_sign_normalized():
    data = np.random.default_rng(2).standard_normal((50, 4))
    for row in pca_fit(data, 3).components:
        assert row[np.argmax(np.abs(row))] > 0


def test_rank_deficiency_pads_and_flags():
    data = np.outer(np.arange(10.0), [1.0, 1.0, 0.0])
    result = pca_fit(data, 3)
    assert result.rank_deficient
    assert result.components.shape == (3, 3)
    assert np.allclose(result.explained_variance[1:], 0.0)


def test_needs_more_samples_than_components():
    with pytest.raises(PcaError):
        pca_fit(np.zeros((3, 5)), 3)


def test_sparse_arpack_path_matches_dense(monkeypatch):
    gen = np.random.default_rng(3)
    data = (gen.random((300, 60)) < 0.2) * 1.0
    dense = pca_fit(data, 3)
    monkeypatch.setattr(pca_module, "DENSE_CELL_LIMIT", 0)
    arpack = pca_fit(sparse.csr_matrix(data), 3, seed=4)
    assert np.allclose(arpack.explained_variance, dense.explained_variance, rtol=1e-8)
    assert np.allclose(arpack.components, dense.components, atol=1e-6)
    check_orthonormal_rows(arpack.components)
