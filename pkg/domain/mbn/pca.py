"""
PCA output layer.

Components are the leading right singular vectors of the mean-centered
data, each sign-normalized so its largest-magnitude entry is positive.
Dense inputs (and small sparse ones) use an exact SVD. Large sparse code
matrices are never densified: ARPACK runs on a centering linear operator
with a seeded start vector, which keeps the result reproducible.
"""

from __future__ import annotations

from typing import Union

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import LinearOperator, svds

from core.errors import PcaError
from core.models import PcaResult
from monitoring import get_logger
from utils.seeding import derive_rng

logger = get_logger(__name__)

# Sparse inputs with at most this many cells are densified for an exact SVD.
DENSE_CELL_LIMIT = 4_000_000
# Stream key of the ARPACK start vector; clear of the (layer, clustering) keys.
_ARPACK_STREAM = 0x7FFFFFFF


def sign_normalize(components: np.ndarray) -> np.ndarray:
    """Flip rows so each row's largest-magnitude entry is positive (ties: first entry)."""
    components = components.copy()
    for row in components:
        if not np.any(row):
            continue
        pivot = int(np.argmax(np.abs(row)))
        if row[pivot] < 0:
            row *= -1.0
    return components


def _rank_tolerance(singular_values: np.ndarray, shape: tuple) -> float:
    top = float(singular_values.max()) if singular_values.size else 0.0
    return top * max(shape) * np.finfo(np.float64).eps


def _dense_svd(data: np.ndarray, mean: np.ndarray, output_dim: int):
    centered = data - mean
    _, singular_values, vt = np.linalg.svd(centered, full_matrices=False)
    take = min(output_dim, vt.shape[0])
    return singular_values, vt[:take], singular_values[:take]


def _sparse_svd(data: sparse.spmatrix, mean: np.ndarray, output_dim: int, seed: int):
    n, d = data.shape
    csr = sparse.csr_matrix(data, dtype=np.float64)
    csr_t = csr.T.tocsr()
    ones = np.ones(n)

    def matvec(v: np.ndarray) -> np.ndarray:
        v = np.ravel(v)
        return csr @ v - (mean @ v) * ones

    def rmatvec(u: np.ndarray) -> np.ndarray:
        u = np.ravel(u)
        return csr_t @ u - mean * u.sum()

    operator = LinearOperator((n, d), matvec=matvec, rmatvec=rmatvec, dtype=np.float64)
    v0 = derive_rng(seed, _ARPACK_STREAM).standard_normal(min(n, d))
    _, singular_values, vt = svds(operator, k=output_dim, v0=v0, solver="arpack")
    order = np.argsort(singular_values)[::-1]
    singular_values = singular_values[order]
    # Re-orthonormalize to guard the tolerance on near-degenerate directions.
    q, _ = np.linalg.qr(vt[order].T)
    return singular_values, q.T, singular_values


def pca_fit(
    codes: Union[np.ndarray, sparse.spmatrix],
    output_dim: int,
    seed: int = 0,
) -> PcaResult:
    """
    Fit the PCA output layer.

    Args:
        codes: ``n x dim`` data (dense array or sparse code matrix).
        output_dim: Number of components to keep.
        seed: Seeds the ARPACK start vector on the sparse path.

    Returns:
        ``PcaResult`` with the mean, ``output_dim x dim`` components and the
        explained variance (``s**2 / (n - 1)``) per component. If the centered
        data has rank below ``output_dim`` the missing components have zero
        variance and ``rank_deficient`` is set.

    Raises:
        PcaError: If ``n <= output_dim`` or the input is not 2-D.
    """
    if codes.ndim != 2:
        raise PcaError(f"pca_fit expects a 2-D matrix, got {codes.ndim}-D")
    n, d = codes.shape
    if output_dim < 1:
        raise PcaError(f"output_dim must be positive, got {output_dim}")
    if n <= output_dim:
        raise PcaError(f"pca_fit needs more samples ({n}) than output_dim ({output_dim})")

    is_sparse = sparse.issparse(codes)
    mean = np.asarray(codes.mean(axis=0), dtype=np.float64).ravel()
    use_arpack = is_sparse and n * d > DENSE_CELL_LIMIT and output_dim < min(n, d) - 1

    if use_arpack:
        all_values, components, kept_values = _sparse_svd(codes, mean, output_dim, seed)
    else:
        dense = codes.toarray() if is_sparse else np.asarray(codes, dtype=np.float64)
        all_values, components, kept_values = _dense_svd(dense, mean, output_dim)

    tol = _rank_tolerance(all_values, (n, d))
    live = kept_values > tol
    explained = np.where(live, kept_values ** 2 / (n - 1), 0.0)

    rank_deficient = bool(components.shape[0] < output_dim or not np.all(live))
    if components.shape[0] < output_dim:
        padding = np.zeros((output_dim - components.shape[0], d))
        components = np.vstack([components, padding])
        explained = np.concatenate([explained, np.zeros(padding.shape[0])])
    if rank_deficient:
        logger.warning(
            "PCA rank %d is below output_dim %d; padded with zero-variance components",
            int(np.count_nonzero(live)),
            output_dim,
        )

    return PcaResult(
        mean=mean,
        components=sign_normalize(components),
        explained_variance=explained,
        rank_deficient=rank_deficient,
    )
