"""
Deep-clustering objective.

The cost compares the affinity of the embeddings with the ideal speaker
affinity over all T-F units:

    J = || X X^T - B B^T ||_F^2
      = || X^T X ||_F^2 - 2 || X^T B ||_F^2 + || B^T B ||_F^2

X is ``n x D`` and B is ``n x U``. The expanded form only builds ``D x D``,
``D x U`` and ``U x U`` products, so it scales to the ~1e5 units of a real
utterance; the direct ``n x n`` form is kept as a small-n oracle.
"""

from __future__ import annotations

from typing import Sequence, Union

import numpy as np

from core.errors import DpclError
from core.models import EmbeddingMatrix, IndicatorMatrix, flatten_units

DIRECT_EVALUATION_LIMIT = 5000

MatrixLike = Union[EmbeddingMatrix, IndicatorMatrix, np.ndarray]


def _as_array(matrix: MatrixLike) -> np.ndarray:
    data = matrix.data if isinstance(matrix, (EmbeddingMatrix, IndicatorMatrix)) else matrix
    return np.asarray(data, dtype=np.float64)


def _check_rows(x: np.ndarray, b: np.ndarray) -> None:
    if x.ndim != 2 or b.ndim != 2:
        raise DpclError(f"X and B must be 2-D, got shapes {x.shape} and {b.shape}")
    if x.shape[0] != b.shape[0]:
        raise DpclError(f"Row counts differ: X has {x.shape[0]} units, B has {b.shape[0]}")


def indicator_matrix(source_mags: Sequence[np.ndarray]) -> IndicatorMatrix:
    """
    Build the ground-truth indicator matrix from per-source magnitudes.

    Each unit is assigned to the source with the largest magnitude; ties go to
    the lowest source index.

    Args:
        source_mags: ``O`` equally shaped ``frames x bins`` magnitude matrices.

    Returns:
        ``IndicatorMatrix`` of shape ``(frames * bins) x O``.

    Raises:
        DpclError: If fewer than two sources are given or their shapes differ.
    """
    if len(source_mags) == 0:
        raise DpclError("indicator_matrix needs at least one source magnitude matrix")
    if len(source_mags) < 2:
        raise DpclError(f"indicator_matrix needs at least 2 sources, got {len(source_mags)}")
    shapes = {np.shape(mag) for mag in source_mags}
    if len(shapes) != 1:
        raise DpclError(f"Source magnitude shapes differ: {sorted(shapes)}")
    stacked = np.stack([np.asarray(mag, dtype=np.float64) for mag in source_mags])
    labels = np.argmax(stacked, axis=0)
    return IndicatorMatrix.from_labels(flatten_units(labels), len(source_mags))


def dpcl_objective(x: MatrixLike, b: MatrixLike) -> float:
    """
    Evaluate ``J`` through the low-rank expansion.

    Raises:
        DpclError: On a row-count mismatch.
    """
    x, b = _as_array(x), _as_array(b)
    _check_rows(x, b)
    xtx = x.T @ x
    xtb = x.T @ b
    btb = b.T @ b
    value = np.sum(xtx ** 2) - 2.0 * np.sum(xtb ** 2) + np.sum(btb ** 2)
    # The expansion can round a hair below zero at a global minimum.
    return float(max(value, 0.0))


def dpcl_objective_grad(x: MatrixLike, b: MatrixLike) -> np.ndarray:
    """
    Gradient of ``J`` with respect to X: ``4 (X X^T - B B^T) X``, evaluated as
    ``4 (X (X^T X) - B (B^T X))``.

    Raises:
        DpclError: On a row-count mismatch.
    """
    x, b = _as_array(x), _as_array(b)
    _check_rows(x, b)
    return 4.0 * (x @ (x.T @ x) - b @ (b.T @ x))


def dpcl_objective_direct(x: MatrixLike, b: MatrixLike) -> float:
    """
    Evaluate ``J`` from the explicit ``n x n`` affinities (n <= 5000 only).

    Raises:
        DpclError: On a row-count mismatch or when n exceeds the direct limit.
    """
    x, b = _as_array(x), _as_array(b)
    _check_rows(x, b)
    if x.shape[0] > DIRECT_EVALUATION_LIMIT:
        raise DpclError(
            f"Direct evaluation limited to {DIRECT_EVALUATION_LIMIT} units, got {x.shape[0]}; "
            "use dpcl_objective"
        )
    diff = x @ x.T - b @ b.T
    return float(np.sum(diff ** 2))

