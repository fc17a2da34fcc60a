"""Embedding matrices on disk (rank-2 tensor files)."""

from __future__ import annotations

import numpy as np

from core.errors import TensorFileError
from core.models import EmbeddingMatrix

from .tensor_file import read_tensor, write_tensor


def save_embeddings(embeddings: EmbeddingMatrix, path: str) -> None:
    """Write an embedding matrix as a rank-2 tensor file (float32 payload)."""
    write_tensor(path, embeddings.data)


def load_embeddings(path: str) -> EmbeddingMatrix:
    """
    Read an embedding matrix from a tensor file.

    Raises:
        TensorFileError: If the header is malformed or the tensor is not rank 2.
        DpclError: If the rows are not unit-norm.
    """
    try:
        data = read_tensor(path, expected_rank=2)
    except TensorFileError as exc:
        raise TensorFileError(f"Cannot load embeddings: {exc}") from exc
    return EmbeddingMatrix(data.astype(np.float64))
