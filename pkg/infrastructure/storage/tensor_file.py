"""
Tensor file format (``.mbnt``).

Layout, all little-endian:

    magic    4 bytes  b"MBNT"
    version  uint8    1
    rank     uint32
    dims     rank x uint64
    payload  prod(dims) x float32, row-major

Feature tensors, embedding matrices, labels and m-vectors are all stored
in this format so they can be exchanged with any language.
"""

from __future__ import annotations

import math
import os
import struct
from typing import Optional

import numpy as np

from core.errors import TensorFileError
from utils.files import atomic_write

TENSOR_MAGIC = b"MBNT"
TENSOR_VERSION = 1
MAX_RANK = 16
# Refuse to allocate payloads larger than this many elements.
MAX_ELEMENTS = 1 << 34

_HEADER = struct.Struct("<4sBI")
_PAYLOAD_DTYPE = np.dtype("<f4")


def encode_tensor(array: np.ndarray) -> bytes:
    """Serialize an array (cast to float32) to the tensor container."""
    array = np.asarray(array)
    if array.ndim < 1 or array.ndim > MAX_RANK:
        raise TensorFileError(f"Tensor rank {array.ndim} outside [1, {MAX_RANK}]")
    header = _HEADER.pack(TENSOR_MAGIC, TENSOR_VERSION, array.ndim)
    dims = struct.pack(f"<{array.ndim}Q", *array.shape)
    payload = np.ascontiguousarray(array, dtype=_PAYLOAD_DTYPE).tobytes(order="C")
    return header + dims + payload


def decode_tensor(blob: bytes, source: str = "<bytes>", expected_rank: Optional[int] = None) -> np.ndarray:
    """
    Parse a tensor container.

    Args:
        blob: Raw file contents.
        source: Name used in error messages.
        expected_rank: If given, reject tensors of any other rank.

    Returns:
        float32 array with the stored shape.

    Raises:
        TensorFileError: On bad magic or version, rank out of range or not the
            expected one, dimension overflow, or a payload size mismatch.
    """
    if len(blob) < _HEADER.size:
        raise TensorFileError(f"{source}: truncated header")
    magic, version, rank = _HEADER.unpack_from(blob, 0)
    if magic != TENSOR_MAGIC:
        raise TensorFileError(f"{source}: bad magic {magic!r}, expected {TENSOR_MAGIC!r}")
    if version != TENSOR_VERSION:
        raise TensorFileError(f"{source}: unsupported version {version}")
    if rank < 1 or rank > MAX_RANK:
        raise TensorFileError(f"{source}: rank {rank} outside [1, {MAX_RANK}]")
    if expected_rank is not None and rank != expected_rank:
        raise TensorFileError(f"{source}: expected a rank-{expected_rank} tensor, got rank {rank}")

    dims_offset = _HEADER.size
    dims_end = dims_offset + 8 * rank
    if len(blob) < dims_end:
        raise TensorFileError(f"{source}: truncated dimension block")
    dims = struct.unpack_from(f"<{rank}Q", blob, dims_offset)
    n_elements = math.prod(dims)
    if n_elements > MAX_ELEMENTS:
        raise TensorFileError(f"{source}: dimension overflow, {dims} has {n_elements} elements")

    payload = blob[dims_end:]
    expected_bytes = n_elements * _PAYLOAD_DTYPE.itemsize
    if len(payload) != expected_bytes:
        raise TensorFileError(
            f"{source}: payload has {len(payload)} bytes, dims {dims} need {expected_bytes}"
        )
    return np.frombuffer(payload, dtype=_PAYLOAD_DTYPE).astype(np.float32).reshape(dims)


def write_tensor(path: str, array: np.ndarray) -> None:
    """Write ``array`` to ``path`` atomically in the tensor format."""
    blob = encode_tensor(array)
    try:
        with atomic_write(path, "wb") as handle:
            handle.write(blob)
    except OSError as exc:
        raise TensorFileError(f"Failed to write tensor file {path}: {exc}") from exc


def read_tensor(path: str, expected_rank: Optional[int] = None) -> np.ndarray:
    """Read a tensor file; see ``decode_tensor`` for validation."""
    if not os.path.exists(path):
        raise TensorFileError(f"Tensor file not found: {path}")
    try:
        with open(path, "rb") as handle:
            blob = handle.read()
    except OSError as exc:
        raise TensorFileError(f"Failed to read tensor file {path}: {exc}") from exc
    return decode_tensor(blob, source=path, expected_rank=expected_rank)
