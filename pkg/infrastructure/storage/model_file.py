"""
Model file format (``.mbnm``) for fitted Multilayer Bootstrap Networks.

Layout, all little-endian:

    magic        4 bytes   b"MBNM"
    version      uint8     1
    config       V uint32, a float64, k1 uint32, delta float64,
                 n_classes uint32, output_dim uint32, seed uint64
    n_layers     uint32
    per layer    k uint32, metric uint8 (0 sqeuclidean, 1 dot),
                 input_dim uint64, n_clusterings uint32, then per clustering:
                 d_hat uint32, d_hat x uint32 feature indices,
                 k x d_hat float32 centroids (row-major)
    pca          dim uint64, output_dim uint32, rank_deficient uint8,
                 mean dim x float64, components output_dim x dim x float64,
                 explained_variance output_dim x float64

Centroids are stored in single precision, so a reloaded bottom layer holds
float32-rounded centroids. Upper-layer centroids are binary and survive
exactly.
"""

from __future__ import annotations

import os
import struct
from typing import List, Tuple

import numpy as np

from config.settings import MbnConfig
from core.errors import MbnsepError, ModelFileError
from core.models import KCentroidsClustering, MbnLayer, MbnModel, PcaResult
from utils.files import atomic_write

MODEL_MAGIC = b"MBNM"
MODEL_VERSION = 1

_METRIC_CODES = {"sqeuclidean": 0, "dot": 1}
_METRIC_NAMES = {code: name for name, code in _METRIC_CODES.items()}

_PREAMBLE = struct.Struct("<4sB")
_CONFIG = struct.Struct("<IdIdIIQ")
_LAYER = struct.Struct("<IBQI")
_PCA = struct.Struct("<QIB")


class _Reader:
    """Cursor over a model blob that raises ``ModelFileError`` on truncation."""

    def __init__(self, blob: bytes, source: str) -> None:
        self.blob = blob
        self.source = source
        self.offset = 0

    def unpack(self, fmt: struct.Struct) -> Tuple:
        if self.offset + fmt.size > len(self.blob):
            raise ModelFileError(f"{self.source}: truncated at byte {self.offset}")
        values = fmt.unpack_from(self.blob, self.offset)
        self.offset += fmt.size
        return values

    def array(self, dtype: str, count: int) -> np.ndarray:
        dtype = np.dtype(dtype)
        size = dtype.itemsize * count
        if self.offset + size > len(self.blob):
            raise ModelFileError(f"{self.source}: truncated at byte {self.offset}")
        values = np.frombuffer(self.blob, dtype=dtype, count=count, offset=self.offset)
        self.offset += size
        return values.copy()


def encode_model(model: MbnModel) -> bytes:
    """Serialize a fitted network."""
    cfg = model.config
    parts: List[bytes] = [
        _PREAMBLE.pack(MODEL_MAGIC, MODEL_VERSION),
        _CONFIG.pack(
            cfg.n_clusterings,
            cfg.feature_fraction,
            cfg.k1,
            cfg.delta,
            cfg.n_classes,
            cfg.resolved_output_dim,
            cfg.seed,
        ),
        struct.pack("<I", model.n_layers),
    ]
    for layer in model.layers:
        parts.append(
            _LAYER.pack(layer.k, _METRIC_CODES[layer.metric], layer.input_dim, len(layer.clusterings))
        )
        for clustering in layer.clusterings:
            parts.append(struct.pack("<I", clustering.d_hat))
            parts.append(np.ascontiguousarray(clustering.feature_indices, dtype="<u4").tobytes())
            parts.append(np.ascontiguousarray(clustering.centroids, dtype="<f4").tobytes())

    pca = model.pca
    parts.append(_PCA.pack(pca.components.shape[1], pca.output_dim, int(pca.rank_deficient)))
    parts.append(np.ascontiguousarray(pca.mean, dtype="<f8").tobytes())
    parts.append(np.ascontiguousarray(pca.components, dtype="<f8").tobytes())
    parts.append(np.ascontiguousarray(pca.explained_variance, dtype="<f8").tobytes())
    return b"".join(parts)


def decode_model(blob: bytes, source: str = "<bytes>") -> MbnModel:
    """
    Parse a model container.

    Raises:
        ModelFileError: On bad magic or version, truncation, trailing bytes or
            a structurally invalid network.
    """
    reader = _Reader(blob, source)
    magic, version = reader.unpack(_PREAMBLE)
    if magic != MODEL_MAGIC:
        raise ModelFileError(f"{source}: bad magic {magic!r}, expected {MODEL_MAGIC!r}")
    if version != MODEL_VERSION:
        raise ModelFileError(f"{source}: unsupported version {version}")

    v, a, k1, delta, n_classes, output_dim, seed = reader.unpack(_CONFIG)
    (n_layers,) = reader.unpack(struct.Struct("<I"))
    if n_layers < 1:
        raise ModelFileError(f"{source}: model has no layers")

    try:
        config = MbnConfig(
            n_clusterings=v,
            feature_fraction=a,
            k1=k1,
            delta=delta,
            n_classes=n_classes,
            output_dim=output_dim,
            seed=seed,
        )
        layers = []
        for _ in range(n_layers):
            k, metric_code, input_dim, n_clusterings = reader.unpack(_LAYER)
            if metric_code not in _METRIC_NAMES:
                raise ModelFileError(f"{source}: unknown metric code {metric_code}")
            clusterings = []
            for _ in range(n_clusterings):
                (d_hat,) = reader.unpack(struct.Struct("<I"))
                indices = reader.array("<u4", d_hat).astype(np.int64)
                centroids = reader.array("<f4", k * d_hat).astype(np.float64).reshape(k, d_hat)
                clusterings.append(
                    KCentroidsClustering(
                        feature_indices=indices,
                        centroids=centroids,
                        metric=_METRIC_NAMES[metric_code],
                        input_dim=int(input_dim),
                    )
                )
            layers.append(MbnLayer(clusterings=tuple(clusterings)))

        dim, pca_dim, rank_deficient = reader.unpack(_PCA)
        mean = reader.array("<f8", dim)
        components = reader.array("<f8", pca_dim * dim).reshape(pca_dim, dim)
        explained = reader.array("<f8", pca_dim)
        if reader.offset != len(blob):
            raise ModelFileError(f"{source}: {len(blob) - reader.offset} trailing bytes")
        pca = PcaResult(
            mean=mean,
            components=components,
            explained_variance=explained,
            rank_deficient=bool(rank_deficient),
        )
        return MbnModel(layers=tuple(layers), pca=pca, config=config)
    except ModelFileError:
        raise
    except (MbnsepError, ValueError) as exc:
        raise ModelFileError(f"{source}: invalid model: {exc}") from exc


def save_model(model: MbnModel, path: str) -> None:
    """Write a model file atomically."""
    blob = encode_model(model)
    try:
        with atomic_write(path, "wb") as handle:
            handle.write(blob)
    except OSError as exc:
        raise ModelFileError(f"Failed to write model file {path}: {exc}") from exc


def load_model(path: str) -> MbnModel:
    """Read a model file written by ``save_model``."""
    if not os.path.exists(path):
        raise ModelFileError(f"Model file not found: {path}")
    try:
        with open(path, "rb") as handle:
            blob = handle.read()
    except OSError as exc:
        raise ModelFileError(f"Failed to read model file {path}: {exc}") from exc
    return decode_model(blob, source=path)
