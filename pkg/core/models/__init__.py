"""Shared domain models."""
from .mbn import (
    KCentroidsClustering,
    MbnLayer,
    MbnModel,
    Metric,
    PcaResult,
    SparseCode,
    check_orthonormal_rows,
)
from .spectrogram import Spectrogram
from .tensors import (
    SINGLE_CHANNEL_LAYOUT,
    SPATIAL_LAYOUT,
    EmbeddingMatrix,
    FeatureTensor,
    IndicatorMatrix,
    MaskSet,
    flatten_units,
    unflatten_units,
)

__all__ = [
    "KCentroidsClustering",
    "MbnLayer",
    "MbnModel",
    "Metric",
    "PcaResult",
    "SparseCode",
    "check_orthonormal_rows",
    "EmbeddingMatrix",
    "FeatureTensor",
    "IndicatorMatrix",
    "MaskSet",
    "SINGLE_CHANNEL_LAYOUT",
    "SPATIAL_LAYOUT",
    "Spectrogram",
    "flatten_units",
    "unflatten_units",
]
