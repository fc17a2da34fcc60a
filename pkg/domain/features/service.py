"""
Per-unit input features.

For two channels the feature of unit ``i = (t, f)`` is

    [log|y_i1|, log|y_i2|, cos(angle y_i1 - angle y_i2)]

with natural logs of floored magnitudes. Units where either channel is
below the floor carry no phase evidence and get cosIPD = 1.
"""

from __future__ import annotations

import numpy as np

from core.errors import FeatureError
from core.models import SINGLE_CHANNEL_LAYOUT, SPATIAL_LAYOUT, FeatureTensor, Spectrogram

DEFAULT_FLOOR = 1e-8


def _check_pair(spec1: Spectrogram, spec2: Spectrogram) -> None:
    if spec1.shape != spec2.shape:
        raise FeatureError(f"Spectrogram shapes differ: {spec1.shape} vs {spec2.shape}")


def log_magnitude(spec: Spectrogram, floor: float = DEFAULT_FLOOR) -> np.ndarray:
    """Natural log of ``max(|y|, floor)`` per unit."""
    if floor <= 0:
        raise FeatureError(f"Magnitude floor must be positive, got {floor}")
    return np.log(np.maximum(np.abs(spec.data), floor))


def cos_ipd(spec1: Spectrogram, spec2: Spectrogram, floor: float = DEFAULT_FLOOR) -> np.ndarray:
    """
    Cosine of the interchannel phase difference per unit.

    Raises:
        FeatureError: If the two spectrograms differ in shape.
    """
    _check_pair(spec1, spec2)
    diff = np.angle(spec1.data) - np.angle(spec2.data)
    values = np.clip(np.cos(diff), -1.0, 1.0)
    silent = (np.abs(spec1.data) < floor) | (np.abs(spec2.data) < floor)
    values[silent] = 1.0
    return values


def assemble_features(
    spec1: Spectrogram,
    spec2: Spectrogram,
    floor: float = DEFAULT_FLOOR,
) -> FeatureTensor:
    """
    Stack ``[log|y1|, log|y2|, cosIPD]`` into a ``frames x bins x 3`` tensor.

    Raises:
        FeatureError: If the two spectrograms differ in shape.
    """
    _check_pair(spec1, spec2)
    stacked = np.stack(
        [
            log_magnitude(spec1, floor),
            log_magnitude(spec2, floor),
            cos_ipd(spec1, spec2, floor),
        ],
        axis=-1,
    )
    return FeatureTensor(data=stacked, layout=SPATIAL_LAYOUT)


def assemble_log_magnitude_features(spec: Spectrogram, floor: float = DEFAULT_FLOOR) -> FeatureTensor:
    """Single-channel variant: ``frames x bins x 1`` log-magnitude tensor."""
    return FeatureTensor(data=log_magnitude(spec, floor)[..., np.newaxis], layout=SINGLE_CHANNEL_LAYOUT)
