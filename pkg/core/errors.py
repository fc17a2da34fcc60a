"""
Error hierarchy for MbnSep.

Every area of the toolkit raises its own subclass of ``MbnsepError`` so the
command-line front-end can report any failure with a single handler while
callers that care can still catch a narrow type.
"""

from __future__ import annotations


class MbnsepError(RuntimeError):
    """Base class for every error raised by the toolkit."""


class ConfigError(MbnsepError):
    """Raised when a configuration document or field fails validation."""


class SignalError(MbnsepError):
    """Raised when STFT analysis or synthesis cannot be performed."""


class AudioIOError(MbnsepError):
    """Raised when a WAV file cannot be read or written."""


class FeatureError(MbnsepError):
    """Raised when feature extraction receives incompatible spectrograms."""


class DpclError(MbnsepError):
    """Raised by the deep-clustering objective and embedders."""


class DimensionMismatchError(MbnsepError):
    """Raised when an input vector does not match the expected dimension."""


class MbnError(MbnsepError):
    """Raised when a Multilayer Bootstrap Network cannot be planned or fitted."""


class InsufficientDataError(MbnError):
    """Raised when there are not enough samples to draw the requested centroids."""


class PcaError(MbnsepError):
    """Raised when the PCA output layer cannot be fitted."""


class KMeansError(MbnsepError):
    """Raised when k-means clustering receives invalid input."""


class MaskError(MbnsepError):
    """Raised when masks cannot be built or applied."""


class MetricsError(MbnsepError):
    """Raised when separation quality cannot be evaluated."""


class SimulationError(MbnsepError):
    """Raised when a mixture cannot be simulated."""


class TensorFileError(MbnsepError):
    """Raised when a tensor file is malformed or cannot be written."""


class ModelFileError(MbnsepError):
    """Raised when a serialized MBN model is malformed or cannot be written."""
