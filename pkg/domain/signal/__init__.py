"""STFT analysis/synthesis services."""
from .service import analysis_window, frame_count, istft, stft

__all__ = ["analysis_window", "frame_count", "istft", "stft"]
