"""
Audio infrastructure package.

WAV file input/output used by the mixture simulator and the batch front-end.
"""

from .wav import WavSubtype, read_wav, write_wav

__all__ = ["WavSubtype", "read_wav", "write_wav"]
