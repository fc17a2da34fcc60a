"""
Infrastructure: WAV I/O and the on-disk tensor, model and manifest formats.
"""
