import numpy as np
import pytest

from core.errors import AudioIOError
from infrastructure.audio import read_wav, write_wav


def test_float_wav_round_trip(tmp_path):
    data = np.random.default_rng(0).uniform(-0.5, 0.5, (400, 2))
    path = str(tmp_path / "stereo.wav")
    write_wav(path, data)
    loaded = read_wav(path)
    assert loaded.shape == (400, 2)
    assert np.array_equal(loaded, data.astype(np.float32).astype(np.float64))


def test_mono_is_returned_two_dimensional(tmp_path):
    path = str(tmp_path / "mono.wav")
    write_wav(path, np.zeros(100), subtype="PCM_16")
    assert read_wav(path).shape == (100, 1)


def test_other_sample_rates_rejected(tmp_path):
    path = str(tmp_path / "fast.wav")
    write_wav(path, np.zeros(100), sample_rate=16000)
    with pytest.raises(AudioIOError, match="16000"):
        read_wav(path, expected_rate=8000)


def test_write_rejects_too_many_channels(tmp_path):
    with pytest.raises(AudioIOError):
        write_wav(str(tmp_path / "x.wav"), np.zeros((10, 3)))


def test_missing_wav(tmp_path):
    with pytest.raises(AudioIOError, match="not found"):
        read_wav(str(tmp_path / "none.wav"))
