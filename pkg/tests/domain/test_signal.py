import numpy as np
import pytest

from core.errors import SignalError
from core.models import Spectrogram
from domain.signal import analysis_window, frame_count, istft, stft


def _relative_rms(a, b):
    return np.sqrt(np.mean((a - b) ** 2)) / np.sqrt(np.mean(b ** 2))


def test_round_trip_on_random_signals(stft_config):
    gen = np.random.default_rng(0)
    for _ in range(20):
        wave = gen.standard_normal(8000)
        assert _relative_rms(istft(stft(wave, stft_config)), wave) < 1e-6


def test_round_trip_keeps_odd_length(stft_config):
    wave = np.random.default_rng(1).standard_normal(1000)
    out = istft(stft(wave, stft_config))
    assert out.shape == wave.shape
    assert _relative_rms(out, wave) < 1e-6


def test_zero_input_gives_zero_spectrogram_and_waveform(stft_config):
    spec = stft(np.zeros(2048), stft_config)
    assert not np.any(spec.data)
    assert not np.any(istft(spec))


def test_sine_peaks_at_expected_bin(stft_config):
    t = np.arange(8000) / 8000.0
    spec = stft(np.sin(2 * np.pi * 1000.0 * t), stft_config)
    # Skip the zero-padded tail frame.
    peaks = np.argmax(np.abs(spec.data[:-1]), axis=1)
    assert np.all(peaks == 32)


def test_impulse_frame_matches_window_spectrum(stft_config):
    wave = np.zeros(1024)
    wave[0] = 1.0
    spec = stft(wave, stft_config)
    expected = np.abs(np.fft.rfft(analysis_window(stft_config) * np.eye(1, 256)[0]))
    assert np.allclose(np.abs(spec.data[0]), expected, atol=1e-6)


def test_shape_and_frame_count(stft_config):
    spec = stft(np.ones(8000), stft_config)
    assert spec.shape == (frame_count(8000, stft_config), 129)
    assert spec.n_frames == 122


def test_too_short_signal_rejected(stft_config):
    with pytest.raises(SignalError, match="shorter than one frame"):
        stft(np.ones(100), stft_config)


def test_multichannel_input_rejected(stft_config):
    with pytest.raises(SignalError):
        stft(np.ones((2, 1000)), stft_config)


def test_spectrogram_too_short_for_original_length_rejected(stft_config):
    spec = Spectrogram(
        data=np.zeros((2, stft_config.n_bins), dtype=complex), config=stft_config, original_len=10_000
    )
    with pytest.raises(SignalError, match="covers"):
        istft(spec)


def test_stft_is_linear(stft_config):
    gen = np.random.default_rng(2)
    for _ in range(10):
        x, y = gen.standard_normal((2, 8000))
        a, b = gen.uniform(-3.0, 3.0, 2)
        combined = stft(a * x + b * y, stft_config).data
        separate = a * stft(x, stft_config).data + b * stft(y, stft_config).data
        assert np.max(np.abs(combined - separate)) < 1e-9


def test_frame_energy_matches_spectrum_energy(stft_config):
    # 8000 samples fill whole frames, so frame t starts at t * hop without padding.
    wave = np.random.default_rng(3).standard_normal(8000)
    spec = stft(wave, stft_config)
    window = analysis_window(stft_config)
    n = stft_config.frame_len
    power = np.abs(spec.data) ** 2
    weights = np.full(power.shape[1], 2.0)
    weights[0] = weights[-1] = 1.0
    for t in range(spec.n_frames):
        frame = wave[t * stft_config.hop : t * stft_config.hop + n] * window
        spectrum_energy = float(power[t] @ weights) / n
        assert spectrum_energy == pytest.approx(float(frame @ frame), rel=1e-6)
