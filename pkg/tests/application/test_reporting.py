import numpy as np
import pytest

from application.reporting import eval_frame, render_report, summarize, viz_frame, write_eval_outputs
from core.errors import MetricsError
from domain.metrics import EvalReport


def _reports():
    return [
        EvalReport(
            per_speaker_si_sdr=(10.0, 6.0),
            best_permutation=(1, 0),
            si_sdr_improvement=8.0,
            mixture_si_sdr=(0.5, -0.5),
            mask_accuracy=0.9,
            nmi=0.6,
            name="anechoic_2spk_0000",
        ),
        EvalReport(
            per_speaker_si_sdr=(4.0, 2.0),
            best_permutation=(0, 1),
            si_sdr_improvement=2.0,
            name="anechoic_2spk_0001",
        ),
    ]


def test_eval_frame_rows():
    frame = eval_frame(_reports())
    assert list(frame["mixture"]) == ["anechoic_2spk_0000", "anechoic_2spk_0001"]
    assert frame.loc[0, "per_speaker_si_sdr"] == "10.000000;6.000000"
    assert frame.loc[0, "best_permutation"] == "1;0"
    assert frame.loc[0, "mean_si_sdr"] == 8.0


def test_summary_statistics():
    summary = summarize(_reports())
    assert summary == {"mean_improvement": 5.0, "median_improvement": 5.0, "mean_accuracy": 0.9}
    with pytest.raises(MetricsError):
        summarize([])


def test_outputs_are_byte_identical_across_writes(tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    first.mkdir()
    second.mkdir()
    write_eval_outputs(_reports(), str(first), {"seed": 0})
    write_eval_outputs(_reports(), str(second), {"seed": 0})
    for name in ("eval.csv", "report.txt"):
        assert (first / name).read_bytes() == (second / name).read_bytes()
    lines = (first / "eval.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("mixture,n_sources,mean_si_sdr")
    assert lines[1].startswith("anechoic_2spk_0000,2,8.000000,8.000000")


def test_report_text_mentions_every_mixture():
    text = render_report(_reports(), {"seed": 4})
    assert "mixtures: 2" in text
    assert "settings: seed=4" in text
    assert "anechoic_2spk_0001" in text
    assert "mask accuracy 0.9000" in text
    assert "median SI-SDR improvement: 5.000 dB" in text


def test_viz_frame_is_long_format():
    labels = np.array([0, 1, 1])
    frame = viz_frame(labels, {"embedding": np.zeros((3, 2)), "m_vector": np.ones((3, 2))})
    assert list(frame.columns) == ["unit", "label", "space", "x", "y"]
    assert len(frame) == 6
    assert set(frame["space"]) == {"embedding", "m_vector"}
    with pytest.raises(MetricsError):
        viz_frame(labels, {"flat": np.zeros(3)})
