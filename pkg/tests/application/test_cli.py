import numpy as np
import pandas as pd
import pytest

from application.cli import main
from infrastructure.storage import read_tensor, write_tensor

SMALL_CONFIG = """\
mbn.V = 40
mbn.k1 = 20
separation.restarts = 3
simulation.synth_duration = 0.5
"""


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / "small.conf"
    path.write_text(SMALL_CONFIG, encoding="utf-8")
    return str(path)


def _run_dataset(tmp_path, config_path, out_name):
    manifest = str(tmp_path / "manifest.csv")
    out_dir = str(tmp_path / out_name)
    common = ["--config", config_path, "--seed", "3"]
    assert main(["manifest", "--out", manifest, "--count", "2", *common]) == 0
    dataset = ["--manifest", manifest, "--out-dir", out_dir, *common]
    assert main(["mix", *dataset]) == 0
    assert main(["features", *dataset]) == 0
    assert main(["embed", *dataset, "--oracle", "--sigma", "0"]) == 0
    assert main(["separate", *dataset]) == 0
    assert main(["eval", *dataset]) == 0
    return tmp_path / out_name


def test_noiseless_oracle_run_is_perfect_and_reproducible(tmp_path, config_path):
    first = _run_dataset(tmp_path, config_path, "run1")
    second = _run_dataset(tmp_path, config_path, "run2")
    frame = pd.read_csv(first / "eval.csv")
    assert len(frame) == 2
    assert (frame["mask_accuracy"] == 1.0).all()
    assert (first / "eval.csv").read_bytes() == (second / "eval.csv").read_bytes()
    assert (first / "report.txt").exists()


def test_viz_exports_coordinates(tmp_path, config_path):
    out_dir = _run_dataset(tmp_path, config_path, "run")
    manifest = str(tmp_path / "manifest.csv")
    assert main(["viz", "--manifest", manifest, "--out-dir", str(out_dir), "--config", config_path]) == 0
    name = pd.read_csv(manifest)["name"][0]
    frame = pd.read_csv(out_dir / name / "viz.csv")
    assert list(frame.columns) == ["unit", "label", "space", "x", "y"]


def test_mbn_fit_and_transform(tmp_path, two_blobs, mbnsep_log):
    points, _ = two_blobs
    conf = tmp_path / "mbn.conf"
    conf.write_text("mbn.V = 10\nmbn.k1 = 8\n", encoding="utf-8")
    data, model, out = (str(tmp_path / name) for name in ("x.mbnt", "m.mbnm", "y.mbnt"))
    write_tensor(data, points)

    assert main(["mbn", "fit", "--input", data, "--model", model, "--config", str(conf)]) == 0
    assert "Saved model with 1 hidden layer (k schedule [8])" in mbnsep_log.text

    assert main(["mbn", "transform", "--model", model, "--input", data, "--output", out]) == 0
    assert read_tensor(out).shape == (200, 2)


def test_sweep_writes_table(tmp_path):
    conf = tmp_path / "sweep.conf"
    conf.write_text("mbn.V = 10\nmbn.k1 = 12\nembedder.dim = 8\nseparation.restarts = 2\n", encoding="utf-8")
    out = tmp_path / "sweep.csv"
    args = ["sweep", "--deltas", "0,0.5", "--out", str(out), "--n", "200", "--seeds", "1", "--config", str(conf)]
    assert main(args) == 0
    frame = pd.read_csv(out)
    assert frame["n_layers"].tolist() == [1, 2]


def test_toolkit_errors_exit_with_status_one(tmp_path, mbnsep_log):
    missing = str(tmp_path / "none.mbnm")
    assert main(["mbn", "transform", "--model", missing, "--input", "x", "--output", "y"]) == 1
    assert "ModelFileError" in mbnsep_log.text
    assert main(["sweep", "--deltas", "a,b", "--out", str(tmp_path / "s.csv")]) == 1


def test_bad_config_exits_with_status_one(tmp_path):
    conf = tmp_path / "bad.conf"
    conf.write_text("mbn.k1 = 1\n", encoding="utf-8")
    assert main(["manifest", "--out", str(tmp_path / "m.csv"), "--config", str(conf)]) == 1


def test_usage_errors_exit_with_status_two():
    with pytest.raises(SystemExit) as excinfo:
        main(["separate"])
    assert excinfo.value.code == 2
