import os

import numpy as np
import pytest

from application import pipeline
from config.settings import EmbedderConfig
from core.errors import SimulationError
from domain.simulation import ManifestEntry, MixSpec, generate_manifest
from infrastructure.storage import read_tensor


@pytest.fixture
def oracle_config(pipeline_config):
    return pipeline_config.model_copy(update={"embedder": EmbedderConfig(kind="oracle", sigma=0.0)})


@pytest.fixture
def entries():
    return generate_manifest(2, seed=5)


def test_file_stages_write_every_artifact(tmp_path, oracle_config, entries):
    out_dir = str(tmp_path)
    for entry in entries:
        pipeline.stage_mix(entry, oracle_config, out_dir)
        pipeline.stage_features(entry, oracle_config, out_dir)
        pipeline.stage_embed(entry, oracle_config, out_dir)
        pipeline.stage_separate(entry, oracle_config, out_dir)
    reports = pipeline.evaluate_manifest(entries, oracle_config, out_dir)

    directory = pipeline.mixture_dir(out_dir, entries[0].name)
    for name in ("mix.wav", "ref0.wav", "ref1.wav", "est0.wav", "est1.wav"):
        assert os.path.exists(os.path.join(directory, name))
    features = read_tensor(os.path.join(directory, "features.mbnt"))
    masks = read_tensor(os.path.join(directory, "masks.mbnt"))
    assert features.shape[2] == 3
    assert masks.shape == (2,) + features.shape[:2]
    assert np.array_equal(masks.sum(axis=0), np.ones(features.shape[:2]))
    assert os.path.exists(os.path.join(out_dir, "eval.csv"))
    assert [r.name for r in reports] == [e.name for e in entries]
    # Noiseless oracle embeddings recover the ideal mask.
    assert all(r.mask_accuracy == 1.0 for r in reports)
    assert all(r.si_sdr_improvement > 0 for r in reports)


def test_report_settings_leave_out_the_embedding_sigma(tmp_path, oracle_config, entries):
    out_dir = str(tmp_path)
    entry = entries[0]
    pipeline.stage_mix(entry, oracle_config, out_dir)
    pipeline.stage_features(entry, oracle_config, out_dir)
    pipeline.stage_embed(entry, oracle_config, out_dir)
    pipeline.stage_separate(entry, oracle_config, out_dir)
    noisier = oracle_config.model_copy(update={"embedder": EmbedderConfig(kind="oracle", sigma=0.7)})
    pipeline.evaluate_manifest([entry], noisier, out_dir)
    text = (tmp_path / "report.txt").read_text()
    assert "use_mbn=True" in text
    assert "sigma" not in text


def test_in_memory_chain_is_deterministic(oracle_config, entries):
    first = pipeline.run_manifest(entries, oracle_config, workers=2)
    second = pipeline.run_manifest(entries, oracle_config, workers=1)
    for a, b in zip(first, second):
        assert a.report == b.report
        assert np.array_equal(a.separation.labels, b.separation.labels)


def test_spatial_embedder_runs_without_ground_truth(pipeline_config, entries):
    (outcome,) = pipeline.run_manifest(entries[:1], pipeline_config)
    assert len(outcome.estimates) == 2
    assert outcome.report.mask_accuracy is not None


def test_source_count_must_match_configuration(pipeline_config):
    entry = generate_manifest(1, n_speakers=3)[0]
    with pytest.raises(SimulationError, match="separation.n_sources"):
        pipeline.run_mixture(entry, pipeline_config)


def test_errors_name_the_mixture(tmp_path, pipeline_config):
    entry = ManifestEntry(
        name="broken",
        spec=MixSpec(sources=[str(tmp_path / "absent.wav"), "synth:1"], delays=[0, 1]),
    )
    with pytest.raises(Exception, match=r"\[broken\]"):
        pipeline.for_each_mixture(lambda e, _: pipeline.stage_mix(e, pipeline_config, str(tmp_path)), [entry])
