"""Shared fixtures."""

import logging

import numpy as np
import pytest

from config.settings import MbnConfig, PipelineConfig, StftConfig


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def stft_config():
    return StftConfig()


@pytest.fixture
def small_mbn_config():
    """A network small enough for unit tests."""
    return MbnConfig(V=24, a=0.9, k1=8, delta=0.0, n_classes=2, seed=3)


@pytest.fixture
def two_blobs():
    """200 points in two tight, far-apart 5-D Gaussian blobs and their labels."""
    gen = np.random.default_rng(7)
    centers = np.array([[0.0] * 5, [12.0] * 5])
    labels = np.repeat([0, 1], 100)
    points = centers[labels] + gen.normal(scale=1.0, size=(200, 5))
    return points, labels


@pytest.fixture
def pipeline_config():
    """Default pipeline with a reduced network and short synthetic sources."""
    return PipelineConfig.model_validate(
        {
            "mbn": {"V": 40, "k1": 20},
            "separation": {"restarts": 3},
            "simulation": {"synth_duration": 0.5},
        }
    )


@pytest.fixture
def mbnsep_log(caplog):
    """Route the toolkit's (non-propagating) logger into caplog."""
    logger = logging.getLogger("mbnsep")
    logger.addHandler(caplog.handler)
    caplog.set_level(logging.DEBUG, logger="mbnsep")
    yield caplog
    logger.removeHandler(caplog.handler)
