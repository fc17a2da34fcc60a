import numpy as np
import pytest

from core.errors import DpclError, FeatureError, MaskError
from core.models import (
    EmbeddingMatrix,
    FeatureTensor,
    IndicatorMatrix,
    MaskSet,
    flatten_units,
    unflatten_units,
)


def test_flatten_is_row_major_over_frames_then_bins():
    grid = np.arange(6).reshape(2, 3)
    assert flatten_units(grid).tolist() == [0, 1, 2, 3, 4, 5]
    assert np.array_equal(unflatten_units(flatten_units(grid), 2, 3), grid)


def test_unflatten_rejects_wrong_count():
    with pytest.raises(FeatureError):
        unflatten_units(np.zeros(5), 2, 3)


def test_feature_tensor_rejects_out_of_range_cos_ipd():
    data = np.zeros((2, 3, 3))
    data[0, 0, 2] = 1.5
    with pytest.raises(FeatureError, match="cosIPD"):
        FeatureTensor(data)


def test_feature_tensor_rejects_non_finite():
    data = np.zeros((2, 3, 3))
    data[1, 1, 0] = np.nan
    with pytest.raises(FeatureError):
        FeatureTensor(data)


def test_indicator_from_labels_is_one_hot():
    indicator = IndicatorMatrix.from_labels(np.array([0, 2, 1, 2]), 3)
    assert indicator.data.sum(axis=1).tolist() == [1, 1, 1, 1]
    assert indicator.labels().tolist() == [0, 2, 1, 2]


def test_embedding_matrix_requires_unit_rows():
    with pytest.raises(DpclError):
        EmbeddingMatrix(np.array([[1.0, 1.0]]))
    EmbeddingMatrix(np.array([[0.6, 0.8]]))


@pytest.mark.parametrize(
    "masks",
    [
        np.array([[[1.0, 1.0]], [[1.0, 0.0]]]),  # overlap
        np.array([[[0.5, 1.0]], [[0.5, 0.0]]]),  # not binary
        np.array([[[0.0, 1.0]], [[0.0, 0.0]]]),  # hole
    ],
)
def test_mask_set_rejects_non_partitions(masks):
    with pytest.raises(MaskError):
        MaskSet(masks)


def test_random_label_masks_always_partition():
    gen = np.random.default_rng(0)
    for _ in range(200):
        n_sources = int(gen.integers(2, 6))
        labels = gen.integers(0, n_sources, size=(4, 5))
        masks = (labels[None] == np.arange(n_sources)[:, None, None]).astype(float)
        assert np.array_equal(MaskSet(masks).masks.sum(axis=0), np.ones((4, 5)))
