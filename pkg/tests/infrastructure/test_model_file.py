import numpy as np
import pytest

from core.errors import ModelFileError
from domain.mbn import fit, transform
from infrastructure.storage import decode_model, encode_model, load_model, save_model


@pytest.fixture
def fitted(two_blobs, small_mbn_config):
    points, _ = two_blobs
    # float32-representable inputs make the stored centroids exact.
    points = points.astype(np.float32).astype(np.float64)
    return fit(points, small_mbn_config.model_copy(update={"delta": 0.5, "k1": 12})), points


def test_reloaded_model_transforms_identically(tmp_path, fitted):
    model, points = fitted
    path = str(tmp_path / "net.mbnm")
    save_model(model, path)
    loaded = load_model(path)
    assert loaded.k_schedule == model.k_schedule
    assert loaded.config.model_dump(exclude={"output_dim"}) == model.config.model_dump(exclude={"output_dim"})
    assert loaded.config.resolved_output_dim == model.config.resolved_output_dim
    assert np.array_equal(transform(loaded, points), transform(model, points))


def test_encoding_is_stable(fitted):
    model, _ = fitted
    blob = encode_model(model)
    assert blob[:4] == b"MBNM"
    assert encode_model(decode_model(blob)) == blob


def test_corrupt_blobs_rejected(fitted):
    blob = encode_model(fitted[0])
    with pytest.raises(ModelFileError, match="magic"):
        decode_model(b"XXXX" + blob[4:])
    with pytest.raises(ModelFileError, match="version"):
        decode_model(blob[:4] + bytes([9]) + blob[5:])
    with pytest.raises(ModelFileError, match="truncated"):
        decode_model(blob[:-3])
    with pytest.raises(ModelFileError, match="trailing"):
        decode_model(blob + b"\x00")


def test_missing_model_file(tmp_path):
    with pytest.raises(ModelFileError, match="not found"):
        load_model(str(tmp_path / "none.mbnm"))
