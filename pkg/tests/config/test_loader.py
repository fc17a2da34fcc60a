import pytest

from config import DEFAULT_CONFIG_PATH, load_pipeline_config, override_config, parse_config_text
from config.environment import get_thread_count
from core.errors import ConfigError


def test_default_document_loads_reference_hyperparameters():
    config = load_pipeline_config()
    assert (config.mbn.V, config.mbn.a, config.mbn.k1, config.mbn.delta) == (400, 0.9, 20, 0.0)
    assert config.stft.frame_len == 256 and config.stft.hop == 64


def test_parse_types_values_and_nests_keys():
    tree = parse_config_text(
        "seed = 4\nmbn.a = 0.5  # fraction\nseparation.vad = off\nembedder.kind = 'oracle'\n"
    )
    assert tree == {"seed": 4, "mbn": {"a": 0.5}, "separation": {"vad": False}, "embedder": {"kind": "oracle"}}


@pytest.mark.parametrize(
    "text",
    ["mbn.k1 20", "mbn.k1 = 20\nmbn.k1 = 30", "mbn = 3\nmbn.k1 = 20", "mbn..k1 = 2"],
)
def test_malformed_documents_rejected(text):
    with pytest.raises(ConfigError):
        parse_config_text(text, source="bad.conf")


def test_validation_error_names_file_and_field(tmp_path):
    path = tmp_path / "bad.conf"
    path.write_text("mbn.delta = 1.5\n", encoding="utf-8")
    with pytest.raises(ConfigError) as excinfo:
        load_pipeline_config(str(path))
    assert "bad.conf" in str(excinfo.value)
    assert "mbn.delta" in str(excinfo.value)


def test_missing_file_is_config_error(tmp_path):
    with pytest.raises(ConfigError, match="Cannot read"):
        load_pipeline_config(str(tmp_path / "nope.conf"))


def test_override_revalidates():
    config = load_pipeline_config(DEFAULT_CONFIG_PATH)
    assert override_config(config, {"separation.use_mbn": False}).separation.use_mbn is False
    with pytest.raises(ConfigError):
        override_config(config, {"separation.restarts": 0})


def test_thread_cap_from_environment(monkeypatch):
    monkeypatch.setenv("MBNSEP_THREADS", "3")
    assert get_thread_count() == 3
    monkeypatch.setenv("MBNSEP_THREADS", "zero")
    assert get_thread_count() >= 1
