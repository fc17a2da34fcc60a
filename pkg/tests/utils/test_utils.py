import threading

import numpy as np
import pytest

from utils import atomic_write, derive_rng, derive_seed, ordered_map, resolve_workers


def test_ordered_map_keeps_input_order():
    assert ordered_map(lambda x: x * x, range(50), workers=8) == [x * x for x in range(50)]


def test_ordered_map_reraises_item_errors():
    def boom(x):
        if x == 3:
            raise ValueError("three")
        return x

    with pytest.raises(ValueError, match="three"):
        ordered_map(boom, range(6), workers=3)


def test_thread_cap_from_environment(monkeypatch):
    monkeypatch.setenv("MBNSEP_THREADS", "2")
    assert resolve_workers(None) == 2
    assert resolve_workers(16) == 2
    assert resolve_workers(0) == 1

    seen = set()
    ordered_map(lambda _: seen.add(threading.get_ident()), range(20), workers=16)
    assert len(seen) <= 2


def test_derived_streams_are_keyed():
    a = derive_rng(5, 1, 2).standard_normal(4)
    assert np.array_equal(a, derive_rng(5, 1, 2).standard_normal(4))
    assert not np.array_equal(a, derive_rng(5, 2, 1).standard_normal(4))
    assert derive_seed(5, 1) == derive_seed(5, 1)
    assert derive_seed(5, 1) != derive_seed(5, 2)


def test_atomic_write_leaves_target_untouched_on_error(tmp_path):
    path = tmp_path / "out.txt"
    path.write_text("old", encoding="utf-8")
    with pytest.raises(RuntimeError):
        with atomic_write(str(path), "w", encoding="utf-8") as handle:
            handle.write("new")
            raise RuntimeError("interrupted")
    assert path.read_text(encoding="utf-8") == "old"
    assert [p.name for p in tmp_path.iterdir()] == ["out.txt"]


def test_atomic_write_creates_directories(tmp_path):
    path = tmp_path / "a" / "b" / "c.bin"
    with atomic_write(str(path)) as handle:
        handle.write(b"\x01")
    assert path.read_bytes() == b"\x01"
