import json
import logging

from formclass import cache


def test_roundtrip_and_hit(tmp_path):
    calls = []

    def compute():
        calls.append(1)
        return {"b": [1, 2], "a": 3}

    v1, hit1 = cache.cached("op", {"x": 1}, compute, tmp_path)
    v2, hit2 = cache.cached("op", {"x": 1}, compute, tmp_path)
    assert (hit1, hit2) == (False, True)
    assert v1 == v2 == {"a": 3, "b": [1, 2]}
    assert len(calls) == 1
    assert len(list(tmp_path.glob("*.json"))) == 1


def test_key_depends_on_version_and_params():
    k = cache.cache_key("op", {"x": 1})
    assert k == cache.cache_key("op", {"x": 1})
    assert k != cache.cache_key("op", {"x": 2})
    assert k != cache.cache_key("op", {"x": 1}, version="999")


def test_corrupt_entry_is_recomputed(tmp_path, caplog):
    cache.cached("op", {}, lambda: [1], tmp_path)
    path = next(tmp_path.glob("*.json"))
    path.write_text("{not json")
    with caplog.at_level(logging.WARNING):
        v, hit = cache.cached("op", {}, lambda: [2], tmp_path)
    assert v == [2] and not hit
    assert "corrupt" in caplog.text
    assert json.loads(path.read_text())["value"] == [2]


def test_env_override(monkeypatch, tmp_path):
    monkeypatch.setenv(cache.ENV_VAR, str(tmp_path / "x"))
    assert cache.cache_dir() == tmp_path / "x"
    monkeypatch.delenv(cache.ENV_VAR)
    assert str(cache.cache_dir()) == ".formclass-cache"


def test_dumps_is_canonical():
    assert cache.dumps({"b": 1, "a": 2}) == cache.dumps({"a": 2, "b": 1})
