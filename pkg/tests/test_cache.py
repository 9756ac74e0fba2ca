import os

from qkdv.cache import RecordCache, code_hash, default_cache_dir, dumps, load_chain, record_document
from qkdv.hamiltonians import br_chain


def test_default_dir_env(monkeypatch, tmp_path):
    monkeypatch.setenv("QKDV_CACHE", str(tmp_path))
    assert default_cache_dir() == tmp_path
    monkeypatch.delenv("QKDV_CACHE")
    monkeypatch.setenv("XDG_CACHE_HOME", str(tmp_path / "xdg"))
    assert default_cache_dir() == tmp_path / "xdg" / "qkdv"


def test_key_contents(tmp_path):
    cache = RecordCache(tmp_path)
    key = cache.key(2)
    assert key.startswith("h2-br-recursion-") and key.endswith(f"-{code_hash()}.json")


def test_round_trip_and_insert_once(tmp_path):
    recs = br_chain(2)
    cache = RecordCache(tmp_path)
    path = cache.store(recs[2])
    text = path.read_text()
    assert text == dumps(record_document(recs[2]))
    back = cache.load(2)
    assert back.density == recs[2].density
    assert back.p0(4) == recs[2].p0(4)
    # a second writer does not replace the first document
    path.chmod(0o444)
    cache.store(recs[2])
    assert path.read_text() == text
    assert [p.name for p in tmp_path.iterdir()] == [path.name]


def test_disabled_cache(tmp_path):
    cache = RecordCache(tmp_path, enabled=False)
    assert cache.store(br_chain(1)[1]) is None
    assert cache.load(2) is None
    assert not os.listdir(tmp_path)


def test_load_chain_transparent(tmp_path):
    cache = RecordCache(tmp_path)
    fresh = load_chain(3, cache)
    again = load_chain(3, cache)
    plain = br_chain(3)
    for m in range(-1, 4):
        assert again[m].density == fresh[m].density == plain[m].density
        assert again[m].constant_convention == plain[m].constant_convention
