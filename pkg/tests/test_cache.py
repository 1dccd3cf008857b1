import json
import logging

import pytest

from app.cache import cache_key, cache_path, cached_cosets, load_table, save_table, table_from_json, table_to_json
from app.cartan import parse_type
from app.errors import CacheError


def test_round_trip(g2, g2_cosets, cache_dir):
    path = save_table(g2_cosets, cache_dir)
    assert path == cache_path(cache_dir, g2, ())
    assert not path.with_suffix(".tmp").exists()
    loaded = load_table(cache_dir, g2, ())
    assert loaded.grades == g2_cosets.grades
    assert loaded.parabolic == ()


def test_missing_file_is_none(g2, cache_dir):
    assert load_table(cache_dir, g2, ()) is None


def test_key_depends_on_matrix_and_parabolic(g2):
    assert cache_key(g2, ()) == cache_key(g2, [])
    assert cache_key(g2, (2, 1)) == cache_key(g2, [1, 2, 2])
    assert cache_key(g2, ()) != cache_key(g2, (1,))
    assert cache_key(g2, ()) != cache_key(parse_type("B2"), ())
    assert len(cache_key(g2, ())) == 64


def _tampered(g2_cosets, edit):
    doc = json.loads(json.dumps(table_to_json(g2_cosets)))
    edit(doc)
    return doc


@pytest.mark.parametrize(
    "edit",
    [
        lambda d: d.update(schema_version=99),
        lambda d: d.update(parabolic=[1]),
        lambda d: d["grades"][1].update(length=5),
        lambda d: d["grades"][3]["elements"][0].update(word=[2, 1, 2]),
        lambda d: d["grades"][2]["elements"][0].update(word=[1, 1]),
        lambda d: d["grades"][2]["elements"][0].update(image=[0, 0]),
        lambda d: d["grades"][2]["elements"].reverse(),
        lambda d: d["grades"][6]["elements"].clear(),
        lambda d: d["grades"][1]["elements"][0].update(word=[9]),
        lambda d: d["grades"].__setitem__(0, "garbage"),
        lambda d: d.pop("grades"),
    ],
)
def test_tampered_documents_are_rejected(g2, g2_cosets, edit):
    with pytest.raises(CacheError):
        table_from_json(_tampered(g2_cosets, edit), g2, ())


def test_other_matrix_is_rejected(g2_cosets):
    with pytest.raises(CacheError):
        table_from_json(table_to_json(g2_cosets), parse_type("B2"), ())


def test_garbage_file(g2, cache_dir):
    cache_path(cache_dir, g2, ()).write_text("{not json", encoding="utf-8")
    with pytest.raises(CacheError):
        load_table(cache_dir, g2, ())
    cache_path(cache_dir, g2, ()).write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(CacheError):
        load_table(cache_dir, g2, ())


def test_cached_cosets_recovers_from_bad_file(g2, g2_cosets, cache_dir, caplog):
    path = cache_path(cache_dir, g2, ())
    path.write_text("{not json", encoding="utf-8")
    with caplog.at_level(logging.WARNING, logger="app.cache"):
        table = cached_cosets(g2, (), cache_dir=cache_dir)
    assert table.grades == g2_cosets.grades
    assert any("[CACHE] discarding" in rec.getMessage() for rec in caplog.records)
    # rewritten with a valid document
    assert load_table(cache_dir, g2, ()).grades == g2_cosets.grades


def test_cached_cosets_writes_then_reads(cache_dir):
    B3 = parse_type("B3")
    first = cached_cosets(B3, (1,), cache_dir=cache_dir)
    assert cache_path(cache_dir, B3, (1,)).exists()
    second = cached_cosets(B3, [1], cache_dir=str(cache_dir))
    assert second.grades == first.grades


def test_no_cache_dir_writes_nothing(g2, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    cached_cosets(g2, (), cache_dir="")
    cached_cosets(g2, (), cache_dir=None)
    assert list(tmp_path.iterdir()) == []
