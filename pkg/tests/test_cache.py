"""Tests for the JSON-lines value cache."""
import json
from concurrent.futures import ProcessPoolExecutor

import pytest
from mpmath import mpf
from tvk._cache import FILENAME, CacheRecord, ValueCache
from tvk._index import Index
from tvk._numerics import BigComplex

pytestmark = pytest.mark.numeric


@pytest.fixture
def cache(tmp_path):
    return ValueCache(tmp_path)


def put(cache, index, digits, value="1.5", kind="ttilde", s=None):
    return cache.put_value(
        kind, Index(index), BigComplex(mpf(value), mpf("1e-40")), digits, "series", s
    )


def test_missing_file_has_no_records(cache):
    assert list(cache.records()) == []
    assert cache.get("ttilde", Index((2,))) is None


def test_put_and_get(cache):
    put(cache, (2,), 30)

    record = cache.get("ttilde", Index((2,)), digits=30)

    assert record.index == [2]
    assert record.s is None
    assert mpf(record.re) == mpf("1.5")
    assert mpf(record.im) == 0


def test_records_with_more_digits_win(cache):
    put(cache, (2,), 20, value="1.25")
    put(cache, (2,), 40, value="1.5")
    put(cache, (2,), 30, value="1.75")

    assert cache.get("ttilde", Index((2,))).digits == 40
    assert cache.get("ttilde", Index((2,)), digits=50) is None


def test_keys_include_kind_and_s(cache):
    put(cache, (2,), 20, kind="lambda", s=2)

    assert cache.get("lambda", Index((2,)), s=2) is not None
    assert cache.get("lambda", Index((2,)), s=3) is None
    assert cache.get("ttilde", Index((2,))) is None


def test_unreadable_lines_are_skipped(cache, caplog):
    put(cache, (2,), 20)
    with cache.path.open("a", encoding="utf-8") as f:
        f.write("not json\n")
        f.write(json.dumps({"kind": "mystery"}) + "\n")
    put(cache, (3,), 20)

    records = list(cache.records())

    assert [r.index for r in records] == [[2], [3]]
    assert "Skipping unreadable cache line 2" in caplog.text


def test_unknown_kind_is_rejected():
    line = json.dumps(
        {
            "kind": "zeta",
            "index": [2],
            "s": None,
            "digits": 10,
            "re": "1",
            "im": "0",
            "err": "0",
            "method": "series",
            "created": "2026-01-01T00:00:00+00:00",
        }
    )
    with pytest.raises(ValueError):
        CacheRecord.from_line(line)


def test_stats_and_clear(cache, tmp_path):
    put(cache, (2,), 20)
    put(cache, (2,), 30)
    put(cache, (1, 2), 20, kind="apoly1")

    stats = cache.stats()

    assert stats["records"] == 3
    assert stats["keys"] == 2
    assert stats["by_kind"] == {"ttilde": 2, "apoly1": 1, "lambda": 0}
    assert stats["oldest"] <= stats["newest"]
    assert cache.clear() == 3
    assert not (tmp_path / FILENAME).exists()
    assert cache.stats()["oldest"] is None


def test_put_leaves_no_temporary_files(cache, tmp_path):
    put(cache, (2,), 20)
    put(cache, (3,), 20)

    assert [p.name for p in tmp_path.iterdir()] == [FILENAME]


def test_torn_last_line_does_not_swallow_the_next_record(cache):
    put(cache, (2,), 20)
    with cache.path.open("a", encoding="utf-8") as f:
        f.write('{"kind": "ttilde", "ind')
    put(cache, (3,), 20)

    assert [r.index for r in cache.records()] == [[2], [3]]


def put_many(directory, worker, count):
    cache = ValueCache(directory)
    for n in range(count):
        put(cache, (worker + 1, n + 1), 20)


def test_concurrent_writers_keep_every_record(tmp_path):
    workers, count = 4, 50
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(put_many, tmp_path, w, count) for w in range(workers)]
        for future in futures:
            future.result()

    records = list(ValueCache(tmp_path).records())

    assert len(records) == workers * count
    assert len({r.key for r in records}) == workers * count
