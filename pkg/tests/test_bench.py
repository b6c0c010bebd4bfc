import pytest

from tilelink.bench import (
    HeuristicRow,
    bench_relations,
    format_table,
    heuristic_study,
    mapping_digest,
    summarize_study,
    timed,
    workers_sweep,
)
from tilelink.errors import ConfigError
from tilelink.linker import LinkConfig
from tilelink.synthetic import SyntheticCorpusSpec, clustered_corpus


def test_one_tight_cluster_gives_no_reduction():
    # every box overlaps every other, so the index cannot skip anything
    s, t = clustered_corpus(SyntheticCorpusSpec(source_count=30, target_count=30, clusters=1, spread=0.01,
                                                 size=(1, 2), seed=3))
    (row,) = bench_relations(s, t, ["intersects"], reps=1)
    assert row.indexed_computations == row.naive_computations == 900
    assert row.reduction == pytest.approx(1.0)


def test_indexed_never_exceeds_naive():
    s, t = clustered_corpus(SyntheticCorpusSpec(source_count=60, target_count=60, clusters=6, seed=3))
    rows = bench_relations(s, t, reps=1, naive_limit=500)
    assert {r.relation for r in rows} >= {"intersects", "within", "covers"}
    for r in rows:
        assert r.indexed_computations <= r.naive_computations == 3600
        assert r.naive_estimated  # 3600 pairs is over the sampling limit
        assert r.naive_time > 0


def test_small_corpus_is_timed_directly():
    s, t = clustered_corpus(SyntheticCorpusSpec(source_count=10, target_count=10, seed=1))
    (row,) = bench_relations(s, t, ["within"], reps=1)
    assert not row.naive_estimated


def test_clustered_corpus_is_seeded():
    spec = SyntheticCorpusSpec(source_count=50, target_count=40, seed=12, antimeridian_fraction=0.1)
    a = clustered_corpus(spec)
    b = clustered_corpus(spec)
    assert [g.coords for g in a[0].geometries] == [g.coords for g in b[0].geometries]
    assert len(a[0]) == 50 and len(a[1]) == 40
    assert a[0].ids[0] == "s000000" and a[1].ids[-1] == "t000039"


@pytest.mark.parametrize("bad", [
    dict(source_count=-1),
    dict(clusters=0),
    dict(point_fraction=0.7, line_fraction=0.5),
    dict(window=(10, 0, -10, 5)),
    dict(window=(-200, 0, 0, 5)),
    dict(antimeridian_fraction=1.5),
])
def test_spec_validation(bad):
    with pytest.raises(ConfigError):
        SyntheticCorpusSpec(**bad)


def test_sweep_is_stable():
    s, t = clustered_corpus(SyntheticCorpusSpec(source_count=40, target_count=40, clusters=2, seed=4))
    rows = workers_sweep(s, t, "intersects", (1, 2), LinkConfig(chunk_size=2))
    assert rows[0].digest == rows[1].digest
    assert rows[0].full_computations == rows[1].full_computations


def test_heuristic_study_shape():
    spec = SyntheticCorpusSpec(source_count=30, target_count=30, clusters=2)
    rows = heuristic_study([0, 1], spec, reps=1)
    assert [r.corpus for r in rows] == [0, 1]
    for r in rows:
        assert set(r.times) == {"min", "max", "avg", "median"}
        assert r.times[r.best] == min(r.times.values())
        assert r.avg_ratio >= 1.0
    assert "corpora" in summarize_study(rows)
    assert format_table(rows).splitlines()[0].startswith("corpus\t")


def test_helpers():
    result, secs = timed(lambda: 42, reps=3)
    assert result == 42 and secs >= 0
    assert mapping_digest({("a", "b"), ("c", "d")}) == mapping_digest([("c", "d"), ("a", "b")])
    assert mapping_digest([]) != mapping_digest([("a", "b")])
    assert format_table([]) == ""
    row = HeuristicRow(0, {"avg": 1.2, "max": 1.0}, "max", 1.2)
    assert row.avg_within and not HeuristicRow(0, {}, "max", 1.3).avg_within
