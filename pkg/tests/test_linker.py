import random

import pytest

from conftest import BLUE, GRAY, GREEN, small_dataset
from tilelink.cellwork import Mapping
from tilelink.errors import ConfigError, EmptyDataset, UnsupportedRelation
from tilelink.geometry import make_geometry, parse_wkt, with_id
from tilelink.linker import LinkConfig, brute_force_link, diff, link
from tilelink.relations import CORE_RELATIONS, Relation
from tilelink.synthetic import mixed_corpus
from tilelink.tiling import Dataset

ALL = [r for r in Relation]


def test_self_link_unit_square():
    sq = make_geometry("Polygon", [[(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)]], "sq")
    m, stats = link(Dataset([sq]), Dataset([sq]), "equals")
    assert m.pairs == {("sq", "sq")}
    assert stats.links == 1


def test_worked_example_within():
    s = Dataset([with_id(parse_wkt(GREEN), "green"), with_id(parse_wkt(BLUE), "blue")])
    t = Dataset([with_id(parse_wkt(GRAY), "gray")])
    m, _ = link(s, t, "within")
    assert m.pairs == {("green", "gray")}


def test_far_apart_corpus():
    s = Dataset([make_geometry("Point", (k, 0), f"s{k}") for k in range(5)])
    t = Dataset([make_geometry("Point", (k, 50), f"t{k}") for k in range(4)])
    assert len(brute_force_link(s, t, "intersects")) == 0
    assert len(link(s, t, "intersects")[0]) == 0
    everything = {(a, b) for a in s.ids for b in t.ids}
    assert brute_force_link(s, t, "disjoint").pairs == everything
    assert link(s, t, "disjoint")[0].pairs == everything


@pytest.mark.parametrize("seed", range(3))
@pytest.mark.parametrize("rel", ALL, ids=lambda r: r.value)
def test_link_matches_brute_force(seed, rel):
    s, t = mixed_corpus(seed=100 + seed, n_source=60, n_target=60, crosser_fraction=0.05)
    m, stats = link(s, t, rel)
    ref = brute_force_link(s, t, rel)
    assert diff(m, ref) == (set(), set())
    assert stats.failures == 0


def test_stats_invariants():
    s, t = mixed_corpus(seed=7, n_source=80, n_target=80)
    for rel in CORE_RELATIONS:
        _, st = link(s, t, rel)
        assert st.full_computations + st.mbb_filtered + st.cache_hits == st.pair_encounters
        assert st.full_computations + st.mbb_filtered <= len(s) * len(t)
        assert st.cells_shared <= st.cells_total
        assert st.time_total >= st.time_link >= 0


def test_shared_cache_mode_matches_owner_mode():
    rng = random.Random(4)
    s, t = small_dataset(rng, 50, "s"), small_dataset(rng, 50, "t")
    for rel in CORE_RELATIONS:
        a, sa = link(s, t, rel, LinkConfig(heuristic="fixed:1", dedup="owner"))
        b, sb = link(s, t, rel, LinkConfig(heuristic="fixed:1", dedup="cache"))
        assert a.pairs == b.pairs
        assert sa.full_computations == sb.full_computations


def test_covers_output_is_source_to_target_when_swapped():
    s = Dataset([make_geometry("Polygon", [[(0, 0), (10, 0), (10, 10), (0, 10), (0, 0)]], "big")])
    t = Dataset([make_geometry("Point", (k, k), f"p{k}") for k in range(1, 4)])
    m, st = link(s, t, "covers")
    assert st.swapped
    m2, st2 = link(s, t, "covers", LinkConfig(swap=False))
    assert not st2.swapped
    assert m.pairs == m2.pairs == {("big", "p1"), ("big", "p2"), ("big", "p3")}


def test_unsound_filter_is_detectable():
    s = Dataset([make_geometry("Polygon", [[(0, 0), (4, 0), (4, 4), (0, 4), (0, 0)]], "a")])
    t = Dataset([make_geometry("Point", (1, 1), "p")])
    good, _ = link(s, t, "covers")
    bad, _ = link(s, t, "covers", LinkConfig(unsound_filter=True))
    assert good.pairs == {("a", "p")}
    assert diff(bad, good) == (set(), {("a", "p")})


def test_mapping_helpers():
    m = Mapping(frozenset({("b", "x"), ("a", "y")}), Relation.WITHIN)
    assert list(m) == [("a", "y"), ("b", "x")]
    assert ("a", "y") in m and len(m) == 2
    r = m.reversed()
    assert r.relation is Relation.CONTAINS and ("y", "a") in r


def test_errors():
    s = Dataset([make_geometry("Point", (0, 0), "a")])
    with pytest.raises(EmptyDataset):
        link(Dataset([]), s, "intersects")
    with pytest.raises(EmptyDataset):
        brute_force_link(s, Dataset([]), "intersects")
    with pytest.raises(UnsupportedRelation):
        link(s, s, "near")
    with pytest.raises(ConfigError):
        LinkConfig(heuristic="mean")
    with pytest.raises(ConfigError):
        LinkConfig(dedup="cache", workers=2)
    with pytest.raises(ConfigError):
        LinkConfig(workers=0)
