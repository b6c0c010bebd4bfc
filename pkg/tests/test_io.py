import random

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from tilelink.cellwork import Mapping, RunStats
from tilelink.errors import EmptyDataset, IoError
from tilelink.io import GEO_AS_WKT, load_delimited, load_ntriples, read_stats, write_links, write_stats
from tilelink.linker import link
from tilelink.relations import Relation

PRED = f"<{GEO_AS_WKT}>"


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_single_triple(tmp_path):
    p = write(tmp_path, "a.nt", f'<http://ex/a> {PRED} "POINT (1 2)" .\n')
    d = load_ntriples(p)
    assert d.ids == ["http://ex/a"]
    assert d.geometries[0].coords == (1.0, 2.0)
    assert d.rejected == 0


def test_counts_malformed_lines(tmp_path):
    lines = [
        f'<http://ex/a> {PRED} "POINT (1 2)" .',
        f'<http://ex/b> {PRED} "LINESTRING (0 0, 1 1)"^^<http://www.opengis.net/ont/geosparql#wktLiteral> .',
        f'<http://ex/c> {PRED} "<http://www.opengis.net/def/crs/OGC/1.3/CRS84> POINT (3 4)" .',
        "this is not a triple",
        f'<http://ex/d> {PRED} "POLYGON ((0 0, 1 1))" .',
        "# a comment",
        "",
        '<http://ex/e> <http://www.w3.org/2000/01/rdf-schema#label> "ignored" .',
    ]
    d = load_ntriples(write(tmp_path, "m.nt", "\n".join(lines) + "\n"))
    assert len(d) == 3
    assert d.rejected == 2


def test_escapes_and_duplicates(tmp_path, caplog):
    text = (
        f'<http://ex/a> {PRED} "POINT\\t(1 2)" .\n'
        f'<http://ex/a> {PRED} "POINT (5 5)" .\n'
        f'<http://ex/b> {PRED} "POINT \\u0028 3 4 \\u0029" .\n'
    )
    d = load_ntriples(write(tmp_path, "e.nt", text))
    assert d.ids == ["http://ex/a", "http://ex/b"]
    assert d.geometries[0].coords == (1.0, 2.0)  # first record wins
    assert d.geometries[1].coords == (3.0, 4.0)
    assert "duplicate" in caplog.text


def test_custom_predicate(tmp_path):
    p = write(tmp_path, "c.nt", '<x> <http://ex/geom> "POINT (0 0)" .\n<y> <http://ex/other> "POINT (0 0)" .\n')
    assert load_ntriples(p, "http://ex/geom").ids == ["x"]


def test_empty_and_missing(tmp_path):
    with pytest.raises(EmptyDataset):
        load_ntriples(write(tmp_path, "empty.nt", ""))
    with pytest.raises(EmptyDataset):
        load_delimited(write(tmp_path, "empty.tsv", ""), "\t")
    with pytest.raises(IoError):
        load_ntriples(tmp_path / "nope.nt")


def test_delimited(tmp_path):
    d = load_delimited(write(tmp_path, "a.tsv", "a\tPOINT (0 0)\n"), "\t")
    assert d.ids == ["a"]
    csv_text = 'id,wkt\nb,"LINESTRING (0 0, 1 1)"\nc,POLYGON ((0 0, 1 0, 1 1, 0 0))\nbad\n'
    d = load_delimited(write(tmp_path, "b.csv", csv_text), ",")
    assert d.ids == ["b", "c"]
    assert d.rejected == 1


junk = st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=60)


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(st.lists(junk, max_size=12))
def test_fuzzed_lines_never_abort(tmp_path, lines):
    good = "ok\tPOINT (1 1)"
    text = "\n".join(lines + [good]) + "\n"
    p = tmp_path / "fuzz.tsv"
    p.write_text(text, encoding="utf-8", errors="replace")
    d = load_delimited(p, "\t")
    assert "ok" in d.ids
    p.write_bytes(text.encode("utf-8", "replace") + b"\xff\xfe\x00garbage\n")
    try:
        load_ntriples(p)
    except EmptyDataset:
        pass


def test_write_links_formats(tmp_path):
    empty = Mapping(frozenset(), Relation.INTERSECTS)
    write_links(empty, tmp_path / "e.nt")
    assert (tmp_path / "e.nt").read_text() == ""
    m = Mapping(frozenset({("a", "b")}), Relation.INTERSECTS)
    write_links(m, tmp_path / "one.nt", "nt", predicate="pred")
    assert (tmp_path / "one.nt").read_text() == "<a> <pred> <b> .\n"
    write_links(m, tmp_path / "one.tsv", "tsv")
    assert (tmp_path / "one.tsv").read_text() == "a\tb\n"
    write_links(m, tmp_path / "d.nt")
    assert "sfIntersects" in (tmp_path / "d.nt").read_text()
    with pytest.raises(IoError):
        write_links(m, tmp_path / "x", "json")
    with pytest.raises(IoError):
        write_links(m, tmp_path / "missing-dir" / "x.nt")


def test_write_links_counts_and_order(tmp_path):
    rng = random.Random(71)
    for k in range(20):
        pairs = {(f"s{rng.randint(0, 30)}", f"t{rng.randint(0, 30)}") for _ in range(rng.randint(0, 60))}
        m = Mapping(frozenset(pairs), Relation.WITHIN)
        for fmt in ("nt", "tsv"):
            path = tmp_path / f"{k}.{fmt}"
            write_links(m, path, fmt)
            lines = path.read_text().splitlines()
            assert len(lines) == len(pairs)
            if fmt == "nt":
                got = [(ln.split(" ")[0][1:-1], ln.split(" ")[2][1:-1]) for ln in lines]
            else:
                got = [tuple(ln.split("\t")) for ln in lines]
            assert got == sorted(pairs)


def test_round_trip_ids_are_ingested(tmp_path):
    text = "".join(f'<http://ex/s{k}> {PRED} "POLYGON (({k} 0, {k + 2} 0, {k + 2} 2, {k} 2, {k} 0))" .\n' for k in range(6))
    s = load_ntriples(write(tmp_path, "s.nt", text))
    t = load_delimited(write(tmp_path, "t.tsv", "".join(f"t{k}\tPOINT ({k} 1)\n" for k in range(8))), "\t")
    m, _ = link(s, t, "intersects")
    out = tmp_path / "links.nt"
    write_links(m, out)
    for line in out.read_text().splitlines():
        a, _, b, dot = line.split(" ")
        assert a[1:-1] in s.ids and b[1:-1] in t.ids and dot == "."
    assert len(m) > 0


def test_stats_file(tmp_path):
    write_stats(RunStats(), tmp_path / "zero.txt")
    zero = read_stats(tmp_path / "zero.txt")
    assert zero["full_computations"] == "0" and zero["links"] == "0"
    assert (tmp_path / "zero.txt").read_bytes().count(b"\r") == 0
    s = load_delimited(write(tmp_path, "s.tsv", "a\tPOLYGON ((0 0, 2 0, 2 2, 0 2, 0 0))\n"), "\t")
    t = load_delimited(write(tmp_path, "t.tsv", "b\tPOINT (1 1)\nc\tPOINT (5 5)\n"), "\t")
    _, st1 = link(s, t, "intersects")
    _, st2 = link(t, s, "within")
    write_stats(st1, tmp_path / "1.txt")
    write_stats(st2, tmp_path / "2.txt")
    r1, r2 = read_stats(tmp_path / "1.txt"), read_stats(tmp_path / "2.txt")
    assert list(r1) == list(r2) == list(zero)
    assert r1["full_computations"] == str(st1.full_computations)
