"""Dataset loaders (N-Triples subset, delimited text) and link / stats writers.

Loaders never abort on bad content: every malformed line or unusable WKT
literal is counted in ``Dataset.rejected`` and logged.  Only unreadable
files (``IoError``) and files without a single usable record
(``EmptyDataset``) raise.
"""

from __future__ import annotations

import csv
import logging
import re
import sys
from pathlib import Path

from .cellwork import Mapping, RunStats
from .errors import EmptyDataset, GeometryError, IoError
from .geometry import Geometry, parse_wkt, with_id
from .relations import Relation
from .tiling import Dataset

log = logging.getLogger(__name__)

GEO_AS_WKT = "http://www.opengis.net/ont/geosparql#asWKT"
GEO = "http://www.opengis.net/ont/geosparql#"

DEFAULT_PREDICATES = {
    Relation.EQUALS: GEO + "sfEquals",
    Relation.INTERSECTS: GEO + "sfIntersects",
    Relation.TOUCHES: GEO + "sfTouches",
    Relation.CROSSES: GEO + "sfCrosses",
    Relation.OVERLAPS: GEO + "sfOverlaps",
    Relation.WITHIN: GEO + "sfWithin",
    Relation.CONTAINS: GEO + "sfContains",
    Relation.DISJOINT: GEO + "sfDisjoint",
    # the simple-features family has no covers/coveredBy; use the Egenhofer names
    Relation.COVERS: GEO + "ehCovers",
    Relation.COVERED_BY: GEO + "ehCoveredBy",
}

DELIMITERS = {"tsv": "\t", "csv": ","}

_IRI = r"<([^<>\"{}|^`\\\x00-\x20]*)>"
_NODE = r"(?:<[^<>\"{}|^`\\\x00-\x20]*>|_:[A-Za-z0-9_.\-]+)"
_LITERAL = r"\"((?:[^\"\\\n\r]|\\.)*)\"(?:\^\^<([^<>]*)>|@[A-Za-z]+(?:-[A-Za-z0-9]+)*)?"
_TRIPLE = re.compile(
    rf"^\s*({_NODE})\s*{_IRI}\s*(?:{_LITERAL}|({_NODE}))\s*\.\s*(?:#.*)?$"
)
_ESCAPE = re.compile(r"\\(?:u([0-9A-Fa-f]{4})|U([0-9A-Fa-f]{8})|(.))", re.S)
_SIMPLE_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}
_CRS_PREFIX = re.compile(r"^\s*<([^<>]*)>\s*")
_warned_crs = False


def _unescape(text: str) -> str:
    def sub(m: re.Match) -> str:
        if m.group(1) or m.group(2):
            return chr(int(m.group(1) or m.group(2), 16))
        c = m.group(3)
        if c not in _SIMPLE_ESCAPES:
            raise ValueError(f"bad escape \\{c}")
        return _SIMPLE_ESCAPES[c]

    return _ESCAPE.sub(sub, text)


def _strip_crs(wkt: str) -> str:
    global _warned_crs
    m = _CRS_PREFIX.match(wkt)
    if not m:
        return wkt
    if not _warned_crs:
        log.warning("ignoring CRS IRI <%s> in WKT literal; coordinates are taken as lon/lat", m.group(1))
        _warned_crs = True
    return wkt[m.end():]


def _open(path):
    try:
        return open(path, encoding="utf-8", errors="replace", newline="")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc


class _Collector:
    """Keeps records in file order, counting and logging rejections."""

    def __init__(self, path, label: str):
        self.path = path
        self.label = label
        self.records: list[Geometry] = []
        self.seen: set[str] = set()
        self.rejected = 0

    def reject(self, lineno: int, why: str) -> None:
        self.rejected += 1
        log.debug("%s:%d rejected: %s", self.path, lineno, why)

    def add(self, lineno: int, rid: str, wkt: str) -> None:
        if not rid:
            self.reject(lineno, "empty id")
            return
        if rid in self.seen:
            log.warning("%s:%d duplicate id %s; keeping the first record", self.path, lineno, rid)
            return
        try:
            g = parse_wkt(_strip_crs(wkt))
        except GeometryError as exc:
            self.reject(lineno, f"{type(exc).__name__}: {exc}")
            return
        except RecursionError:
            self.reject(lineno, "WKT nested too deeply")
            return
        self.seen.add(rid)
        self.records.append(with_id(g, rid))

    def dataset(self) -> Dataset:
        if self.rejected:
            log.warning("%s: %d line(s) rejected", self.path, self.rejected)
        if not self.records:
            raise EmptyDataset(f"{self.path}: no valid geometry records")
        return Dataset(self.records, self.label, self.rejected)


def load_ntriples(path, geometry_predicate: str = GEO_AS_WKT, label: str = "source") -> Dataset:
    """Read ``<subject> <geometry_predicate> "WKT"`` triples, one per line.

    Triples with other predicates are ignored.  Comments and blank lines are
    skipped.  A datatype suffix on the literal and a leading CRS IRI inside
    it are accepted.
    """
    col = _Collector(path, label)
    with _open(path) as fh:
        try:
            for lineno, line in enumerate(fh, 1):
                stripped = line.strip()
                if not stripped or stripped.startswith("#"):
                    continue
                m = _TRIPLE.match(stripped)
                if not m:
                    col.reject(lineno, "not an N-Triples statement")
                    continue
                subject, predicate, literal, _dtype, obj_node = m.groups()
                if predicate != geometry_predicate:
                    continue
                if literal is None:
                    col.reject(lineno, f"object of {predicate} is not a literal")
                    continue
                if subject.startswith("_:"):
                    col.reject(lineno, "blank-node subjects are not supported")
                    continue
                try:
                    wkt = _unescape(literal)
                except ValueError as exc:
                    col.reject(lineno, str(exc))
                    continue
                col.add(lineno, subject[1:-1], wkt)
        except OSError as exc:
            raise IoError(f"error while reading {path}: {exc}") from exc
    return col.dataset()


_HEADER_NAMES = {"wkt", "geometry", "geom", "the_geom", "shape"}


def load_delimited(path, delimiter: str = "\t", label: str = "source") -> Dataset:
    """Read ``id<delim>WKT`` rows; extra columns are glued back onto the WKT.

    Each physical line is one record (quoted fields may not span lines).
    A first row whose second column is a geometry column name is a header.
    """
    if len(delimiter) != 1:
        raise IoError(f"delimiter must be a single character, got {delimiter!r}")
    csv.field_size_limit(min(sys.maxsize, 2**31 - 1))
    col = _Collector(path, label)
    with _open(path) as fh:
        try:
            for lineno, line in enumerate(fh, 1):
                text = line.rstrip("\r\n")
                if not text.strip() or text.lstrip().startswith("#"):
                    continue
                try:
                    row = next(csv.reader([text.replace("\x00", "")], delimiter=delimiter))
                except (csv.Error, StopIteration) as exc:
                    col.reject(lineno, f"unparseable row: {exc}")
                    continue
                if len(row) < 2:
                    col.reject(lineno, "expected id and WKT columns")
                    continue
                rid = row[0].strip()
                wkt = delimiter.join(row[1:]).strip()
                if lineno == 1 and wkt.lower() in _HEADER_NAMES:
                    continue
                col.add(lineno, rid, wkt)
        except OSError as exc:
            raise IoError(f"error while reading {path}: {exc}") from exc
    return col.dataset()


def load_dataset(path, fmt: str, label: str = "source", geometry_predicate: str = GEO_AS_WKT) -> Dataset:
    if fmt == "nt":
        return load_ntriples(path, geometry_predicate, label)
    if fmt in DELIMITERS:
        return load_delimited(path, DELIMITERS[fmt], label)
    raise IoError(f"unknown input format {fmt!r}")


def _iri(value: str) -> str:
    # percent-encode characters that cannot appear inside <...>
    out = []
    for ch in value:
        if ch in '<>"{}|^`\\' or ord(ch) <= 0x20:
            out.append("".join(f"%{b:02X}" for b in ch.encode("utf-8")))
        else:
            out.append(ch)
    return "<" + "".join(out) + ">"


def write_links(m: Mapping, path, fmt: str = "nt", predicate: str | None = None) -> None:
    """Write one line per pair in lexicographic order (``nt`` triples or ``source<TAB>target``)."""
    if fmt not in ("nt", "tsv"):
        raise IoError(f"unknown output format {fmt!r}")
    pred = _iri(predicate or DEFAULT_PREDICATES[m.relation])
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for s, t in m.sorted_pairs():
                if fmt == "nt":
                    fh.write(f"{_iri(s)} {pred} {_iri(t)} .\n")
                else:
                    fh.write(f"{s}\t{t}\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def format_stats(stats: RunStats) -> str:
    lines = []
    for key, value in stats.as_dict().items():
        if isinstance(value, bool):
            value = str(value).lower()
        lines.append(f"{key}={value}")
    return "\n".join(lines) + "\n"


def write_stats(stats: RunStats, path) -> None:
    """Flat ``key=value`` report, one line per RunStats field in declaration order."""
    try:
        Path(path).write_text(format_stats(stats), encoding="utf-8", newline="\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def read_stats(path) -> dict[str, str]:
    out = {}
    with _open(path) as fh:
        for line in fh:
            key, sep, value = line.rstrip("\n").partition("=")
            if sep:
                out[key] = value
    return out
