"""Geometry model, WKT reading/writing and minimum bounding boxes.

Coordinates are ``(lon, lat)`` in degrees, in WKT axis order.  Geometries are
immutable; nested coordinate tuples follow the GeoJSON layout::

    Point            Point
    LineString       (Point, ...)
    Polygon          ((Point, ...), ...)        exterior ring first
    MultiPoint       (Point, ...)
    MultiLineString  ((Point, ...), ...)
    MultiPolygon     (((Point, ...), ...), ...)
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, NamedTuple

from .errors import InvalidGeometry, UnsupportedKind, WKTSyntaxError
from .predicates import EPS, dedup_consecutive, ring_is_simple, same_point, signed_area, unwrap_lon

KINDS = ("Point", "LineString", "Polygon", "MultiPoint", "MultiLineString", "MultiPolygon")
_TAGS = {k.upper(): k for k in KINDS}
# valid OGC / ISO tags this library does not model
_OTHER_TAGS = {
    "GEOMETRYCOLLECTION", "CIRCULARSTRING", "COMPOUNDCURVE", "CURVEPOLYGON", "MULTICURVE",
    "MULTISURFACE", "CURVE", "SURFACE", "POLYHEDRALSURFACE", "TIN", "TRIANGLE", "GEOMETRY",
}
_DIMENSION = {
    "Point": 0,
    "MultiPoint": 0,
    "LineString": 1,
    "MultiLineString": 1,
    "Polygon": 2,
    "MultiPolygon": 2,
}


class Point(NamedTuple):
    lon: float
    lat: float


@dataclass(frozen=True)
class MBB:
    lon_min: float
    lat_min: float
    lon_max: float
    lat_max: float

    @property
    def width(self) -> float:
        return self.lon_max - self.lon_min

    @property
    def height(self) -> float:
        return self.lat_max - self.lat_min

    def intersects(self, other: MBB, eps: float = EPS) -> bool:
        return not (
            self.lon_max + eps < other.lon_min
            or other.lon_max + eps < self.lon_min
            or self.lat_max + eps < other.lat_min
            or other.lat_max + eps < self.lat_min
        )

    def contains(self, other: MBB, eps: float = EPS) -> bool:
        """Closed containment: ``other`` lies inside (or on the edge of) ``self``."""
        return (
            self.lon_min <= other.lon_min + eps
            and self.lat_min <= other.lat_min + eps
            and self.lon_max + eps >= other.lon_max
            and self.lat_max + eps >= other.lat_max
        )

    def same_as(self, other: MBB, eps: float = EPS) -> bool:
        return (
            abs(self.lon_min - other.lon_min) <= eps
            and abs(self.lat_min - other.lat_min) <= eps
            and abs(self.lon_max - other.lon_max) <= eps
            and abs(self.lat_max - other.lat_max) <= eps
        )

    def union(self, other: MBB) -> MBB:
        return MBB(
            min(self.lon_min, other.lon_min),
            min(self.lat_min, other.lat_min),
            max(self.lon_max, other.lon_max),
            max(self.lat_max, other.lat_max),
        )


@dataclass(frozen=True)
class Geometry:
    kind: str
    coords: tuple
    id: str | None = field(default=None, compare=False)

    @property
    def dimension(self) -> int:
        """Topological dimension: 0 for puntal, 1 for lineal, 2 for areal kinds."""
        return _DIMENSION[self.kind]

    @property
    def is_multi(self) -> bool:
        return self.kind.startswith("Multi")

    @cached_property
    def points(self) -> tuple:
        """Puntal members (empty for other kinds)."""
        if self.kind == "Point":
            return (self.coords,)
        if self.kind == "MultiPoint":
            return self.coords
        return ()

    @cached_property
    def lines(self) -> tuple:
        if self.kind == "LineString":
            return (self.coords,)
        if self.kind == "MultiLineString":
            return self.coords
        return ()

    @cached_property
    def polygons(self) -> tuple:
        if self.kind == "Polygon":
            return (self.coords,)
        if self.kind == "MultiPolygon":
            return self.coords
        return ()

    def vertices(self) -> Iterator[Point]:
        yield from self.points
        for line in self.lines:
            yield from line
        for poly in self.polygons:
            for ring in poly:
                yield from ring

    @cached_property
    def mbb(self) -> MBB:
        return mbb(self)

    def __str__(self) -> str:
        return to_wkt(self)


def mbb(g: Geometry) -> MBB:
    """Tight axis-aligned bounding box of ``g``."""
    it = g.vertices()
    first = next(it)
    x0 = x1 = first[0]
    y0 = y1 = first[1]
    for p in it:
        x, y = p[0], p[1]
        if x < x0:
            x0 = x
        elif x > x1:
            x1 = x
        if y < y0:
            y0 = y
        elif y > y1:
            y1 = y
    return MBB(x0, y0, x1, y1)


# -- construction & validation -------------------------------------------------


def _check_coord(p) -> Point:
    lon, lat = float(p[0]), float(p[1])
    if not (math.isfinite(lon) and math.isfinite(lat)):
        raise InvalidGeometry(f"non-finite coordinate ({lon} {lat})")
    if not (-180.0 <= lon <= 180.0):
        raise InvalidGeometry(f"longitude {lon} outside [-180, 180]")
    if not (-90.0 <= lat <= 90.0):
        raise InvalidGeometry(f"latitude {lat} outside [-90, 90]")
    return Point(lon, lat)


def _check_line(coords) -> tuple:
    pts = tuple(_check_coord(p) for p in coords)
    if len(pts) < 2:
        raise InvalidGeometry("a LineString needs at least 2 points")
    if len(dedup_consecutive(pts)) < 2:
        raise InvalidGeometry("a LineString needs 2 distinct points")
    return pts


def _check_ring(coords) -> tuple:
    pts = tuple(_check_coord(p) for p in coords)
    if len(pts) < 4:
        raise InvalidGeometry("a polygon ring needs at least 4 points")
    if pts[0] != pts[-1]:
        raise InvalidGeometry("polygon ring is not closed")
    frame = pts
    if any(abs(pts[i + 1][0] - pts[i][0]) > 180.0 for i in range(len(pts) - 1)):
        # antimeridian crosser: judge it on the unwrapped circle, unless it
        # winds around a pole (then it is only meaningful as a planar ring)
        unwrapped = unwrap_lon(pts)
        if unwrapped[0] == unwrapped[-1]:
            frame = unwrapped
    if not ring_is_simple(frame):
        raise InvalidGeometry("polygon ring self-intersects")
    if abs(signed_area(frame)) <= EPS * EPS:
        raise InvalidGeometry("polygon ring has zero area")
    return pts


def _check_polygon(rings) -> tuple:
    rings = tuple(_check_ring(r) for r in rings)
    if not rings:
        raise InvalidGeometry("a Polygon needs an exterior ring")
    return rings


def make_geometry(kind: str, coords, id: str | None = None) -> Geometry:
    """Validate raw nested coordinates and build a :class:`Geometry`."""
    if kind not in KINDS:
        raise UnsupportedKind(kind)
    if kind == "Point":
        c = _check_coord(coords)
    elif kind == "LineString":
        c = _check_line(coords)
    elif kind == "Polygon":
        c = _check_polygon(coords)
    else:
        members = tuple(coords)
        if not members:
            raise InvalidGeometry(f"{kind} needs at least one member")
        if kind == "MultiPoint":
            c = tuple(_check_coord(p) for p in members)
        elif kind == "MultiLineString":
            c = tuple(_check_line(m) for m in members)
        else:
            c = tuple(_check_polygon(m) for m in members)
    return Geometry(kind, c, id)


# -- WKT ------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)|(?P<word>[A-Za-z]+)|(?P<punct>[(),])|(?P<bad>\S))"
)
_NONFINITE = {"nan", "inf", "infinity"}


class _Lexer:
    def __init__(self, text: str):
        self.tokens: list[tuple[str, str]] = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:  # only trailing whitespace left
                break
            pos = m.end()
            kind = m.lastgroup
            if kind == "bad":
                raise WKTSyntaxError(f"unexpected character {m.group('bad')!r} at offset {m.start('bad')}")
            self.tokens.append((kind, m.group(kind)))
        self.i = 0

    def peek(self) -> tuple[str, str] | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self) -> tuple[str, str]:
        tok = self.peek()
        if tok is None:
            raise WKTSyntaxError("unexpected end of input")
        self.i += 1
        return tok

    def expect(self, punct: str) -> None:
        kind, val = self.next()
        if kind != "punct" or val != punct:
            raise WKTSyntaxError(f"expected {punct!r}, got {val!r}")

    def at(self, punct: str) -> bool:
        tok = self.peek()
        return tok is not None and tok[0] == "punct" and tok[1] == punct


def _number(lx: _Lexer) -> float:
    kind, val = lx.next()
    if kind == "num" or (kind == "word" and val.lower() in _NONFINITE):
        return float(val)
    raise WKTSyntaxError(f"expected a number, got {val!r}")


def _coord(lx: _Lexer) -> tuple[float, float]:
    x = _number(lx)
    y = _number(lx)
    tok = lx.peek()
    if tok is not None and (tok[0] == "num" or (tok[0] == "word" and tok[1].lower() in _NONFINITE)):
        raise UnsupportedKind("only 2-D coordinates are supported")
    return (x, y)


def _seq(lx: _Lexer, item):
    lx.expect("(")
    out = [item(lx)]
    while lx.at(","):
        lx.next()
        out.append(item(lx))
    lx.expect(")")
    return out


def _multipoint_member(lx: _Lexer):
    if lx.at("("):
        lx.next()
        c = _coord(lx)
        lx.expect(")")
        return c
    return _coord(lx)


def parse_wkt(text: str) -> Geometry:
    """Parse OGC WKT for the six supported kinds.

    Raises WKTSyntaxError, UnsupportedKind or InvalidGeometry; never anything else
    for string input.
    """
    if not isinstance(text, str):
        raise WKTSyntaxError("WKT input must be text")
    lx = _Lexer(text)
    kind_tok, tag = lx.next()
    if kind_tok != "word":
        raise WKTSyntaxError(f"expected a geometry tag, got {tag!r}")
    tag = tag.upper()
    if tag not in _TAGS:
        if tag in _OTHER_TAGS:
            raise UnsupportedKind(tag)
        raise WKTSyntaxError(f"unknown geometry tag {tag!r}")
    kind = _TAGS[tag]
    tok = lx.peek()
    if tok is not None and tok[0] == "word":
        mod = tok[1].upper()
        if mod in ("Z", "M", "ZM"):
            raise UnsupportedKind(f"{tag} {mod}")
        if mod == "EMPTY":
            raise InvalidGeometry(f"{tag} EMPTY is not supported")
        raise WKTSyntaxError(f"unexpected token {tok[1]!r}")

    if kind == "Point":
        lx.expect("(")
        coords = _coord(lx)
        lx.expect(")")
    elif kind == "LineString":
        coords = _seq(lx, _coord)
    elif kind == "Polygon":
        coords = _seq(lx, lambda l: _seq(l, _coord))
    elif kind == "MultiPoint":
        coords = _seq(lx, _multipoint_member)
    elif kind == "MultiLineString":
        coords = _seq(lx, lambda l: _seq(l, _coord))
    else:
        coords = _seq(lx, lambda l: _seq(l, lambda m: _seq(m, _coord)))
    if lx.peek() is not None:
        raise WKTSyntaxError(f"trailing input after geometry: {lx.peek()[1]!r}")
    return make_geometry(kind, coords)


def _fmt(v: float) -> str:
    s = repr(float(v))
    return s[:-2] if s.endswith(".0") else s


def _fmt_seq(pts) -> str:
    return "(" + ", ".join(f"{_fmt(p[0])} {_fmt(p[1])}" for p in pts) + ")"


def _fmt_poly(rings) -> str:
    return "(" + ", ".join(_fmt_seq(r) for r in rings) + ")"


def to_wkt(g: Geometry) -> str:
    """Serialize with upper-case tags, shortest round-trip decimals, ``lon lat`` order."""
    tag = g.kind.upper()
    c = g.coords
    if g.kind == "Point":
        body = f"({_fmt(c[0])} {_fmt(c[1])})"
    elif g.kind in ("LineString", "MultiPoint"):
        body = _fmt_seq(c)
    elif g.kind in ("Polygon", "MultiLineString"):
        body = _fmt_poly(c)
    else:
        body = "(" + ", ".join(_fmt_poly(p) for p in c) + ")"
    return f"{tag} {body}"


serialize_wkt = to_wkt


def with_id(g: Geometry, id: str) -> Geometry:
    return Geometry(g.kind, g.coords, id)


def is_closed_line(line) -> bool:
    return same_point(line[0], line[-1])
