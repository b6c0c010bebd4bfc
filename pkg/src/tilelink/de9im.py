"""Native DE-9IM intersection matrix for planar point/line/polygon geometries.

The matrix is computed by noding the linework of both geometries against
each other and classifying three kinds of witnesses:

* vertices and intersection nodes give the 0-dimensional entries,
* the midpoint of every noded sub-segment gives the 1-dimensional entries,
* the two sides of every noded polygon edge give the 2-dimensional entries
  (every bounded face of the overlay touches at least one such edge).

Polygon interiors follow the even-odd rule.  Multi geometries use the union
of their members' interior/boundary/exterior sets; lineal boundaries follow
the mod-2 rule.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidMask, NumericalDegeneracy
from .geometry import Geometry
from .predicates import (
    EPS,
    on_segment,
    ring_contains,
    same_point,
    segment_intersections,
    signed_area,
)

INTERIOR, BOUNDARY, EXTERIOR = 0, 1, 2
_MASK_CHARS = frozenset("TF012*")
# collinearity slack for noded pieces whose end points were computed, not given
_COLLINEAR_SLACK = 1e3 * EPS


@dataclass(frozen=True)
class De9imMatrix:
    """3x3 dimension grid; rows are I/B/E of the first geometry, columns of the second."""

    entries: tuple

    def __getitem__(self, rc):
        r, c = rc
        return self.entries[r][c]

    def transpose(self) -> De9imMatrix:
        return De9imMatrix(tuple(tuple(self.entries[c][r] for c in range(3)) for r in range(3)))

    def matches(self, mask: str) -> bool:
        return matches(self, mask)

    def as_lists(self) -> list[list[int]]:
        return [list(row) for row in self.entries]

    def __str__(self) -> str:
        return "".join("F" if v < 0 else str(v) for row in self.entries for v in row)


def check_mask(mask: str) -> str:
    if not isinstance(mask, str) or len(mask) != 9 or not set(mask.upper()) <= _MASK_CHARS:
        raise InvalidMask(f"mask must be 9 symbols over T,F,0,1,2,*: {mask!r}")
    return mask.upper()


def matches(m: De9imMatrix, mask: str) -> bool:
    mask = check_mask(mask)
    flat = [v for row in m.entries for v in row]
    for v, sym in zip(flat, mask):
        if sym == "*":
            continue
        if sym == "T":
            if v < 0:
                return False
        elif sym == "F":
            if v >= 0:
                return False
        elif v != int(sym):
            return False
    return True


def beta(dim: int) -> bool:
    """Binary reduction of an entry: false only for the empty set."""
    return dim != -1


# -- per-geometry preparation ------------------------------------------------


class _Prepared:
    __slots__ = ("dim", "mbb", "points", "edges", "bpoints", "polys", "vertices")

    def __init__(self, g: Geometry):
        self.dim = g.dimension
        self.mbb = g.mbb
        self.points = [(p[0], p[1]) for p in g.points]
        # edge: (a, b, left_is_interior or None, xmin, xmax, ymin, ymax)
        self.edges: list = []
        self.bpoints: list = []
        self.polys: list = []
        # vertex: (point, own location)
        self.vertices: list = [(p, INTERIOR) for p in self.points]

        if self.dim == 1:
            counts: dict = {}
            for line in g.lines:
                for p in (line[0], line[-1]):
                    key = (p[0], p[1])
                    counts[key] = counts.get(key, 0) + 1
                self._add_edges(line, None)
            self.bpoints = [p for p, n in counts.items() if n % 2 == 1]
            for line in g.lines:
                for p in line:
                    q = (p[0], p[1])
                    self.vertices.append((q, BOUNDARY if self._is_bpoint(q) else INTERIOR))
        elif self.dim == 2:
            for poly in g.polygons:
                rings = [[(p[0], p[1]) for p in r] for r in poly]
                self.polys.append(rings)
                for k, ring in enumerate(rings):
                    depth = 0
                    mid = _midpoint(ring[0], ring[1])
                    for m, other in enumerate(rings):
                        if m != k and ring_contains(other, mid):
                            depth += 1
                    ccw = signed_area(ring) > 0
                    left_in = ccw == (depth % 2 == 0)
                    self._add_edges(ring, left_in)
                    for p in ring[:-1]:
                        self.vertices.append((p, BOUNDARY))

    def _add_edges(self, seq, left_in):
        for i in range(len(seq) - 1):
            a = (seq[i][0], seq[i][1])
            b = (seq[i + 1][0], seq[i + 1][1])
            if same_point(a, b):
                continue
            self.edges.append(
                (a, b, left_in, min(a[0], b[0]), max(a[0], b[0]), min(a[1], b[1]), max(a[1], b[1]))
            )

    def _is_bpoint(self, p) -> bool:
        for q in self.bpoints:
            if same_point(p, q):
                return True
        return False

    def boundary_dim(self) -> int:
        if self.dim == 2:
            return 1
        if self.dim == 1:
            return 0 if self.bpoints else -1
        return -1

    def linework_location(self, p) -> int:
        """Location of a point known to lie on this geometry's linework."""
        if self.dim == 2:
            return BOUNDARY
        return BOUNDARY if self._is_bpoint(p) else INTERIOR

    def locate(self, p) -> int:
        x, y = p[0], p[1]
        if self.dim == 0:
            for q in self.points:
                if same_point(p, q):
                    return INTERIOR
            return EXTERIOR
        mb = self.mbb
        if x < mb.lon_min - EPS or x > mb.lon_max + EPS or y < mb.lat_min - EPS or y > mb.lat_max + EPS:
            return EXTERIOR
        if self.dim == 1:
            if self._is_bpoint(p):
                return BOUNDARY
            for e in self.edges:
                if e[3] - EPS <= x <= e[4] + EPS and e[5] - EPS <= y <= e[6] + EPS and on_segment(p, e[0], e[1]):
                    return INTERIOR
            return EXTERIOR
        for e in self.edges:
            if e[3] - EPS <= x <= e[4] + EPS and e[5] - EPS <= y <= e[6] + EPS and on_segment(p, e[0], e[1]):
                return BOUNDARY
        for rings in self.polys:
            inside = False
            for ring in rings:
                if ring_contains(ring, p):
                    inside = not inside
            if inside:
                return INTERIOR
        return EXTERIOR

    def edge_through(self, a, b):
        """The edge carrying the noded piece ab (collinear overlap), or None."""
        m = _midpoint(a, b)
        for e in self.edges:
            if on_segment(m, e[0], e[1]):
                if on_segment(a, e[0], e[1], _COLLINEAR_SLACK) and on_segment(b, e[0], e[1], _COLLINEAR_SLACK):
                    return e
        return None


def _midpoint(a, b):
    return ((a[0] + b[0]) * 0.5, (a[1] + b[1]) * 0.5)


def prepared(g: Geometry) -> _Prepared:
    cache = g.__dict__
    p = cache.get("_de9im_prep")
    if p is None:
        p = _Prepared(g)
        cache["_de9im_prep"] = p
    return p


# -- matrix computation ------------------------------------------------------------


def _disjoint_matrix(pa: _Prepared, pb: _Prepared) -> De9imMatrix:
    return De9imMatrix(
        (
            (-1, -1, pa.dim),
            (-1, -1, pa.boundary_dim()),
            (pb.dim, pb.boundary_dim(), 2),
        )
    )


def _param(a, b, p) -> float:
    dx = b[0] - a[0]
    dy = b[1] - a[1]
    return ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / (dx * dx + dy * dy)


def _classify_pieces(m, own: _Prepared, other: _Prepared, splits: list, transpose: bool) -> None:
    """Record 1- and 2-dimensional witnesses from the noded edges of ``own``."""
    own_loc = BOUNDARY if own.dim == 2 else INTERIOR
    ob = other.mbb
    for k, e in enumerate(own.edges):
        a, b, left_in = e[0], e[1], e[2]
        ts = splits[k]
        if ts:
            ts = sorted(set(ts))
        ts = [0.0] + [t for t in ts if 0.0 < t < 1.0] + [1.0]
        dx = b[0] - a[0]
        dy = b[1] - a[1]
        for i in range(len(ts) - 1):
            p0 = (a[0] + dx * ts[i], a[1] + dy * ts[i]) if ts[i] > 0.0 else a
            p1 = (a[0] + dx * ts[i + 1], a[1] + dy * ts[i + 1]) if ts[i + 1] < 1.0 else b
            if same_point(p0, p1):
                continue
            mid = _midpoint(p0, p1)
            if (
                mid[0] < ob.lon_min - EPS
                or mid[0] > ob.lon_max + EPS
                or mid[1] < ob.lat_min - EPS
                or mid[1] > ob.lat_max + EPS
            ):
                loc = EXTERIOR
            else:
                loc = other.locate(mid)
            _set(m, own_loc, loc, 1, transpose)
            if own.dim != 2:
                continue
            if other.dim != 2 or loc == EXTERIOR:
                side = EXTERIOR
                _set(m, INTERIOR, side, 2, transpose)
            elif loc == INTERIOR:
                _set(m, INTERIOR, INTERIOR, 2, transpose)
                _set(m, EXTERIOR, INTERIOR, 2, transpose)
            else:
                oe = other.edge_through(p0, p1)
                if oe is None:
                    raise NumericalDegeneracy(
                        f"sub-segment {p0}-{p1} lies on the other boundary but matches no edge"
                    )
                same_dir = dx * (oe[1][0] - oe[0][0]) + dy * (oe[1][1] - oe[0][1]) > 0.0
                other_left_in = oe[2] if same_dir else not oe[2]
                own_left = INTERIOR if left_in else EXTERIOR
                own_right = EXTERIOR if left_in else INTERIOR
                oth_left = INTERIOR if other_left_in else EXTERIOR
                oth_right = EXTERIOR if other_left_in else INTERIOR
                _set(m, own_left, oth_left, 2, transpose)
                _set(m, own_right, oth_right, 2, transpose)


def _set(m, r: int, c: int, dim: int, transpose: bool) -> None:
    if transpose:
        r, c = c, r
    if m[r][c] < dim:
        m[r][c] = dim


def de9im(g1: Geometry, g2: Geometry) -> De9imMatrix:
    """DE-9IM matrix of ``(g1, g2)``; every entry in {-1, 0, 1, 2}."""
    pa = prepared(g1)
    pb = prepared(g2)
    if not pa.mbb.intersects(pb.mbb):
        return _disjoint_matrix(pa, pb)

    m = [[-1, -1, -1], [-1, -1, -1], [-1, -1, 2]]
    split_a = [[] for _ in pa.edges]
    split_b = [[] for _ in pb.edges]

    bb = pb.mbb
    ab = pa.mbb
    edges_b = [
        (k, e)
        for k, e in enumerate(pb.edges)
        if not (e[4] + EPS < ab.lon_min or e[3] - EPS > ab.lon_max or e[6] + EPS < ab.lat_min or e[5] - EPS > ab.lat_max)
    ]
    if edges_b:
        for i, ea in enumerate(pa.edges):
            if ea[4] + EPS < bb.lon_min or ea[3] - EPS > bb.lon_max or ea[6] + EPS < bb.lat_min or ea[5] - EPS > bb.lat_max:
                continue
            for k, eb in edges_b:
                if ea[4] + EPS < eb[3] or eb[4] + EPS < ea[3] or ea[6] + EPS < eb[5] or eb[6] + EPS < ea[5]:
                    continue
                hits = segment_intersections(ea[0], ea[1], eb[0], eb[1])
                for x in hits:
                    split_a[i].append(_param(ea[0], ea[1], x))
                    split_b[k].append(_param(eb[0], eb[1], x))
                    la = pa.linework_location(x)
                    lb = pb.linework_location(x)
                    if m[la][lb] < 0:
                        m[la][lb] = 0

    # lone points splitting the other's edges
    for pts, other, splits in ((pb.points, pa, split_a), (pa.points, pb, split_b)):
        for p in pts:
            for k, e in enumerate(other.edges):
                if on_segment(p, e[0], e[1]):
                    splits[k].append(_param(e[0], e[1], p))

    for v, loc in pa.vertices:
        lb = pb.locate(v)
        if m[loc][lb] < 0:
            m[loc][lb] = 0
    for v, loc in pb.vertices:
        la = pa.locate(v)
        if m[la][loc] < 0:
            m[la][loc] = 0

    _classify_pieces(m, pa, pb, split_a, transpose=False)
    _classify_pieces(m, pb, pa, split_b, transpose=True)
    return De9imMatrix(tuple(tuple(row) for row in m))


def relate(g1: Geometry, g2: Geometry, mask: str) -> bool:
    """True iff de9im(g1, g2) satisfies the 9-symbol pattern ``mask``."""
    mask = check_mask(mask)
    return matches(de9im(g1, g2), mask)


__all__ = [
    "BOUNDARY",
    "EXTERIOR",
    "INTERIOR",
    "De9imMatrix",
    "beta",
    "check_mask",
    "de9im",
    "matches",
    "relate",
]
