"""Splitting of geometries that cross the antimeridian.

A segment whose longitude span exceeds 180 degrees is read as taking the
short way round, i.e. crossing lon = +-180.  Such geometries are cut at the
seam into an eastern piece (ending at +180) and a western piece (starting
at -180).
"""

from __future__ import annotations

import logging
import math

from .errors import GeometryError
from .geometry import Geometry, make_geometry
from .predicates import ring_contains, same_point, signed_area, unwrap_lon

log = logging.getLogger(__name__)


def crosses_antimeridian(g: Geometry) -> bool:
    for line in g.lines:
        if _seq_crosses(line):
            return True
    for poly in g.polygons:
        for ring in poly:
            if _seq_crosses(ring):
                return True
    return False


def _seq_crosses(seq) -> bool:
    for i in range(len(seq) - 1):
        if abs(seq[i + 1][0] - seq[i][0]) > 180.0:
            return True
    return False


def _region(x: float):
    """Index k of the open strip (180 + 360k, 540 + 360k); None on a seam."""
    q = (x - 180.0) / 360.0
    f = math.floor(q)
    return None if q == f else f


def _shift(seq, k: int) -> list:
    off = 360.0 * (k + 1)
    return [(p[0] - off, p[1]) for p in seq]


def _clamp(seq) -> list:
    # seam vertices may come out as 180.00000000000003 after shifting
    return [(min(180.0, max(-180.0, x)), y) for x, y in seq]


def _split_line(seq) -> list[tuple[int, list]]:
    pts = unwrap_lon(seq)
    parts = [[pts[0]]]
    regions = [_region(pts[0][0])]
    for p in pts[1:]:
        r = _region(p[0])
        cur = regions[-1]
        if r is None or cur is None or r == cur:
            parts[-1].append(p)
            if cur is None:
                regions[-1] = r
            continue
        prev = parts[-1][-1]
        if _region(prev[0]) is None:
            parts.append([prev, p])
        else:
            s = 180.0 + 360.0 * max(cur, r)
            t = (s - prev[0]) / (p[0] - prev[0])
            cut = (s, prev[1] + (p[1] - prev[1]) * t)
            parts[-1].append(cut)
            parts.append([cut, p])
        regions.append(r)
    out = []
    for part, k in zip(parts, regions):
        if k is None:
            k = -1
        dedup = [part[0]]
        for p in part[1:]:
            if not same_point(p, dedup[-1]):
                dedup.append(p)
        if len(dedup) >= 2:
            out.append((k, _clamp(_shift(dedup, k))))
    return out


# -- polygons -----------------------------------------------------------------------


def _clip_left(rings: list[list], s: float) -> list[list]:
    """Closed rings bounding (even-odd region of ``rings``) intersected with x <= s."""
    whole = []
    chains = []
    for ring in rings:
        pts = ring[:-1]
        inside = [p[0] <= s for p in pts]
        if all(inside):
            whole.append(ring)
            continue
        if not any(inside):
            continue
        n = len(pts)
        start = inside.index(False)
        chain = None
        for step in range(1, n + 1):
            i = (start + step) % n
            j = (start + step - 1) % n
            a, b = pts[j], pts[i]
            if not inside[j] and inside[i]:
                if b[0] == s:
                    entry = b
                else:
                    t = (s - a[0]) / (b[0] - a[0])
                    entry = (s, a[1] + (b[1] - a[1]) * t)
                chain = [entry]
                if entry is not b:
                    chain.append(b)
            elif inside[j] and inside[i]:
                chain.append(b)
            elif inside[j] and not inside[i]:
                if a[0] == s:
                    exit_ = a
                else:
                    t = (s - a[0]) / (b[0] - a[0])
                    exit_ = (s, a[1] + (b[1] - a[1]) * t)
                if exit_ is not a:
                    chain.append(exit_)
                if len(chain) >= 2 or not same_point(chain[0], chain[-1]):
                    chains.append(chain)
                chain = None
    if not chains:
        return whole
    ends = []
    for c, chain in enumerate(chains):
        ends.append((chain[0][1], c, 0))
        ends.append((chain[-1][1], c, 1))
    ends.sort()
    partner = {}
    for k in range(0, len(ends) - 1, 2):
        e0 = ends[k][1:]
        e1 = ends[k + 1][1:]
        partner[e0] = e1
        partner[e1] = e0
    used = [False] * len(chains)
    out = list(whole)
    for c0 in range(len(chains)):
        if used[c0]:
            continue
        ring: list = []
        c, end = c0, 0
        for _ in range(len(chains) + 1):
            if used[c]:
                break
            used[c] = True
            seq = chains[c] if end == 0 else chains[c][::-1]
            ring.extend(seq)
            c, end = partner.get((c, 1 - end), (None, None))
            if c is None:
                break
        if len(ring) >= 3:
            ring.append(ring[0])
            out.append(ring)
    return out


def _assemble(rings: list[list]) -> list[list[list]]:
    rings = [r for r in rings if len(r) >= 4 and abs(signed_area(r)) > 1e-18]
    probes = [((r[0][0] + r[1][0]) / 2, (r[0][1] + r[1][1]) / 2) for r in rings]
    depth = []
    for k, r in enumerate(rings):
        depth.append(sum(1 for m, o in enumerate(rings) if m != k and ring_contains(o, probes[k])))
    polys = {k: [rings[k]] for k in range(len(rings)) if depth[k] % 2 == 0}
    for k in range(len(rings)):
        if depth[k] % 2 == 1:
            owners = [m for m in polys if depth[m] == depth[k] - 1 and ring_contains(rings[m], probes[k])]
            if owners:
                polys[owners[0]].append(rings[k])
    return list(polys.values())


def _split_polygon(poly) -> list[tuple[int, list]] | None:
    shell = unwrap_lon(poly[0])
    if not same_point(shell[0], shell[-1]):
        return None  # encircles a pole; no clean cut exists
    lo = min(p[0] for p in shell)
    hi = max(p[0] for p in shell)
    rings = [shell]
    for hole in poly[1:]:
        h = unwrap_lon(hole)
        if not same_point(h[0], h[-1]):
            return None
        mid = (lo + hi) / 2
        k = round((mid - h[0][0]) / 360.0)
        rings.append([(x + 360.0 * k, y) for x, y in h])
    ks = [k for k in (_region(lo), _region(hi)) if k is not None]
    seams = [180.0 + 360.0 * k for k in range(math.floor((lo - 180.0) / 360.0) + 1, math.ceil((hi - 180.0) / 360.0))]
    seams = [s for s in seams if lo < s < hi]
    if len(seams) != 1:
        return None if len(seams) > 1 else [(ks[0] if ks else -1, poly)]
    s = seams[0]
    k_left = _region(s - 1.0)
    left = _clip_left(rings, s)
    mirrored = [[(2 * s - x, y) for x, y in r] for r in rings]
    right = [[(2 * s - x, y) for x, y in r] for r in _clip_left(mirrored, s)]
    out = []
    for k, side in ((k_left, left), (k_left + 1, right)):
        for p in _assemble(side):
            out.append((k, [_clamp(_shift(r, k)) for r in p]))
    return out


def _group(kind: str, pieces: list[tuple[int, list]]) -> list[Geometry]:
    east = [c for k, c in pieces if _is_east(c, kind)]
    west = [c for k, c in pieces if not _is_east(c, kind)]
    out = []
    for members in (east, west):
        if not members:
            continue
        if kind == "line":
            out.append(make_geometry("LineString", members[0]) if len(members) == 1 else make_geometry("MultiLineString", members))
        else:
            out.append(make_geometry("Polygon", members[0]) if len(members) == 1 else make_geometry("MultiPolygon", members))
    return out


def _is_east(coords, kind: str) -> bool:
    seq = coords if kind == "line" else coords[0]
    return sum(p[0] for p in seq) / len(seq) >= 0.0


def split_antimeridian(g: Geometry) -> list[Geometry]:
    """Cut ``g`` at the antimeridian.

    Returns ``[g]`` when no segment crosses the seam (or when no clean cut
    exists, e.g. a ring around a pole); otherwise the eastern and western
    pieces, each a valid geometry.
    """
    if not crosses_antimeridian(g):
        return [g]
    try:
        if g.dimension == 1:
            pieces = [piece for line in g.lines for piece in _split_line(line)]
            return _group("line", pieces)
        pieces = []
        for poly in g.polygons:
            part = _split_polygon(poly)
            if part is None:
                log.warning("cannot split %s at the antimeridian; keeping it planar", g.id or g.kind)
                return [g]
            pieces.extend(part)
        return _group("poly", pieces)
    except GeometryError as exc:
        log.warning("antimeridian split of %s produced an invalid piece (%s); keeping it planar", g.id or g.kind, exc)
        return [g]


def merge_pieces(pieces: list[Geometry], id: str | None = None) -> Geometry:
    """Single (multi) geometry whose point set is the union of ``pieces``."""
    if len(pieces) == 1:
        g = pieces[0]
        return Geometry(g.kind, g.coords, id)
    if pieces[0].dimension == 1:
        members = tuple(line for p in pieces for line in p.lines)
        return Geometry("MultiLineString", members, id)
    members = tuple(poly for p in pieces for poly in p.polygons)
    return Geometry("MultiPolygon", members, id)
