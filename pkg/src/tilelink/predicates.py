"""Low level planar predicates on (lon, lat) tuples.

Everything here works on plain 2-tuples of floats so the hot loops in the
DE-9IM kernel stay cheap.  Coincidence is decided with one absolute
tolerance, ``EPS`` (degrees).
"""

from __future__ import annotations

import math

EPS = 1e-12

Coord = tuple  # (lon, lat); a Point NamedTuple also qualifies


def orient(a, b, c) -> float:
    """Twice the signed area of triangle abc (positive when counter-clockwise)."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def same_point(a, b, eps: float = EPS) -> bool:
    return abs(a[0] - b[0]) <= eps and abs(a[1] - b[1]) <= eps


def dist_point_segment(p, a, b) -> float:
    ax, ay = a[0], a[1]
    dx = b[0] - ax
    dy = b[1] - ay
    ll = dx * dx + dy * dy
    if ll == 0.0:
        return math.hypot(p[0] - ax, p[1] - ay)
    t = ((p[0] - ax) * dx + (p[1] - ay) * dy) / ll
    if t <= 0.0:
        return math.hypot(p[0] - ax, p[1] - ay)
    if t >= 1.0:
        return math.hypot(p[0] - b[0], p[1] - b[1])
    return abs(dx * (p[1] - ay) - dy * (p[0] - ax)) / math.sqrt(ll)


def on_segment(p, a, b, eps: float = EPS) -> bool:
    if p[0] < min(a[0], b[0]) - eps or p[0] > max(a[0], b[0]) + eps:
        return False
    if p[1] < min(a[1], b[1]) - eps or p[1] > max(a[1], b[1]) + eps:
        return False
    return dist_point_segment(p, a, b) <= eps


def segment_intersections(a, b, c, d, eps: float = EPS) -> list:
    """Intersection of closed segments ab and cd.

    Returns [] when disjoint, one point for a touch or proper crossing, and
    the two overlap end points for a collinear overlap.
    """
    if max(a[0], b[0]) + eps < min(c[0], d[0]) or max(c[0], d[0]) + eps < min(a[0], b[0]):
        return []
    if max(a[1], b[1]) + eps < min(c[1], d[1]) or max(c[1], d[1]) + eps < min(a[1], b[1]):
        return []
    found = []
    for p, s0, s1 in ((a, c, d), (b, c, d), (c, a, b), (d, a, b)):
        if on_segment(p, s0, s1, eps):
            for q in found:
                if same_point(p, q, eps):
                    break
            else:
                found.append((p[0], p[1]))
    if found:
        return found
    d1 = orient(c, d, a)
    d2 = orient(c, d, b)
    d3 = orient(a, b, c)
    d4 = orient(a, b, d)
    if ((d1 > 0.0 and d2 < 0.0) or (d1 < 0.0 and d2 > 0.0)) and (
        (d3 > 0.0 and d4 < 0.0) or (d3 < 0.0 and d4 > 0.0)
    ):
        t = d1 / (d1 - d2)
        return [(a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)]
    return []


def ring_contains(ring, p) -> bool:
    """Even-odd crossing test; the caller handles points on the ring itself."""
    x, y = p[0], p[1]
    inside = False
    n = len(ring)
    j = n - 1
    for i in range(n):
        xi, yi = ring[i][0], ring[i][1]
        xj, yj = ring[j][0], ring[j][1]
        if (yi > y) != (yj > y):
            if x < (xj - xi) * (y - yi) / (yj - yi) + xi:
                inside = not inside
        j = i
    return inside


def on_ring(ring, p, eps: float = EPS) -> bool:
    for i in range(len(ring) - 1):
        if on_segment(p, ring[i], ring[i + 1], eps):
            return True
    return False


def signed_area(ring) -> float:
    s = 0.0
    for i in range(len(ring) - 1):
        s += ring[i][0] * ring[i + 1][1] - ring[i + 1][0] * ring[i][1]
    return s / 2.0


def dedup_consecutive(coords, eps: float = EPS) -> list:
    out = []
    for p in coords:
        if not out or not same_point(out[-1], p, eps):
            out.append(p)
    return out


def unwrap_lon(seq) -> list:
    """Shift longitudes by multiples of 360 so no step spans more than 180 degrees."""
    out = [(float(seq[0][0]), float(seq[0][1]))]
    for p in seq[1:]:
        x = p[0]
        prev = out[-1][0]
        while x - prev > 180.0:
            x -= 360.0
        while prev - x > 180.0:
            x += 360.0
        out.append((x, p[1]))
    return out


def ring_is_simple(ring, eps: float = EPS) -> bool:
    """True when a closed ring has no self-intersection besides shared neighbour vertices.

    Sweeps segments by their x-extent so typical rings cost O(n log n).
    """
    pts = dedup_consecutive(ring, eps)
    if len(pts) < 4 or not same_point(pts[0], pts[-1], eps):
        return False
    n = len(pts) - 1
    segs = [(pts[i], pts[i + 1]) for i in range(n)]
    order = sorted(range(n), key=lambda k: min(segs[k][0][0], segs[k][1][0]))
    active: list[int] = []
    for k in order:
        a, b = segs[k]
        xmin = min(a[0], b[0])
        active = [m for m in active if max(segs[m][0][0], segs[m][1][0]) + eps >= xmin]
        for m in active:
            c, d = segs[m]
            hits = segment_intersections(a, b, c, d, eps)
            if not hits:
                continue
            gap = abs(k - m)
            if gap == 1 or gap == n - 1:
                # neighbours may only share their common vertex
                shared = b if (k + 1) % n == m else a
                if n == 2 or len(hits) > 1 or not same_point(hits[0], shared, eps):
                    return False
            else:
                return False
        active.append(k)
    return True
