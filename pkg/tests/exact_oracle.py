"""Exact-arithmetic reference for intersection matrices, independent of the kernel.

All segments of both geometries are cut at every mutual intersection,
giving a planar arrangement of vertices, open edges and open faces.  Each
cell of the arrangement lies entirely inside one interior/boundary/exterior
part of each geometry, so classifying one sample point per cell (the vertex
itself, an edge midpoint, points just off each side of every edge) and
taking the largest cell dimension per label pair yields the matrix.
Everything is computed with Fractions; shapes are given as plain
coordinate lists so nothing from the package under test is reused.
"""

from fractions import Fraction as F

I, B, E = 0, 1, 2


class Shape:
    """``kind`` is 'point', 'line' or 'area'; members follow the WKT nesting."""

    def __init__(self, kind, members):
        self.kind = kind
        if kind == "point":
            self.points = [tuple(map(F, p)) for p in members]
            self.segs = []
        elif kind == "line":
            self.lines = [[tuple(map(F, p)) for p in line] for line in members]
            self.segs = [(a, b) for line in self.lines for a, b in zip(line, line[1:]) if a != b]
            ends = {}
            for line in self.lines:
                if line[0] != line[-1]:
                    for p in (line[0], line[-1]):
                        ends[p] = ends.get(p, 0) + 1
            self.bnd = {p for p, n in ends.items() if n % 2}
        else:
            self.rings = [[tuple(map(F, p)) for p in ring] for poly in members for ring in poly]
            self.segs = [(a, b) for ring in self.rings for a, b in zip(ring, ring[1:]) if a != b]

    def vertices(self):
        if self.kind == "point":
            return list(self.points)
        return [p for s in self.segs for p in s]

    def locate(self, p):
        if self.kind == "point":
            return I if p in self.points else E
        if self.kind == "line":
            if p in self.bnd:
                return B
            return I if any(_on_seg(p, a, b) for a, b in self.segs) else E
        if any(_on_seg(p, a, b) for a, b in self.segs):
            return B
        inside = False
        x, y = p
        for a, b in self.segs:
            if (a[1] > y) != (b[1] > y):
                xc = a[0] + (y - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
                if xc > x:
                    inside = not inside
        return I if inside else E


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _on_seg(p, a, b):
    return (
        _cross(a, b, p) == 0
        and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def _meet(a, b, c, d):
    """Points shared by closed segments ab and cd (collinear overlaps give their ends)."""
    out = []
    d1 = _cross(c, d, a)
    d2 = _cross(c, d, b)
    d3 = _cross(a, b, c)
    d4 = _cross(a, b, d)
    if d1 == 0 and d2 == 0:
        for p in (a, b):
            if _on_seg(p, c, d):
                out.append(p)
        for p in (c, d):
            if _on_seg(p, a, b):
                out.append(p)
        return out
    if ((d1 > 0) != (d2 > 0) or d1 == 0 or d2 == 0) and ((d3 > 0) != (d4 > 0) or d3 == 0 or d4 == 0):
        t = d1 / (d1 - d2)
        out.append((a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])))
    return out


def _dist2_point_seg(p, a, b):
    dx, dy = b[0] - a[0], b[1] - a[1]
    t = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / (dx * dx + dy * dy)
    t = min(F(1), max(F(0), t))
    qx, qy = a[0] + t * dx - p[0], a[1] + t * dy - p[1]
    return qx * qx + qy * qy


def matrix(g1: Shape, g2: Shape):
    segs = g1.segs + g2.segs
    verts = set(g1.vertices()) | set(g2.vertices())
    for k, (a, b) in enumerate(segs):
        for c, d in segs[k + 1 :]:
            verts.update(_meet(a, b, c, d))
    # cut every segment at every arrangement vertex on it
    edges = set()
    for a, b in segs:
        on = sorted((p for p in verts if _on_seg(p, a, b)), key=lambda p: (p[0] - a[0]) ** 2 + (p[1] - a[1]) ** 2)
        for p, q in zip(on, on[1:]):
            if p != q:
                edges.add((min(p, q), max(p, q)))
    edges = sorted(edges)

    m = [[-1] * 3 for _ in range(3)]

    def mark(p, dim):
        r, c = g1.locate(p), g2.locate(p)
        if m[r][c] < dim:
            m[r][c] = dim

    for v in verts:
        mark(v, 0)
    far = (F(-10**6), F(-10**6 + 7))
    mark(far, 2)
    for k, (a, b) in enumerate(edges):
        mid = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
        mark(mid, 1)
        # step off the edge by less than half the clearance to everything else
        clear = min(
            [_dist2_point_seg(mid, c, d) for j, (c, d) in enumerate(edges) if j != k]
            + [(p[0] - mid[0]) ** 2 + (p[1] - mid[1]) ** 2 for p in verts],
            default=F(1),
        )
        nx, ny = a[1] - b[1], b[0] - a[0]
        n2 = nx * nx + ny * ny
        t = F(1)
        while t * t * n2 * 4 >= clear:
            t /= 2
        mark((mid[0] + t * nx, mid[1] + t * ny), 2)
        mark((mid[0] - t * nx, mid[1] - t * ny), 2)
    return m
