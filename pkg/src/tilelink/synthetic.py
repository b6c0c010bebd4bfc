"""Seeded synthetic corpora standing in for real land-cover / region datasets."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .errors import ConfigError, GeometryError
from .geometry import Geometry, make_geometry
from .tiling import Dataset


def _star(rng: random.Random, cx: float, cy: float, radius: float, n: int) -> list:
    angles = sorted(rng.uniform(0.0, 2.0 * math.pi) for _ in range(n))
    ring = []
    for a in angles:
        r = radius * rng.uniform(0.4, 1.0)
        ring.append((cx + r * math.cos(a), cy + r * math.sin(a)))
    ring.append(ring[0])
    return ring


def _rect(x0, y0, x1, y1) -> list:
    return [(x0, y0), (x1, y0), (x1, y1), (x0, y1), (x0, y0)]


def _clip_lat(v: float) -> float:
    return max(-89.0, min(89.0, v))


# -- mixed corpora for oracle checks --------------------------------------------


class _MixedGen:
    """Shapes snapped to a half-degree lattice so borders and vertices coincide often."""

    def __init__(self, rng: random.Random, size: float = 10.0):
        self.rng = rng
        self.size = size

    def g(self, lo: float = 0.0, hi: float | None = None) -> float:
        hi = self.size if hi is None else hi
        return self.rng.randint(int(lo * 2), int(hi * 2)) / 2.0

    def rect(self):
        x0, y0 = self.g(0, self.size - 1), self.g(0, self.size - 1)
        w, h = self.g(0.5, 4), self.g(0.5, 4)
        return _rect(x0, y0, x0 + w, y0 + h)

    def make(self) -> Geometry:
        return _retry(lambda rng: self._make(), self.rng)

    def _make(self) -> Geometry:
        rng = self.rng
        k = rng.random()
        if k < 0.12:
            return make_geometry("Point", (self.g(), self.g()))
        if k < 0.17:
            return make_geometry("MultiPoint", [(self.g(), self.g()) for _ in range(rng.randint(2, 4))])
        if k < 0.32:
            x, y = self.g(), self.g()
            pts = [(x, y)]
            for _ in range(rng.randint(1, 3)):
                x = min(self.size + 4, max(0.0, x + self.g(0, 4) - 2))
                y = min(self.size + 4, max(0.0, y + self.g(0, 4) - 2))
                pts.append((x, y))
            if len({p for p in pts}) < 2:
                pts.append((pts[0][0] + 1, pts[0][1]))
            return make_geometry("LineString", pts)
        if k < 0.37:
            lines = []
            for _ in range(2):
                x, y = self.g(), self.g()
                lines.append([(x, y), (x + self.g(0.5, 3), y + self.g(0, 3) - 1.5)])
            return make_geometry("MultiLineString", lines)
        if k < 0.62:
            return make_geometry("Polygon", [self.rect()])
        if k < 0.70:
            x0, y0 = self.g(0, self.size - 1), self.g(0, self.size - 1)
            return make_geometry("Polygon", [[(x0, y0), (x0 + self.g(1, 3), y0), (x0, y0 + self.g(1, 3)), (x0, y0)]])
        if k < 0.80:
            cx, cy = rng.uniform(1, self.size - 1), rng.uniform(1, self.size - 1)
            return make_geometry("Polygon", [_star(rng, cx, cy, rng.uniform(0.5, 2.5), rng.randint(3, 8))])
        if k < 0.90:
            x0, y0 = self.g(0, self.size - 3), self.g(0, self.size - 3)
            w = self.g(2, 4)
            hole = _rect(x0 + 0.5, y0 + 0.5, x0 + w - 0.5, y0 + w - 0.5)[::-1]
            return make_geometry("Polygon", [_rect(x0, y0, x0 + w, y0 + w), hole])
        x0, y0 = self.g(0, self.size - 4), self.g(0, self.size - 4)
        a = _rect(x0, y0, x0 + 1, y0 + 1)
        b = _rect(x0 + 2, y0 + 2, x0 + 3.5, y0 + 3)
        return make_geometry("MultiPolygon", [[a], [b]])

    def seam(self, crossing: bool) -> Geometry:
        """A shape at the antimeridian; crossing ones take the short way over +-180."""
        rng = self.rng
        y0 = self.g(0, 4)
        if crossing:
            e = 180.0 - self.g(0.5, 2)
            w = -180.0 + self.g(0.5, 2)
            if rng.random() < 0.6:
                return make_geometry("Polygon", [[(e, y0), (w, y0), (w, y0 + 1.5), (e, y0 + 1.5), (e, y0)]])
            return make_geometry("LineString", [(e, y0), (w, y0 + self.g(0, 2))])
        side = 1 if rng.random() < 0.5 else -1
        x0 = side * (180.0 - self.g(0, 2.5))
        x1 = x0 + (-side) * self.g(0.5, 1.5) if abs(x0) == 180.0 else min(180.0, max(-180.0, x0 + self.g(0, 1) * side))
        if x0 == x1:
            x1 = x0 - side * 0.5
        lo, hi = min(x0, x1), max(x0, x1)
        if rng.random() < 0.5:
            return make_geometry("Point", (lo, y0))
        return make_geometry("Polygon", [_rect(lo, y0, hi, y0 + self.g(0.5, 2))])


def mixed_corpus(
    seed: int,
    n_source: int = 200,
    n_target: int = 200,
    crosser_fraction: float = 0.03,
    size: float = 10.0,
) -> tuple[Dataset, Dataset]:
    """Mixed point/line/polygon datasets with nesting, shared borders and duplicates.

    At least ``crosser_fraction`` of each dataset crosses the antimeridian,
    with a similar number of non-crossing shapes placed next to the seam.
    """
    rng = random.Random(seed)
    gen = _MixedGen(rng, size)

    def block(n: int, prefix: str, base: list | None) -> list:
        n_cross = max(1, math.ceil(crosser_fraction * n)) if crosser_fraction > 0 else 0
        out = [gen.seam(True) for _ in range(n_cross)]
        out += [gen.seam(False) for _ in range(n_cross)]
        while len(out) < n:
            k = rng.random()
            if base and k < 0.06:
                out.append(rng.choice(base))  # exact duplicate
            elif base and k < 0.12:
                ref = rng.choice(base)
                b = ref.mbb
                if ref.dimension == 2 and b.width >= 1 and b.height >= 1:
                    # nested: a box inside the other's box, or one enclosing it
                    if rng.random() < 0.5:
                        out.append(make_geometry("Polygon", [_rect(b.lon_min + 0.25, b.lat_min + 0.25, b.lon_max - 0.25, b.lat_max - 0.25)]))
                    else:
                        out.append(make_geometry("Polygon", [_rect(b.lon_min - 0.5, b.lat_min - 0.5, b.lon_max + 0.5, b.lat_max + 0.5)]))
                else:
                    out.append(gen.make())
            elif base and k < 0.18:
                ref = rng.choice(base).mbb
                # shares the right-hand border of a reference shape
                w = gen.g(0.5, 2)
                out.append(make_geometry("Polygon", [_rect(ref.lon_max, ref.lat_min, min(180.0, ref.lon_max + w), max(ref.lat_max, ref.lat_min + 0.5))]))
            else:
                out.append(gen.make())
        rng.shuffle(out)
        return [Geometry(g.kind, g.coords, f"{prefix}{k:04d}") for k, g in enumerate(out[:n])]

    src = block(n_source, "s", None)
    tgt = block(n_target, "t", src)
    return Dataset(src, "source"), Dataset(tgt, "target")


# -- clustered corpora for filtering / timing -------------------------------------


@dataclass(frozen=True)
class SyntheticCorpusSpec:
    source_count: int = 1000
    target_count: int = 1000
    point_fraction: float = 0.2
    line_fraction: float = 0.2
    clusters: int = 10
    spread: float = 1.0
    window: tuple = (-170.0, -60.0, 170.0, 60.0)
    size: tuple = (0.05, 0.4)
    target_size_factor: float = 3.0
    antimeridian_fraction: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.source_count < 0 or self.target_count < 0:
            raise ConfigError("geometry counts must be >= 0")
        if self.clusters < 1:
            raise ConfigError("need at least one cluster")
        if not (0 <= self.point_fraction + self.line_fraction <= 1):
            raise ConfigError("kind fractions must sum to at most 1")
        x0, y0, x1, y1 = self.window
        if not (-180 <= x0 < x1 <= 180 and -90 <= y0 < y1 <= 90):
            raise ConfigError(f"window {self.window} is not a valid lon/lat box")
        if not (0 <= self.antimeridian_fraction <= 1):
            raise ConfigError("antimeridian fraction must be in [0, 1]")


def cluster_centers(spec: SyntheticCorpusSpec, rng: random.Random) -> list[tuple[float, float]]:
    """Centres on a jittered grid over the window, far apart relative to ``spread``."""
    x0, y0, x1, y1 = spec.window
    cols = math.ceil(math.sqrt(spec.clusters))
    rows = math.ceil(spec.clusters / cols)
    cw = (x1 - x0) / cols
    ch = (y1 - y0) / rows
    out = []
    for k in range(spec.clusters):
        r, c = divmod(k, cols)
        jx = rng.uniform(-0.1, 0.1) * cw
        jy = rng.uniform(-0.1, 0.1) * ch
        out.append((x0 + (c + 0.5) * cw + jx, y0 + (r + 0.5) * ch + jy))
    return out


def _retry(make, rng, *args, attempts: int = 20) -> Geometry:
    """Redraw when a random shape comes out invalid (clipped or degenerate rings)."""
    for _ in range(attempts - 1):
        try:
            return make(rng, *args)
        except GeometryError:
            continue
    return make(rng, *args)


def _clustered_shape(rng: random.Random, spec: SyntheticCorpusSpec, cx: float, cy: float, scale: float) -> Geometry:
    x = cx + rng.gauss(0.0, spec.spread)
    y = _clip_lat(cy + rng.gauss(0.0, spec.spread))
    radius = rng.uniform(*spec.size) * scale
    k = rng.random()
    if k < spec.point_fraction:
        return make_geometry("Point", (max(-180.0, min(180.0, x)), y))
    if k < spec.point_fraction + spec.line_fraction:
        pts = [(x, y)]
        for _ in range(rng.randint(1, 4)):
            a = rng.uniform(0, 2 * math.pi)
            pts.append((pts[-1][0] + radius * math.cos(a), _clip_lat(pts[-1][1] + radius * math.sin(a))))
        pts = [(max(-180.0, min(180.0, px)), py) for px, py in pts]
        return make_geometry("LineString", pts)
    ring = _star(rng, x, y, radius, rng.randint(4, 9))
    ring = [(max(-180.0, min(180.0, px)), _clip_lat(py)) for px, py in ring]
    return make_geometry("Polygon", [ring])


def _seam_shape(rng: random.Random, spec: SyntheticCorpusSpec, scale: float) -> Geometry:
    y = rng.uniform(spec.window[1], spec.window[3])
    half = rng.uniform(*spec.size) * scale
    e, w = 180.0 - half, -180.0 + half
    if rng.random() < 0.5:
        return make_geometry("LineString", [(e, y), (w, _clip_lat(y + half))])
    return make_geometry("Polygon", [[(e, y), (w, y), (w, _clip_lat(y + half)), (e, _clip_lat(y + half)), (e, y)]])


def clustered_corpus(spec: SyntheticCorpusSpec) -> tuple[Dataset, Dataset]:
    """Many small source shapes and larger target shapes grouped in well separated clusters."""
    rng = random.Random(spec.seed)
    centers = cluster_centers(spec, rng)

    def make(n: int, prefix: str, scale: float) -> Dataset:
        out = []
        for k in range(n):
            if spec.antimeridian_fraction and rng.random() < spec.antimeridian_fraction:
                g = _retry(_seam_shape, rng, spec, scale)
            else:
                cx, cy = centers[k % len(centers)]
                g = _retry(_clustered_shape, rng, spec, cx, cy, scale)
            out.append(Geometry(g.kind, g.coords, f"{prefix}{k:06d}"))
        return Dataset(out, "source" if prefix == "s" else "target")

    return make(spec.source_count, "s", 1.0), make(spec.target_count, "t", spec.target_size_factor)
