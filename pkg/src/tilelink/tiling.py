"""Dataset sizing, swapping, granularity selection and the sparse tile index.

Cells are addressed by ``(i, j)``: ``i`` counts cells along the first
coordinate axis (longitude in WKT order) and ``j`` along the second.  A box
``[x1, x2] x [y1, y2]`` occupies every cell with
``floor(x1*dx) <= i <= ceil(x2*dx)`` and ``floor(y1*dy) <= j <= ceil(y2*dy)``;
the bounds are inclusive on purpose, so a box edge lying exactly on a cell
border puts the geometry in both neighbouring cells.
"""

from __future__ import annotations

import logging
import math
import statistics
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .antimeridian import merge_pieces, split_antimeridian
from .errors import ConfigError, EmptyDataset, ZeroGranularity
from .geometry import MBB, Geometry
from .relations import Relation

log = logging.getLogger(__name__)

HEURISTICS = ("min", "max", "avg", "median")
DELTA_MODES = ("literal", "reciprocal")
# refuse to let one geometry spread over more cells than this along an axis
MAX_SPAN_CELLS = 4096

CellIndex = tuple  # (i, j)
CellRange = tuple  # (i0, i1, j0, j1), inclusive


@dataclass(frozen=True)
class Resource:
    """A geometry as the engine sees it: antimeridian crossers are already cut."""

    id: str
    geometry: Geometry
    boxes: tuple  # one MBB per piece
    mbb: MBB

    @property
    def extent(self) -> tuple[float, float]:
        """(lon, lat) extent measured on the unwrapped circle."""
        width = sum(b.width for b in self.boxes)
        height = max(b.lat_max for b in self.boxes) - min(b.lat_min for b in self.boxes)
        return width, height


def make_resource(g: Geometry) -> Resource:
    pieces = split_antimeridian(g)
    eff = merge_pieces(pieces, g.id) if len(pieces) > 1 else g
    return Resource(g.id, eff, tuple(p.mbb for p in pieces), eff.mbb)


@dataclass(frozen=True)
class Dataset:
    geometries: tuple
    label: str = "source"
    rejected: int = field(default=0, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "geometries", tuple(self.geometries))
        seen = set()
        for g in self.geometries:
            if g.id is None:
                raise ValueError("every dataset geometry needs an id")
            if g.id in seen:
                raise ValueError(f"duplicate id {g.id!r} in {self.label} dataset")
            seen.add(g.id)

    def __len__(self) -> int:
        return len(self.geometries)

    @cached_property
    def resources(self) -> tuple:
        return tuple(make_resource(g) for g in self.geometries)

    @cached_property
    def by_id(self) -> dict:
        return {r.id: r for r in self.resources}

    @property
    def ids(self) -> list[str]:
        return [g.id for g in self.geometries]


def eth(d: Dataset) -> float:
    """Estimated total hypervolume: |X| times the product of mean per-axis extents."""
    if not len(d):
        raise EmptyDataset(f"{d.label} dataset is empty")
    n = len(d)
    widths = 0.0
    heights = 0.0
    for r in d.resources:
        w, h = r.extent
        widths += w
        heights += h
    return n * (widths / n) * (heights / n)


def plan_swap(s: Dataset, t: Dataset, r: Relation | str):
    """Index the dataset with the smaller ETH first; returns (S, T, relation, reversed)."""
    r = Relation.parse(r)
    if eth(t) < eth(s):
        return t, s, r.reverse, True
    return s, t, r, False


@dataclass(frozen=True)
class Granularity:
    """Cells per degree along each axis."""

    delta_lon: float
    delta_lat: float
    heuristic: str = "fixed"

    def __post_init__(self):
        for v in (self.delta_lon, self.delta_lat):
            if not (math.isfinite(v) and v > 0):
                raise ZeroGranularity(f"granularity must be positive and finite, got {v}")


def parse_heuristic(token: str) -> tuple[str, float | None]:
    """``min | max | avg | median | fixed:<positive decimal>`` -> (name, fixed value)."""
    tok = token.strip().lower()
    if tok in HEURISTICS:
        return tok, None
    if tok.startswith("fixed:"):
        try:
            v = float(tok[6:])
        except ValueError:
            raise ConfigError(f"bad fixed granularity {token!r}") from None
        if not (math.isfinite(v) and v > 0):
            raise ConfigError(f"fixed granularity must be a positive number: {token!r}")
        return "fixed", v
    raise ConfigError(f"unknown granularity heuristic {token!r}")


_STAT = {
    "min": min,
    "max": max,
    "avg": statistics.fmean,
    "median": statistics.median,
}


def heuristic_extent(d: Dataset, heuristic: str) -> tuple[float, float]:
    """Per-axis statistic over the per-geometry MBB extents of ``d``."""
    if not len(d):
        raise EmptyDataset(f"{d.label} dataset is empty")
    stat = _STAT[heuristic]
    ext = [r.extent for r in d.resources]
    return stat([e[0] for e in ext]), stat([e[1] for e in ext])


def select_granularity(
    s: Dataset, t: Dataset, heuristic: str = "avg", delta_mode: str = "literal"
) -> Granularity:
    """Granularity from the mean of the two datasets' extent statistics.

    ``literal`` uses that mean directly as the cells-per-degree factor;
    ``reciprocal`` uses its inverse, i.e. cells about as wide as a typical
    geometry.  A zero statistic (all points) falls back to 1.
    """
    name, fixed = parse_heuristic(heuristic)
    if fixed is not None:
        return Granularity(fixed, fixed, "fixed")
    if delta_mode not in DELTA_MODES:
        raise ConfigError(f"unknown delta mode {delta_mode!r}")
    hs = heuristic_extent(s, name)
    ht = heuristic_extent(t, name)
    deltas = []
    for axis in (0, 1):
        mean = 0.5 * (hs[axis] + ht[axis])
        if mean <= 0.0:
            log.warning("all %s extents are zero under %s; using granularity 1", ("lon", "lat")[axis], name)
            deltas.append(1.0)
            continue
        deltas.append(mean if delta_mode == "literal" else 1.0 / mean)
    # safety valve against cell explosions for wide geometries
    widest = [
        max((r.extent[axis] for d in (s, t) for r in d.resources), default=0.0) for axis in (0, 1)
    ]
    for axis in (0, 1):
        if widest[axis] * deltas[axis] > MAX_SPAN_CELLS:
            capped = MAX_SPAN_CELLS / widest[axis]
            log.warning("granularity %.6g capped to %.6g cells/degree", deltas[axis], capped)
            deltas[axis] = capped
    return Granularity(deltas[0], deltas[1], name)


def cell_range(box: MBB, g: Granularity) -> CellRange:
    return (
        math.floor(box.lon_min * g.delta_lon),
        math.ceil(box.lon_max * g.delta_lon),
        math.floor(box.lat_min * g.delta_lat),
        math.ceil(box.lat_max * g.delta_lat),
    )


def tile_cells(box: MBB, g: Granularity) -> set:
    i0, i1, j0, j1 = cell_range(box, g)
    return {(i, j) for i in range(i0, i1 + 1) for j in range(j0, j1 + 1)}


def _range_size(rg: CellRange) -> int:
    return (rg[1] - rg[0] + 1) * (rg[3] - rg[2] + 1)


def _cells_of(rg: CellRange) -> Iterable:
    for i in range(rg[0], rg[1] + 1):
        for j in range(rg[2], rg[3] + 1):
            yield (i, j)


@dataclass
class SparseTileIndex:
    """Source ids per occupied cell, and target ids only for cells sources occupy."""

    granularity: Granularity
    source_cells: dict = field(default_factory=dict)
    target_cells: dict = field(default_factory=dict)
    source_ranges: dict = field(default_factory=dict)
    target_ranges: dict = field(default_factory=dict)

    def shared_cells(self) -> list:
        """Cells holding both sources and targets, in lexicographic order."""
        return sorted(c for c in self.target_cells if c in self.source_cells)

    def owner(self, sid: str, tid: str):
        """Smallest cell (lexicographically) that both geometries occupy."""
        best = None
        for rs in self.source_ranges[sid]:
            for rt in self.target_ranges[tid]:
                i = max(rs[0], rt[0])
                j = max(rs[2], rt[2])
                if i <= min(rs[1], rt[1]) and j <= min(rs[3], rt[3]):
                    if best is None or (i, j) < best:
                        best = (i, j)
        return best


def build_index(s, t, g: Granularity) -> SparseTileIndex:
    """Two-phase sparse index.

    Phase 1 tiles every source; phase 2 adds a target to a cell only when
    that cell already holds a source.  Accepts datasets or resource lists.
    Id lists per cell are sorted.
    """
    s_res = s.resources if isinstance(s, Dataset) else tuple(s)
    t_res = t.resources if isinstance(t, Dataset) else tuple(t)
    idx = SparseTileIndex(g)
    src = idx.source_cells
    for r in s_res:
        ranges = tuple(cell_range(b, g) for b in r.boxes)
        idx.source_ranges[r.id] = ranges
        for rg in ranges:
            for cell in _cells_of(rg):
                bucket = src.get(cell)
                if bucket is None:
                    src[cell] = [r.id]
                elif bucket[-1] != r.id:
                    bucket.append(r.id)
    tgt = idx.target_cells
    for r in t_res:
        ranges = tuple(cell_range(b, g) for b in r.boxes)
        hit = False
        for rg in ranges:
            if _range_size(rg) <= len(src):
                cells = (c for c in _cells_of(rg) if c in src)
            else:
                cells = (c for c in src if rg[0] <= c[0] <= rg[1] and rg[2] <= c[1] <= rg[3])
            for cell in cells:
                bucket = tgt.get(cell)
                if bucket is None:
                    tgt[cell] = [r.id]
                elif bucket[-1] != r.id:
                    bucket.append(r.id)
                hit = True
        if hit:
            idx.target_ranges[r.id] = ranges
    for table in (src, tgt):
        for cell, ids in table.items():
            table[cell] = sorted(set(ids))
    return idx
