"""Link generation over index cells: the unit of work shared by the sequential and parallel paths."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, fields

from .errors import NumericalDegeneracy
from .relations import Relation, evaluate, test_mbb
from .tiling import SparseTileIndex

log = logging.getLogger(__name__)

DEDUP_MODES = ("owner", "cache")


@dataclass(frozen=True)
class Mapping:
    pairs: frozenset
    relation: Relation

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.sorted_pairs())

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def sorted_pairs(self) -> list[tuple[str, str]]:
        return sorted(self.pairs)

    def reversed(self, relation: Relation | None = None) -> Mapping:
        """Pairwise flip ``(s, t) -> (t, s)``, relabelled with ``relation``."""
        return Mapping(frozenset((t, s) for s, t in self.pairs), relation or self.relation.reverse)


@dataclass
class RunStats:
    """Counters and timings of one run; field order is the report order."""

    relation: str = ""
    source_size: int = 0
    target_size: int = 0
    swapped: bool = False
    heuristic: str = ""
    delta_lon: float = 0.0
    delta_lat: float = 0.0
    cells_total: int = 0
    cells_shared: int = 0
    pair_encounters: int = 0
    cache_hits: int = 0
    mbb_filtered: int = 0
    full_computations: int = 0
    failures: int = 0
    links: int = 0
    workers: int = 1
    chunk_size: int = 0
    time_swap: float = 0.0
    time_granularity: float = 0.0
    time_index: float = 0.0
    time_link: float = 0.0
    time_total: float = 0.0

    COUNTERS = ("pair_encounters", "cache_hits", "mbb_filtered", "full_computations", "failures")

    def absorb(self, other: RunStats) -> None:
        for name in self.COUNTERS:
            setattr(self, name, getattr(self, name) + getattr(other, name))

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass
class LinkContext:
    """Read-only inputs a worker needs to process cells."""

    relation: Relation
    index: SparseTileIndex
    sources: dict  # id -> Resource
    targets: dict
    dedup: str = "owner"
    unsound_filter: bool = False  # test hook: breaks the MBB filter on purpose


@dataclass
class CellResult:
    pairs: list = field(default_factory=list)
    stats: RunStats = field(default_factory=RunStats)


def _filter(ctx: LinkContext, s, t) -> bool:
    if ctx.unsound_filter:
        return s.mbb.same_as(t.mbb)
    return test_mbb(ctx.relation, s.mbb, t.mbb).proceed


def process_cells(ctx: LinkContext, cells, cache: set | None = None) -> CellResult:
    """Enumerate candidate pairs cell by cell, filter, and evaluate the relation.

    With ``dedup="owner"`` a pair is handled only in the smallest cell both
    geometries occupy, so no state is shared between cells.  With
    ``dedup="cache"`` an explicit set of seen pairs is used instead (single
    worker only).
    """
    out = CellResult()
    st = out.stats
    src_cells = ctx.index.source_cells
    tgt_cells = ctx.index.target_cells
    owner = ctx.index.owner
    use_owner = ctx.dedup == "owner"
    if not use_owner and cache is None:
        cache = set()
    r = ctx.relation
    for cell in cells:
        hs = src_cells.get(cell)
        ht = tgt_cells.get(cell)
        if not hs or not ht:
            continue
        for sid in hs:
            s = ctx.sources[sid]
            for tid in ht:
                st.pair_encounters += 1
                if use_owner:
                    if owner(sid, tid) != cell:
                        st.cache_hits += 1
                        continue
                else:
                    key = (sid, tid)
                    if key in cache:
                        st.cache_hits += 1
                        continue
                    cache.add(key)
                t = ctx.targets[tid]
                if not _filter(ctx, s, t):
                    st.mbb_filtered += 1
                    continue
                st.full_computations += 1
                try:
                    if evaluate(r, s.geometry, t.geometry):
                        out.pairs.append((sid, tid))
                except NumericalDegeneracy as exc:
                    st.failures += 1
                    log.warning("pair (%s, %s) skipped: %s", sid, tid, exc)
    return out
