"""End-to-end link discovery: swap, granularity, sparse index, filtered evaluation."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass

from .cellwork import DEDUP_MODES, LinkContext, Mapping, RunStats
from .errors import ConfigError, EmptyDataset, NumericalDegeneracy
from .parallel import DEFAULT_CHUNK_SIZE, ExecutorConfig, run_parallel
from .relations import Relation, evaluate
from .tiling import DELTA_MODES, Dataset, build_index, parse_heuristic, plan_swap, select_granularity

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinkConfig:
    heuristic: str = "avg"
    delta_mode: str = "literal"
    swap: bool = True
    workers: int = 1
    chunk_size: int = DEFAULT_CHUNK_SIZE
    schedule: str = "round-robin"
    dedup: str = "owner"
    unsound_filter: bool = False

    def __post_init__(self):
        parse_heuristic(self.heuristic)
        if self.delta_mode not in DELTA_MODES:
            raise ConfigError(f"unknown delta mode {self.delta_mode!r}")
        if self.dedup not in DEDUP_MODES:
            raise ConfigError(f"unknown dedup mode {self.dedup!r}")
        if self.dedup == "cache" and self.workers > 1:
            raise ConfigError("the shared-cache dedup mode only runs with a single worker")
        self.executor  # validates workers / chunk size / schedule

    @property
    def executor(self) -> ExecutorConfig:
        return ExecutorConfig(self.workers, self.chunk_size, self.schedule)


def _check_inputs(s: Dataset, t: Dataset) -> None:
    if not len(s):
        raise EmptyDataset("source dataset is empty")
    if not len(t):
        raise EmptyDataset("target dataset is empty")


def link(s: Dataset, t: Dataset, r: Relation | str, config: LinkConfig | None = None) -> tuple[Mapping, RunStats]:
    """Compute ``{(s, t) : r(s, t)}`` using the sparse tile index.

    Pairs are always oriented source -> target, whether or not the datasets
    were swapped internally.  ``disjoint`` is answered as the complement of
    ``intersects``.
    """
    cfg = config or LinkConfig()
    rel = Relation.parse(r)
    _check_inputs(s, t)
    if rel is Relation.DISJOINT:
        inner, stats = link(s, t, Relation.INTERSECTS, cfg)
        everything = {(a, b) for a in s.ids for b in t.ids}
        pairs = frozenset(everything - inner.pairs)
        stats.relation = rel.value
        stats.links = len(pairs)
        return Mapping(pairs, rel), stats

    stats = RunStats(relation=rel.value, source_size=len(s), target_size=len(t))
    stats.workers = cfg.workers
    stats.chunk_size = cfg.chunk_size
    t_start = time.perf_counter()

    if cfg.swap:
        s_eff, t_eff, r_eff, reversed_ = plan_swap(s, t, rel)
    else:
        s_eff, t_eff, r_eff, reversed_ = s, t, rel, False
    stats.swapped = reversed_
    t1 = time.perf_counter()
    stats.time_swap = t1 - t_start

    gran = select_granularity(s_eff, t_eff, cfg.heuristic, cfg.delta_mode)
    stats.heuristic = gran.heuristic
    stats.delta_lon = gran.delta_lon
    stats.delta_lat = gran.delta_lat
    t2 = time.perf_counter()
    stats.time_granularity = t2 - t1

    index = build_index(s_eff, t_eff, gran)
    shared = index.shared_cells()
    stats.cells_total = len(index.source_cells)
    stats.cells_shared = len(shared)
    t3 = time.perf_counter()
    stats.time_index = t3 - t2

    ctx = LinkContext(r_eff, index, s_eff.by_id, t_eff.by_id, cfg.dedup, cfg.unsound_filter)
    result = run_parallel(ctx, cfg.executor, shared)
    stats.absorb(result.stats)
    t4 = time.perf_counter()
    stats.time_link = t4 - t3

    pairs = frozenset(result.pairs)
    if reversed_:
        pairs = frozenset((b, a) for a, b in pairs)
    stats.links = len(pairs)
    stats.time_total = time.perf_counter() - t_start
    log.info(
        "%s: %d links, %d full computations, %d filtered, swapped=%s",
        rel.value,
        stats.links,
        stats.full_computations,
        stats.mbb_filtered,
        reversed_,
    )
    return Mapping(pairs, rel), stats


def brute_force_link(s: Dataset, t: Dataset, r: Relation | str, stats: RunStats | None = None) -> Mapping:
    """Evaluate ``r`` on every pair of ``S x T``; the correctness reference for :func:`link`."""
    rel = Relation.parse(r)
    _check_inputs(s, t)
    pairs = []
    for a in s.resources:
        for b in t.resources:
            if stats is not None:
                stats.full_computations += 1
            try:
                if evaluate(rel, a.geometry, b.geometry):
                    pairs.append((a.id, b.id))
            except NumericalDegeneracy as exc:
                if stats is not None:
                    stats.failures += 1
                log.warning("pair (%s, %s) skipped: %s", a.id, b.id, exc)
    return Mapping(frozenset(pairs), rel)


def diff(m1: Mapping, m2: Mapping) -> tuple[set, set]:
    """Pairs only in ``m1`` and pairs only in ``m2``."""
    return set(m1.pairs - m2.pairs), set(m2.pairs - m1.pairs)
