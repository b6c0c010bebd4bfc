"""Round-robin chunked execution of cell work across worker processes."""

from __future__ import annotations

import logging
import multiprocessing as mp
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .cellwork import CellResult, LinkContext, RunStats, process_cells
from .errors import ConfigError, TilelinkError

log = logging.getLogger(__name__)

DEFAULT_CHUNK_SIZE = 1000
MODES = ("round-robin", "work-stealing")


@dataclass(frozen=True)
class ExecutorConfig:
    workers: int = 1
    chunk_size: int = DEFAULT_CHUNK_SIZE
    mode: str = "round-robin"

    def __post_init__(self):
        if int(self.workers) < 1:
            raise ConfigError("workers must be >= 1")
        if int(self.chunk_size) < 1:
            raise ConfigError("chunk_size must be >= 1")
        if self.mode not in MODES:
            raise ConfigError(f"unknown scheduling mode {self.mode!r}")


@dataclass(frozen=True)
class WorkChunk:
    index: int
    cells: tuple


class ParallelRunError(TilelinkError):
    """A worker failed; ``stats`` holds whatever the finished workers reported."""

    def __init__(self, msg: str, stats: RunStats):
        super().__init__(msg)
        self.stats = stats


def chunk(cells, chunk_size: int) -> list[WorkChunk]:
    cells = list(cells)
    return [WorkChunk(k, tuple(cells[i : i + chunk_size])) for k, i in enumerate(range(0, len(cells), chunk_size))]


def schedule(cells, cfg: ExecutorConfig) -> list[tuple[WorkChunk, int]]:
    """Static round robin: chunk ``k`` goes to worker ``k mod workers``."""
    return [(c, c.index % cfg.workers) for c in chunk(cells, cfg.chunk_size)]


_CTX: LinkContext | None = None


def _init_worker(ctx: LinkContext) -> None:
    global _CTX
    _CTX = ctx


def _run_chunks(chunks: list[tuple]) -> CellResult:
    out = CellResult()
    for cells in chunks:
        part = process_cells(_CTX, cells)
        out.pairs.extend(part.pairs)
        out.stats.absorb(part.stats)
    return out


def _pool(cfg: ExecutorConfig, ctx: LinkContext) -> ProcessPoolExecutor:
    methods = mp.get_all_start_methods()
    mctx = mp.get_context("fork" if "fork" in methods else methods[0])
    return ProcessPoolExecutor(max_workers=cfg.workers, mp_context=mctx, initializer=_init_worker, initargs=(ctx,))


def run_parallel(ctx: LinkContext, cfg: ExecutorConfig, cells=None) -> CellResult:
    """Process the shared cells of ``ctx.index`` and merge the per-worker results.

    The merged pair list is sorted, so the outcome does not depend on the
    worker count or on completion order.
    """
    if cells is None:
        cells = ctx.index.shared_cells()
    if cfg.workers > 1 and ctx.dedup != "owner":
        raise ConfigError("the shared-cache dedup mode only runs with a single worker")
    plan = schedule(cells, cfg)
    merged = CellResult()
    if cfg.workers == 1 or len(plan) <= 1:
        cache = set() if ctx.dedup == "cache" else None
        for c, _ in plan:
            part = process_cells(ctx, c.cells, cache)
            merged.pairs.extend(part.pairs)
            merged.stats.absorb(part.stats)
        merged.pairs.sort()
        return merged

    if cfg.mode == "round-robin":
        per_worker: list[list] = [[] for _ in range(cfg.workers)]
        for c, w in plan:
            per_worker[w].append(c.cells)
        jobs = [chunks for chunks in per_worker if chunks]
    else:
        jobs = [[c.cells] for c, _ in plan]

    failed = None
    with _pool(cfg, ctx) as pool:
        futures = [pool.submit(_run_chunks, job) for job in jobs]
        for fut in futures:
            try:
                part = fut.result()
            except Exception as exc:  # a worker died or raised
                failed = failed or exc
                continue
            merged.pairs.extend(part.pairs)
            merged.stats.absorb(part.stats)
    if failed is not None:
        raise ParallelRunError(f"worker failed: {failed!r}", merged.stats)
    merged.pairs.sort()
    return merged
