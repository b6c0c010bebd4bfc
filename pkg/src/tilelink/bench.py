"""Naive-vs-indexed comparisons on synthetic or user supplied corpora.

Every timing is the median of ``reps`` wall-clock runs.  When the all-pairs
baseline would be too slow, its time is extrapolated from a fixed seeded
sample of pairs and the row is flagged ``naive_estimated``.
"""

from __future__ import annotations

import hashlib
import logging
import random
import statistics
import time
from dataclasses import asdict, dataclass, fields
from typing import Callable, Iterable

from .linker import LinkConfig, brute_force_link, link
from .relations import CORE_RELATIONS, Relation, evaluate
from .synthetic import SyntheticCorpusSpec, clustered_corpus
from .tiling import Dataset

log = logging.getLogger(__name__)

HEURISTIC_CHOICES = ("min", "max", "avg", "median")
DEFAULT_NAIVE_LIMIT = 200_000


def timed(fn: Callable, reps: int = 3):
    """Run ``fn`` ``reps`` times; return the last result and the median wall time."""
    times = []
    result = None
    for _ in range(max(1, reps)):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return result, statistics.median(times)


def mapping_digest(pairs) -> str:
    h = hashlib.sha256()
    for s, t in sorted(pairs):
        h.update(f"{s}\t{t}\n".encode())
    return h.hexdigest()[:16]


@dataclass
class BenchRow:
    relation: str
    links: int
    naive_computations: int
    indexed_computations: int
    reduction: float
    naive_time: float
    indexed_time: float
    speedup: float
    naive_estimated: bool = False


def _naive_time(s: Dataset, t: Dataset, rel: Relation, reps: int, limit: int, seed: int) -> tuple[float, bool]:
    total = len(s) * len(t)
    if total <= limit:
        _, secs = timed(lambda: brute_force_link(s, t, rel), reps)
        return secs, False
    # time a fixed sample of pairs and scale up
    rng = random.Random(seed)
    src, tgt = s.resources, t.resources
    sample = [(rng.randrange(len(src)), rng.randrange(len(tgt))) for _ in range(limit)]

    def run():
        n = 0
        for a, b in sample:
            n += evaluate(rel, src[a].geometry, tgt[b].geometry)
        return n

    _, secs = timed(run, reps)
    return secs * total / limit, True


def bench_relations(
    s: Dataset,
    t: Dataset,
    relations: Iterable = CORE_RELATIONS,
    config: LinkConfig | None = None,
    reps: int = 3,
    naive_limit: int = DEFAULT_NAIVE_LIMIT,
    seed: int = 0,
) -> list[BenchRow]:
    """One row per relation: computation counts and times for brute force vs the index."""
    cfg = config or LinkConfig()
    rows = []
    naive = len(s) * len(t)
    for r in relations:
        rel = Relation.parse(r)
        (mapping, stats), indexed_time = timed(lambda: link(s, t, rel, cfg), reps)
        naive_time, estimated = _naive_time(s, t, rel, reps, naive_limit, seed)
        comps = stats.full_computations
        rows.append(
            BenchRow(
                relation=rel.value,
                links=len(mapping),
                naive_computations=naive,
                indexed_computations=comps,
                reduction=naive / comps if comps else float("inf"),
                naive_time=naive_time,
                indexed_time=indexed_time,
                speedup=naive_time / indexed_time if indexed_time > 0 else float("inf"),
                naive_estimated=estimated,
            )
        )
        log.info("bench %s: %d links, %d computations", rel.value, len(mapping), comps)
    return rows


@dataclass
class HeuristicRow:
    corpus: int
    times: dict  # heuristic -> seconds
    best: str
    avg_ratio: float  # avg time / best time

    @property
    def avg_within(self) -> bool:
        return self.avg_ratio <= 1.25


def heuristic_study(
    seeds: Iterable[int],
    spec: SyntheticCorpusSpec | None = None,
    relation: Relation | str = Relation.INTERSECTS,
    reps: int = 3,
    heuristics: Iterable[str] = HEURISTIC_CHOICES,
    config: LinkConfig | None = None,
) -> list[HeuristicRow]:
    """Time each granularity heuristic on one clustered corpus per seed."""
    base = spec or SyntheticCorpusSpec(source_count=300, target_count=300)
    cfg = config or LinkConfig()
    rows = []
    for seed in seeds:
        s, t = clustered_corpus(SyntheticCorpusSpec(**{**asdict(base), "seed": seed}))
        s.resources, t.resources  # splitting is shared work, keep it out of the timings
        times = {}
        for h in heuristics:
            run_cfg = LinkConfig(**{**asdict(cfg), "heuristic": h})
            _, secs = timed(lambda: link(s, t, relation, run_cfg), reps)
            times[h] = secs
        best = min(times, key=times.get)
        ratio = times.get("avg", float("nan")) / times[best]
        rows.append(HeuristicRow(seed, times, best, ratio))
    return rows


@dataclass
class SweepRow:
    workers: int
    links: int
    digest: str
    full_computations: int
    time: float


def workers_sweep(
    s: Dataset,
    t: Dataset,
    relation: Relation | str,
    workers: Iterable[int] = (1, 2, 4, 8),
    config: LinkConfig | None = None,
    reps: int = 1,
) -> list[SweepRow]:
    cfg = config or LinkConfig()
    rows = []
    for w in workers:
        run_cfg = LinkConfig(**{**asdict(cfg), "workers": w})
        (m, st), secs = timed(lambda: link(s, t, relation, run_cfg), reps)
        rows.append(SweepRow(w, len(m), mapping_digest(m.pairs), st.full_computations, secs))
    return rows


def _cell(v) -> str:
    if isinstance(v, float):
        return f"{v:.4g}"
    if isinstance(v, bool):
        return str(v).lower()
    return str(v)


def format_table(rows: list) -> str:
    """Tab separated table with a header line; works for any of the row dataclasses."""
    if not rows:
        return ""
    if isinstance(rows[0], HeuristicRow):
        names = list(rows[0].times)
        head = ["corpus", *names, "best", "avg_ratio", "avg_within_25pct"]
        body = [[r.corpus, *(r.times[n] for n in names), r.best, r.avg_ratio, r.avg_within] for r in rows]
    else:
        head = [f.name for f in fields(rows[0])]
        body = [[getattr(r, n) for n in head] for r in rows]
    lines = ["\t".join(head)]
    lines += ["\t".join(_cell(v) for v in row) for row in body]
    return "\n".join(lines) + "\n"


def summarize_study(rows: list[HeuristicRow]) -> str:
    hits = sum(r.avg_within for r in rows)
    wins = {}
    for r in rows:
        wins[r.best] = wins.get(r.best, 0) + 1
    won = ", ".join(f"{k}={v}" for k, v in sorted(wins.items()))
    return f"avg within 25% of best on {hits}/{len(rows)} corpora; fastest counts: {won}"
