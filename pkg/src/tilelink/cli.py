"""Command-line front end: ``link``, ``oracle`` and ``bench``.

Exit codes:

    0  success
    1  finished, but some pairs could not be evaluated (numerical degeneracy)
    2  usage or configuration error, including unknown relations and empty datasets
    3  input/output error (unreadable file, unwritable output)
    4  oracle found a difference between indexed and brute-force results
    5  internal or worker failure
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import bench as benchmod
from .errors import ConfigError, EmptyDataset, IoError, TilelinkError, UnsupportedRelation, ZeroGranularity
from .io import load_dataset, format_stats, write_links, write_stats
from .linker import LinkConfig, brute_force_link, diff, link
from .parallel import DEFAULT_CHUNK_SIZE, ParallelRunError
from .relations import CORE_RELATIONS, Relation
from .synthetic import SyntheticCorpusSpec, clustered_corpus
from .tiling import DELTA_MODES, parse_heuristic

log = logging.getLogger("tilelink")

EXIT_OK = 0
EXIT_PAIR_FAILURES = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_DIFF = 4
EXIT_INTERNAL = 5

FORMATS = ("nt", "tsv", "csv")


def setup_logging() -> None:
    """Verbosity comes from RADON_LOG: a level name (debug, info, ...) or a number."""
    token = os.environ.get("RADON_LOG", "").strip().upper()
    if token.isdigit():
        level = int(token)
    else:
        level = logging.getLevelName(token or "WARNING")
        if not isinstance(level, int):
            level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def _relation(token: str) -> Relation:
    try:
        return Relation.parse(token)
    except UnsupportedRelation as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _heuristic(token: str) -> str:
    try:
        parse_heuristic(token)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return token.strip().lower()


def _positive(token: str) -> int:
    try:
        v = int(token)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {token!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _add_run_options(p: argparse.ArgumentParser, need_inputs: bool) -> None:
    p.add_argument("--source", type=Path, required=need_inputs, help="source dataset file")
    p.add_argument("--source-format", choices=FORMATS, default="nt")
    p.add_argument("--target", type=Path, required=need_inputs, help="target dataset file")
    p.add_argument("--target-format", choices=FORMATS, default="nt")
    p.add_argument("--geometry-predicate", default=None, help="IRI of the WKT-valued predicate in N-Triples input")
    p.add_argument("--heuristic", type=_heuristic, default="avg", help="min, max, avg, median or fixed:<cells per degree>")
    p.add_argument("--delta-mode", choices=DELTA_MODES, default="literal")
    p.add_argument("--threads", type=_positive, default=1, help="worker processes (default 1)")
    p.add_argument("--chunk-size", type=_positive, default=DEFAULT_CHUNK_SIZE, help="cells per work chunk")
    p.add_argument("--schedule", choices=("round-robin", "work-stealing"), default="round-robin")
    p.add_argument("--no-swap", action="store_true", help="never swap source and target internally")
    p.add_argument("--stats", type=Path, help="write run statistics as key=value lines")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tilelink", description="Discover topological links between two geometry datasets.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("link", help="compute the links for one relation")
    _add_run_options(p, need_inputs=True)
    p.add_argument("--relation", type=_relation, required=True)
    p.add_argument("--output", type=Path, required=True)
    p.add_argument("--output-format", choices=("nt", "tsv"), default="nt")
    p.add_argument("--predicate", help="link predicate IRI for nt output")

    p = sub.add_parser("oracle", help="compare indexed linking with brute force")
    _add_run_options(p, need_inputs=True)
    p.add_argument("--relation", type=_relation, required=True)
    # deliberately breaks the bounding-box filter; only used to test the diff harness
    p.add_argument("--inject-unsound-filter", action="store_true", help=argparse.SUPPRESS)

    p = sub.add_parser("bench", help="naive vs indexed counts and timings")
    _add_run_options(p, need_inputs=False)
    p.add_argument("--relation", type=_relation, action="append", help="repeatable; default: the seven core relations")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--clusters", type=_positive, default=10)
    p.add_argument("--count", type=int, default=1000, help="geometries per synthetic dataset")
    p.add_argument("--spread", type=float, default=1.0, help="cluster standard deviation in degrees")
    p.add_argument("--antimeridian-fraction", type=float, default=0.0)
    p.add_argument("--reps", type=_positive, default=3, help="repetitions per timing (median is reported)")
    p.add_argument("--naive-limit", type=_positive, default=benchmod.DEFAULT_NAIVE_LIMIT,
                   help="largest |S|*|T| timed exhaustively; bigger baselines are sampled")
    p.add_argument("--heuristic-study", type=int, default=0, metavar="N", help="also time every heuristic on N seeded corpora")
    p.add_argument("--sweep", type=str, default="", metavar="W,W,...", help="also run a workers sweep, e.g. 1,2,4,8")
    p.add_argument("--output", type=Path, help="write the report here instead of stdout")
    return parser


def _config(args) -> LinkConfig:
    return LinkConfig(
        heuristic=args.heuristic,
        delta_mode=args.delta_mode,
        swap=not args.no_swap,
        workers=args.threads,
        chunk_size=args.chunk_size,
        schedule=args.schedule,
        unsound_filter=getattr(args, "inject_unsound_filter", False),
    )


def _check_paths(args) -> None:
    paths = [getattr(args, n, None) for n in ("source", "target", "output", "stats")]
    resolved = [p.resolve() for p in paths if p is not None]
    named = [p for p in paths if p is not None]
    if len(set(resolved)) != len(resolved):
        raise ConfigError("input, output and stats paths must all be different: " + ", ".join(map(str, named)))


def _load(args):
    kw = {}
    if args.geometry_predicate:
        kw["geometry_predicate"] = args.geometry_predicate
    s = load_dataset(args.source, args.source_format, "source", **kw)
    t = load_dataset(args.target, args.target_format, "target", **kw)
    return s, t


def _report(stats) -> None:
    print(
        f"{stats.relation}: {stats.links} links, {stats.full_computations} full computations, "
        f"{stats.mbb_filtered} filtered, {stats.failures} failures, {stats.time_total:.3f}s",
        file=sys.stderr,
    )


def cmd_link(args) -> int:
    cfg = _config(args)
    _check_paths(args)
    s, t = _load(args)
    mapping, stats = link(s, t, args.relation, cfg)
    write_links(mapping, args.output, args.output_format, args.predicate)
    if args.stats:
        write_stats(stats, args.stats)
    _report(stats)
    return EXIT_PAIR_FAILURES if stats.failures else EXIT_OK


def cmd_oracle(args) -> int:
    cfg = _config(args)
    _check_paths(args)
    s, t = _load(args)
    mapping, stats = link(s, t, args.relation, cfg)
    reference = brute_force_link(s, t, args.relation)
    only_link, only_brute = diff(mapping, reference)
    for a, b in sorted(only_link):
        print(f"+\t{a}\t{b}")
    for a, b in sorted(only_brute):
        print(f"-\t{a}\t{b}")
    if args.stats:
        write_stats(stats, args.stats)
    n = len(only_link) + len(only_brute)
    print(
        f"oracle {args.relation.value}: {len(mapping)} indexed, {len(reference)} brute force, "
        f"{len(only_link)} extra, {len(only_brute)} missing",
        file=sys.stderr,
    )
    if n:
        return EXIT_DIFF
    return EXIT_PAIR_FAILURES if stats.failures else EXIT_OK


def cmd_bench(args) -> int:
    cfg = _config(args)
    _check_paths(args)
    if (args.source is None) != (args.target is None):
        raise ConfigError("--source and --target must be given together")
    if args.count < 0:
        raise ConfigError("--count must be >= 0")
    spec = SyntheticCorpusSpec(
        source_count=args.count,
        target_count=args.count,
        clusters=args.clusters,
        spread=args.spread,
        antimeridian_fraction=args.antimeridian_fraction,
        seed=args.seed,
    )
    if args.source is not None:
        s, t = _load(args)
        corpus = f"files {args.source} x {args.target}"
    else:
        s, t = clustered_corpus(spec)
        corpus = f"synthetic clusters={args.clusters} count={args.count} seed={args.seed}"
    relations = args.relation or list(CORE_RELATIONS)
    out = [f"# corpus: {corpus} ({len(s)} x {len(t)})"]
    rows = benchmod.bench_relations(s, t, relations, cfg, args.reps, args.naive_limit, args.seed)
    out.append(benchmod.format_table(rows).rstrip("\n"))
    if args.sweep:
        try:
            counts = [int(w) for w in args.sweep.split(",") if w.strip()]
        except ValueError:
            raise ConfigError(f"bad --sweep list {args.sweep!r}") from None
        sweep = benchmod.workers_sweep(s, t, relations[0], counts, cfg)
        out.append(f"# workers sweep ({Relation.parse(relations[0]).value})")
        out.append(benchmod.format_table(sweep).rstrip("\n"))
        if len({(r.digest, r.full_computations) for r in sweep}) != 1:
            log.error("workers sweep produced differing results")
            return EXIT_INTERNAL
    if args.heuristic_study:
        seeds = range(args.seed, args.seed + args.heuristic_study)
        study = benchmod.heuristic_study(seeds, spec, relations[0], args.reps, config=cfg)
        out.append("# granularity heuristic study")
        out.append(benchmod.format_table(study).rstrip("\n"))
        out.append("# " + benchmod.summarize_study(study))
    text = "\n".join(out) + "\n"
    if args.output:
        try:
            args.output.write_text(text, encoding="utf-8")
        except OSError as exc:
            raise IoError(f"cannot write {args.output}: {exc}") from exc
    else:
        sys.stdout.write(text)
    if args.stats:
        _, stats = link(s, t, relations[0], cfg)
        write_stats(stats, args.stats)
    return EXIT_OK


COMMANDS = {"link": cmd_link, "oracle": cmd_oracle, "bench": cmd_bench}


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, (ConfigError, UnsupportedRelation, ZeroGranularity, EmptyDataset)):
        return EXIT_USAGE
    if isinstance(exc, (IoError, OSError)):
        return EXIT_IO
    return EXIT_INTERNAL


def main(argv=None) -> int:
    setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with 2 on usage errors
    try:
        return COMMANDS[args.command](args)
    except ParallelRunError as exc:
        log.error("%s (partial stats: %s)", exc, format_stats(exc.stats).replace("\n", " "))
        return EXIT_INTERNAL
    except TilelinkError as exc:
        log.error("%s", exc)
        return exit_code_for(exc)
    except OSError as exc:
        log.error("%s", exc)
        return EXIT_IO
    except Exception:
        log.exception("internal error")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
