"""Command-line entry point: ``simplets <subcommand> ...``.

Exit codes: 0 success, 1 usage, 2 I/O, 3 computation error.
"""
from __future__ import annotations

import argparse
import csv
import glob
import io as _io
import logging
import os
import sys
import time

import numpy as np

from . import analysis, colorcoding, exact, io, simpletgen
from .core import primal_graph

log = logging.getLogger("simplets")

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_COMPUTE = 0, 1, 2, 3
DEFAULT_THREADS = os.cpu_count() or 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def derive_seed(seed: int, *path: int) -> int:
    """Deterministic child seed for a labeled sub-computation."""
    return int(np.random.SeedSequence([int(seed), *map(int, path)]).generate_state(2, np.uint64)[0] >> 1)


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {value}")
    return value


def _sample_list(text):
    try:
        values = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError("sample sizes must be positive")
    return values


def _add_input(p, with_format=True):
    p.add_argument("--input", required=True, help="plain file, or benson prefix")
    if with_format:
        p.add_argument("--format", choices=io.FORMATS, default="plain")


def _add_k(p):
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--catalog", help="catalog file written by 'gen'")
    p.add_argument("--allow-k6", action="store_true", help="permit k=6 (large match table)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="simplets", description="Simplet counting in simplicial complexes.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="enumerate the simplets of size k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out")

    p = sub.add_parser("exact", help="exact simplet counts")
    _add_input(p)
    _add_k(p)
    p.add_argument("--threads", type=_positive, default=DEFAULT_THREADS)
    p.add_argument("--max-subsets", type=float, default=exact.DEFAULT_MAX_SUBSETS)
    p.add_argument("--out")
    p.add_argument("--timing", action="store_true", help="record wall time in the report")

    p = sub.add_parser("count", help="color-coding estimate of simplet counts")
    _add_input(p)
    _add_k(p)
    p.add_argument("--samples", type=_positive, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=_positive, default=DEFAULT_THREADS)
    p.add_argument("--out")
    p.add_argument("--timing", action="store_true", help="record wall time in the report")

    p = sub.add_parser("error", help="normalized error of an estimate")
    p.add_argument("--exact", required=True)
    p.add_argument("--estimate", required=True)

    p = sub.add_parser("profile", help="characteristic profile against the null model")
    _add_input(p)
    _add_k(p)
    p.add_argument("--method", choices=("sc3", "exact"), default="sc3")
    p.add_argument("--samples", type=_positive, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--shuffles", type=_positive, default=analysis.DEFAULT_C_SHUFFLE)
    p.add_argument("--null-replicas", type=_positive, default=1)
    p.add_argument("--epsilon", type=float, default=analysis.DEFAULT_EPSILON)
    p.add_argument("--threads", type=_positive, default=DEFAULT_THREADS)
    p.add_argument("--dataset-id")
    p.add_argument("--out")

    p = sub.add_parser("cluster", help="cosine similarity and k-means++ over profiles")
    p.add_argument("--profiles", required=True, help="glob of profile files")
    p.add_argument("--clusters", type=_positive, required=True)
    p.add_argument("--trials", type=_positive, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-prefix", help="write <prefix>-assignments.csv and <prefix>-similarity.csv")

    p = sub.add_parser("convergence", help="estimate spread versus sample size")
    _add_input(p)
    _add_k(p)
    p.add_argument("--samples", type=_sample_list, required=True)
    p.add_argument("--trials", type=_positive, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=_positive, default=DEFAULT_THREADS)
    p.add_argument("--fixed-coloring", action="store_true",
                   help="reuse one coloring for every trial (single-trial spread)")
    p.add_argument("--out")
    p.add_argument("--timing", action="store_true", help="add a wall-time column")
    return parser


def _catalog(args):
    if args.k == 6 and not args.allow_k6:
        raise UsageError("k=6 needs --allow-k6")
    if not 3 <= args.k <= 6:
        raise UsageError(f"k must be in 3..6, got {args.k}")
    if args.catalog:
        cat = simpletgen.load_catalog(args.catalog)
        if cat.k != args.k:
            raise UsageError(f"catalog is for k={cat.k}, not {args.k}")
        return cat
    return simpletgen.get_catalog(args.k)


def _emit(text: str, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_gen(args):
    if not 1 <= args.k <= 6:
        raise UsageError(f"k must be in 1..6, got {args.k}")
    cat = simpletgen.get_catalog(args.k)
    if args.out:
        simpletgen.save_catalog(cat, args.out)
    print(f"k={args.k} simplets={len(cat)}")


def _cmd_exact(args):
    cat = _catalog(args)
    complex, _ = io.load_dataset(args.input, args.format)
    report = exact.count_exact(complex, cat, threads=args.threads, max_subsets=args.max_subsets,
                               match_table=simpletgen.build_match_table(cat, allow_k6=True))
    log.info("exact counting took %.3fs", report.elapsed)
    _emit(io.dumps_report(report, args.timing), args.out)


def _cmd_count(args):
    cat = _catalog(args)
    complex, _ = io.load_dataset(args.input, args.format)
    report = colorcoding.sc3(complex, cat, args.samples, rng_seed=args.seed, threads=args.threads,
                             match_table=simpletgen.build_match_table(cat, allow_k6=True))
    log.info("sc3 took %.3fs", report.elapsed)
    _emit(io.dumps_report(report, args.timing), args.out)


def _cmd_error(args):
    err = analysis.normalized_error(io.load_report(args.exact), io.load_report(args.estimate))
    print(repr(err))


def _cmd_profile(args):
    cat = _catalog(args)
    complex, desc = io.load_dataset(args.input, args.format)
    table = simpletgen.build_match_table(cat, allow_k6=True)

    def counts(K, seed):
        if args.method == "exact":
            return exact.count_exact(K, cat, threads=args.threads, match_table=table)
        return colorcoding.sc3(K, cat, args.samples, rng_seed=seed, threads=args.threads,
                               match_table=table)

    count_seed = derive_seed(args.seed, 0)
    ours = counts(complex, count_seed)
    null_seeds, null_count_seeds, nulls = [], [], []
    for r in range(args.null_replicas):
        shuffle_seed, null_count_seed = derive_seed(args.seed, 1, r), derive_seed(args.seed, 2, r)
        K_r = analysis.null_model(complex, analysis.NullModelConfig(args.shuffles, shuffle_seed))
        nulls.append(counts(K_r, null_count_seed))
        null_seeds.append(shuffle_seed)
        null_count_seeds.append(null_count_seed)
    provenance = {
        "dataset": args.dataset_id or desc.name,
        "method": args.method,
        "samples": args.samples if args.method == "sc3" else 0,
        "epsilon": args.epsilon,
        "c_shuffle": args.shuffles,
        "null_replicas": args.null_replicas,
        "seeds": {"base": args.seed, "count": count_seed,
                  "null_model": null_seeds, "null_count": null_count_seeds},
    }
    prof = analysis.characteristic_profile(ours, nulls, args.epsilon, provenance)
    _emit(io.dumps_profile(prof), args.out)


def _csv(rows) -> str:
    buf = _io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _cmd_cluster(args):
    paths = sorted(glob.glob(args.profiles))
    if not paths:
        raise FileNotFoundError(f"no profiles match {args.profiles!r}")
    profiles = [io.load_profile(p) for p in paths]
    names = [p.provenance.get("dataset", path) for p, path in zip(profiles, paths)]
    sim = analysis.cosine_similarity_matrix(profiles)
    labels = analysis.kmeans_pp([p.values for p in profiles], args.clusters, args.trials, args.seed)
    assign = _csv([["trial", *names]] + [[t, *map(int, lab)] for t, lab in enumerate(labels)])
    simcsv = _csv([["dataset", *names]] + [[n, *(repr(float(v)) for v in row)] for n, row in zip(names, sim)])
    if args.out_prefix:
        _emit(assign, f"{args.out_prefix}-assignments.csv")
        _emit(simcsv, f"{args.out_prefix}-similarity.csv")
    else:
        sys.stdout.write(assign + "\n" + simcsv)


def _cmd_convergence(args):
    cat = _catalog(args)
    complex, _ = io.load_dataset(args.input, args.format)
    table = simpletgen.build_match_table(cat, allow_k6=True)
    graph = primal_graph(complex)
    fixed = colorcoding.build(graph, cat.k, rng_seed=derive_seed(args.seed, 0)) if args.fixed_coloring else None
    rows = [["samples", "index", "code", "mean", "std"] + (["seconds"] if args.timing else [])]
    for x in args.samples:
        runs, seconds = [], 0.0
        for t in range(args.trials):
            seed = derive_seed(args.seed, 1, x, t)
            start = time.perf_counter()
            if fixed is not None:
                rep = colorcoding.estimate_with_table(complex, graph, fixed, cat, x, seed,
                                                      args.threads, table)
            else:
                rep = colorcoding.sc3(complex, cat, x, rng_seed=seed, threads=args.threads,
                                      match_table=table)
            seconds += time.perf_counter() - start
            runs.append(rep.counts)
        log.info("x=%d: %d trials in %.3fs", x, args.trials, seconds)
        arr = np.asarray(runs, dtype=float)
        mean, std = arr.mean(axis=0), arr.std(axis=0, ddof=1) if args.trials > 1 else np.zeros(len(cat))
        for i, code in enumerate(cat.codes_hex):
            row = [x, i, code, repr(float(mean[i])), repr(float(std[i]))]
            rows.append(row + [f"{seconds:.6f}"] if args.timing else row)
    _emit(_csv(rows), args.out)


COMMANDS = {
    "gen": _cmd_gen,
    "exact": _cmd_exact,
    "count": _cmd_count,
    "error": _cmd_error,
    "profile": _cmd_profile,
    "cluster": _cmd_cluster,
    "convergence": _cmd_convergence,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"simplets {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, io.DatasetError) as exc:
        print(f"simplets {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, RuntimeError, OverflowError, ArithmeticError) as exc:
        print(f"simplets {args.command}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
