"""Command-line entry point: ``colormix <subcommand> ...``."""

from __future__ import annotations

import argparse
import logging
import math
import sys
from fractions import Fraction

from . import binomial
from .coloring import ListColoringInstance, exact_marginal, parse_coloring, parse_instance
from .experiments.config import ExperimentConfig
from .experiments.output import csv_text, emit, jsonl_text
from .graph import bfs_distances, format_graph, generate_gnp, parse_graph
from .saw import build_saw_tree, find_permissive_cutset, format_tree

log = logging.getLogger("colormix")


def _load_config(args, **overrides) -> ExperimentConfig:
    data = ExperimentConfig.load(args.config).to_dict() if args.config else {}
    for key, value in overrides.items():
        if value is not None:
            data[key] = value
    if args.seed is not None:
        data["seed"] = args.seed
        data["seeds"] = None
    if args.out is not None:
        data["out"] = args.out
    return ExperimentConfig.from_dict(data)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _sibling(path: str | None, suffix: str) -> str | None:
    if path is None or path == "-":
        return None
    stem = path[:-4] if path.endswith(".csv") else path
    return f"{stem}.{suffix}.csv"


# -- subcommands ------------------------------------------------------------

def cmd_gen(args) -> int:
    g = generate_gnp(args.n, args.d, args.seed if args.seed is not None else 1)
    emit(format_graph(g), args.out)
    return 0


def _instance_from_args(args) -> ListColoringInstance:
    if args.instance:
        return parse_instance(_read(args.instance))
    if args.graph and args.q:
        return ListColoringInstance.q_coloring(parse_graph(_read(args.graph)), args.q)
    raise SystemExit("give --instance FILE, or --graph FILE together with --q")


def cmd_marginal(args) -> int:
    inst = _instance_from_args(args)
    cond = parse_coloring(args.cond or "")
    mu = exact_marginal(inst, args.vertex, cond)
    rows = [{"color": c, "probability": float(p), "exact": str(p)} for c, p in mu.items()]
    emit(csv_text(rows, ["color", "probability", "exact"]), args.out)
    return 0


def cmd_saw(args) -> int:
    inst = _instance_from_args(args)
    depth = args.depth if args.depth is not None else 2 * (args.t or 1)
    tree = build_saw_tree(inst.graph, args.root, depth, args.node_cap)
    cutset = frozenset()
    footer = ""
    if args.t is not None:
        dist = bfs_distances(inst.graph, args.root)
        delta = [u for u in range(inst.n) if dist.get(u, math.inf) > 2 * args.t]
        found = find_permissive_cutset(inst, tree, delta, args.t)
        footer = "cutset: absent\n" if found is None else f"cutset: {len(found)} nodes\n"
        cutset = found or frozenset()
    emit(format_tree(tree, cutset) + footer, args.out)
    return 0


def cmd_decay(args) -> int:
    from .experiments.decay import FIT_COLUMNS, RECORD_COLUMNS, run_decay_experiment

    cfg = _load_config(args)
    records, fits = run_decay_experiment(cfg, jobs=args.jobs, gadget=not args.no_gadget)
    emit(csv_text(records, RECORD_COLUMNS), cfg.out)
    fit_path = args.fit_out or _sibling(cfg.out, "fit")
    emit(csv_text(fits, FIT_COLUMNS), fit_path)
    return 0


def cmd_cutset_sweep(args) -> int:
    from .experiments.cutset import CELL_COLUMNS, SUMMARY_COLUMNS, run_cutset_experiment

    cfg = _load_config(args)
    cells, summary = run_cutset_experiment(cfg, jobs=args.jobs)
    emit(csv_text(summary, SUMMARY_COLUMNS), cfg.out)
    cells_path = args.cells_out or _sibling(cfg.out, "cells")
    if cells_path is not None:
        emit(csv_text(cells, CELL_COLUMNS), cells_path)
    return 0


def cmd_lemma_corpus(args) -> int:
    from .experiments.corpus import LEMMAS, SCHEMA, corpus_failed, proposition_sweep, run_lemma_corpus

    cfg = _load_config(args, instances=args.instances)
    lemmas = tuple(args.lemmas.split(",")) if args.lemmas else LEMMAS
    unknown = set(lemmas) - set(LEMMAS)
    if unknown:
        raise SystemExit(f"unknown lemmas: {sorted(unknown)}")
    records = run_lemma_corpus(cfg.seed, cfg.instances, lemmas, jobs=args.jobs, mutant=args.mutant == "drop-factor")
    if args.with_separators:
        for row in proposition_sweep(seed=cfg.seed):
            records.append({
                "schema": SCHEMA, "lemma": "separator-finiteness", "instance_seed": cfg.seed,
                "params": row, "lhs": None, "rhs": None, "verdict": "pass" if row["failures"] == 0 else "fail",
            })
    emit(jsonl_text(records), cfg.out)
    failed = corpus_failed(records)
    if failed:
        bad = sum(r["verdict"] != "pass" for r in records)
        print(f"{bad} of {len(records)} verdicts did not pass", file=sys.stderr)
    return 1 if failed else 0


def cmd_fq_table(args) -> int:
    ds = range(args.d_min, args.d_max + 1)
    rows = binomial.fq_table(ds, args.n)
    cols = ["d", "n", "q", "expected_f", "inv_d", "margin"]
    text = csv_text(rows, cols).replace("inv_d", "1/d", 1)
    emit(text, args.out)
    return 0 if all(r["margin"] > 0 for r in rows) else 1


def cmd_glauber_check(args) -> int:
    from .experiments.glauber import run_glauber_check

    cfg = _load_config(args, steps=args.steps, thin=args.thin, instances=args.count)
    rows = run_glauber_check(cfg.seed, cfg.instances, cfg.steps, cfg.thin, jobs=args.jobs)
    for r in rows:
        r["within_tolerance"] = r["tv"] <= args.tolerance
    cols = ["index", "instance_seed", "n", "q", "v", "conditioned", "samples", "tv", "within_tolerance"]
    emit(csv_text(rows, cols), cfg.out)
    return 0 if all(r["within_tolerance"] for r in rows) else 1


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="master seed (overrides the config)")
    common.add_argument("--out", default=None, help="output file; stdout when omitted")
    common.add_argument("--config", default=None, help="JSON file with ExperimentConfig fields")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="colormix", description="Exact list-coloring marginals and decay experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="sample G(n, d/n) and print it")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=float, required=True)
    p.set_defaults(func=cmd_gen)

    def instance_args(p):
        p.add_argument("--instance", help="instance file (q header, graph, lists)")
        p.add_argument("--graph", help="graph file, used with --q for full lists")
        p.add_argument("--q", type=int, help="palette size for --graph")

    p = sub.add_parser("marginal", parents=[common], help="exact marginal at one vertex")
    instance_args(p)
    p.add_argument("--vertex", type=int, required=True)
    p.add_argument("--cond", default="", help='condition as "v:c,v:c"')
    p.set_defaults(func=cmd_marginal)

    p = sub.add_parser("saw", parents=[common], help="dump a SAW tree and optional window cutset")
    instance_args(p)
    p.add_argument("--root", type=int, default=0)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--t", type=int, default=None, help="search the [t, 2t) window against vertices beyond 2t")
    p.add_argument("--node-cap", type=int, default=1_000_000)
    p.set_defaults(func=cmd_saw)

    p = sub.add_parser("decay", parents=[common], help="decay experiment around vertex 0")
    p.add_argument("--fit-out", default=None, help="slope CSV (default: <out>.fit.csv)")
    p.add_argument("--no-gadget", action="store_true", help="skip the frozen-path gadget rows")
    p.set_defaults(func=cmd_decay)

    p = sub.add_parser("cutset-sweep", parents=[common], help="permissive cutset frequency per t")
    p.add_argument("--cells-out", default=None, help="per-seed CSV (default: <out>.cells.csv)")
    p.set_defaults(func=cmd_cutset_sweep)

    p = sub.add_parser("lemma-corpus", parents=[common], help="JSON-lines lemma verdicts")
    p.add_argument("--instances", type=int, default=None, help="instances per lemma")
    p.add_argument("--lemmas", default=None, help="comma-separated subset")
    p.add_argument("--mutant", choices=["drop-factor"], default=None)
    p.add_argument("--with-separators", action="store_true", help="append the separator finiteness sweep")
    p.set_defaults(func=cmd_lemma_corpus)

    p = sub.add_parser("fq-table", parents=[common], help="E[f_q(X)] against 1/d")
    p.add_argument("--d-min", type=int, default=2)
    p.add_argument("--d-max", type=int, default=30)
    p.add_argument("--n", type=int, default=100_000)
    p.set_defaults(func=cmd_fq_table)

    p = sub.add_parser("glauber-check", parents=[common], help="sampler marginals against the exact oracle")
    p.add_argument("--count", type=int, default=None, help="number of instances")
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--thin", type=int, default=None)
    p.add_argument("--tolerance", type=float, default=0.02)
    p.set_defaults(func=cmd_glauber_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
