"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest -v tests/test_acceptance.py`` (the lines are repeated in
the terminal summary) or directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import math
import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import networkx as nx
import pytest

from colormix.binomial import fq_table, g, g_residual, g_tilde
from colormix.coloring import ListColoringInstance, count_extensions
from colormix.experiments.config import ExperimentConfig
from colormix.experiments.corpus import proposition_sweep, run_lemma_corpus
from colormix.experiments.cutset import run_cutset_experiment
from colormix.experiments.decay import run_decay_experiment
from colormix.experiments.glauber import run_glauber_check
from colormix.graph import Graph

sys.path.insert(0, str(Path(__file__).parent))
from oracles import chromatic_value  # noqa: E402

RESULTS: list[str] = []
SEED = 1


def report(number: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    RESULTS.append(line)
    print(line, flush=True)
    assert ok, line


def corpus_summary(lemma: str, instances: int) -> tuple[list[dict], float]:
    start = time.perf_counter()
    recs = run_lemma_corpus(SEED, instances, lemmas=(lemma,))
    return recs, time.perf_counter() - start


def verdicts(recs) -> str:
    passed = sum(r["verdict"] == "pass" for r in recs)
    return f"{passed}/{len(recs)} pass"


def test_criterion_01_fq_table():
    start = time.perf_counter()
    rows = fq_table(range(2, 31), 100_000)
    elapsed = time.perf_counter() - start
    worst = min(rows, key=lambda r: r["margin"])
    ok = all(r["expected_f"] < r["inv_d"] and r["margin"] > 0 for r in rows) and elapsed < 10
    report(1, ok, f"E[f_q] < 1/d for d=2..30 at n=1e5; smallest margin {worst['margin']:.3g} at d={worst['d']}; {elapsed:.2f}s")


def test_criterion_02_residual_identity():
    worst_rel = 0.0
    below = equal_end = True
    points = 0
    for d2 in range(4, 21):  # d = 2, 2.5, ..., 10
        d = Fraction(d2, 2)
        steps = int((2 * d + 2) * 4)
        for k in range(steps + 1):
            x = Fraction(k, 4)
            lhs = g(d, x) - g_tilde(d, x)
            rhs = g_residual(d, x)
            if lhs != rhs:
                worst_rel = max(worst_rel, abs(float((lhs - rhs) / rhs)) if rhs else math.inf)
            if x < 2 * d + 2:
                below &= g_tilde(d, x) <= g(d, x)
            else:
                equal_end &= g_tilde(d, x) == g(d, x)
            points += 1
    ok = worst_rel <= 1e-10 and below and equal_end
    report(2, ok, f"{points} exact grid points, max relative deviation {worst_rel:.1g}, g~ <= g below 2d+2: {below}, equal at 2d+2: {equal_end}")


def test_criterion_03_saw_decay_corpus():
    recs, elapsed = corpus_summary("saw-decay", 200)
    ok = all(r["verdict"] == "pass" for r in recs) and elapsed < 300
    wsm = sum(r["params"].get("wsm", False) for r in recs)
    report(3, ok, f"{verdicts(recs)} ({wsm} with lambda = delta); {elapsed:.1f}s")


def test_criterion_04_telescopic():
    recs, _ = corpus_summary("telescopic", 100)
    distinct = sum(r["lhs"] != 1 for r in recs)
    feasible = all(r["params"].get("surgery_feasible") for r in recs)
    gaps = all(r["params"].get("gap_ok") for r in recs)
    ok = all(r["verdict"] == "pass" for r in recs) and feasible and gaps
    report(4, ok, f"{verdicts(recs)} exact equalities ({distinct} with ratio != 1); surgery feasible: {feasible}; gap kept: {gaps}")


def test_criterion_05_bounds_local_feasibility_separators():
    bounds, _ = corpus_summary("marginal-bounds", 200)
    local, _ = corpus_summary("local-feasible", 200)
    rows = proposition_sweep(max_exhaustive_n=7, sampled_sizes=(8,), samples=150, seed=SEED)
    cases = sum(r["cases"] for r in rows)
    failures = sum(r["failures"] for r in rows)
    ok = all(r["verdict"] == "pass" for r in bounds + local) and failures == 0
    upper = sum(bool(r["params"]["upper_applicable"]) for r in bounds)
    lower = sum(bool(r["params"]["lower_applicable"]) for r in bounds)
    report(
        5, ok,
        f"bounds {verdicts(bounds)} (upper applied {upper}, lower applied {lower}); local feasibility {verdicts(local)}; "
        f"separator finiteness {cases} cases, {failures} failures (all graphs n<=7, 150 sampled n=8)",
    )


def test_criterion_06_block_decay_step():
    recs, _ = corpus_summary("block-decay", 100)
    slack = min((r["rhs"] - r["lhs"] for r in recs if math.isfinite(r["rhs"])), default=math.nan)
    ok = all(r["verdict"] == "pass" for r in recs)
    report(6, ok, f"{verdicts(recs)}; smallest rhs - lhs {slack:.3g}")


def test_criterion_07_chromatic_counts():
    checked = mismatches = 0
    for G in nx.graph_atlas_g()[1:]:
        if G.number_of_nodes() > 6:
            break
        if not nx.is_connected(G):
            continue
        gr = Graph.from_edges(G.number_of_nodes(), G.edges())
        for q in (2, 3, 4, 5):
            checked += 1
            if count_extensions(ListColoringInstance.q_coloring(gr, q)) != chromatic_value(gr.n, list(gr.edges()), q):
                mismatches += 1
    rng = random.Random(SEED)
    for _ in range(50):
        n = rng.randint(1, 8)
        p = rng.uniform(0.2, 0.7)
        gr = Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])
        q = rng.randint(2, 6)
        checked += 1
        if count_extensions(ListColoringInstance.q_coloring(gr, q)) != chromatic_value(n, list(gr.edges()), q):
            mismatches += 1
    report(7, mismatches == 0, f"{checked} counts against deletion-contraction, {mismatches} mismatches")


@pytest.mark.slow
def test_criterion_08_decay_trend():
    cfg = ExperimentConfig(seeds=list(range(1, 11)), n=500, d=2.0, q=28, radii=[1, 2, 3, 4, 5, 6], samples=30, profile="assumption")
    start = time.perf_counter()
    records, fits = run_decay_experiment(cfg)
    elapsed = time.perf_counter() - start
    gnp = [f for f in fits if f["kind"] == "gnp"]
    negative = sum(f["negative"] for f in gnp)
    gadget = [r for r in records if r["kind"] == "gadget"]
    frozen = all(r["max_tv"] == 1 for r in gadget)
    short = [f"{f['seed']}" for f in gnp if not f["negative"]]
    slopes = ", ".join(f"{f['seed']}:{f['slope']:.2f}" for f in gnp)
    cells = sum(r["status"] == "ok" for r in records if r["kind"] == "gnp")
    ok = negative >= 9 and frozen and elapsed < 1800
    report(
        8, ok,
        f"negative slope on {negative}/10 seeds (slopes {slopes}; no slope for seeds {','.join(short) or 'none'}); "
        f"{cells}/60 cells measured; gadget TV=1 at all radii: {frozen}; {elapsed:.0f}s",
    )


def test_criterion_09_cutset_sweep():
    cfg = ExperimentConfig(seeds=list(range(1, 51)), n=500, d=2.0, q=27, t_values=[2, 3, 4])
    _, summary = run_cutset_experiment(cfg)
    freq = {row["t"]: row["frequency"] for row in summary}
    ok = freq[4] >= 0.9
    report(9, ok, "frequency by t: " + ", ".join(f"t={t}: {f:.2f}" for t, f in freq.items()))


def test_criterion_10_glauber():
    rows = run_glauber_check(SEED, 20, 1_000_000, 100)
    worst = max(r["tv"] for r in rows)
    ok = all(r["tv"] <= 0.02 for r in rows)
    report(10, ok, f"20 instances, max TV {worst:.4f} (limit 0.02) after 1e6 steps thinned by 100")


REPRO_COMMANDS = [
    ["gen", "--n", "500", "--d", "2", "--seed", "7"],
    ["fq-table", "--d-min", "2", "--d-max", "30", "--n", "100000"],
    ["lemma-corpus", "--instances", "10", "--seed", "3"],
    ["cutset-sweep", "--config", "{cfg_cutset}"],
    ["decay", "--config", "{cfg_decay}"],
    ["glauber-check", "--count", "3", "--steps", "200000", "--thin", "100", "--seed", "2"],
]


def test_criterion_11_reproducibility(tmp_path):
    cfg_cutset = tmp_path / "cutset.json"
    cfg_cutset.write_text('{"seeds": [1, 2, 3, 4, 5, 6, 7, 8], "q": 27, "t_values": [2, 3, 4]}')
    cfg_decay = tmp_path / "decay.json"
    cfg_decay.write_text('{"seeds": [2, 6], "radii": [1, 2, 3, 4], "samples": 10}')
    names = {"cfg_cutset": str(cfg_cutset), "cfg_decay": str(cfg_decay)}
    differing = []
    for cmd in REPRO_COMMANDS:
        outputs = []
        for run in range(2):
            out = tmp_path / f"{cmd[0]}-{run}.csv"
            argv = [a.format(**names) for a in cmd] + ["--out", str(out)]
            if run == 1 and cmd[0] in ("lemma-corpus", "cutset-sweep"):
                argv += ["--jobs", "2"]
            subprocess.run([sys.executable, "-m", "colormix.cli", *argv], check=False, capture_output=True)
            siblings = sorted(tmp_path.glob(f"{cmd[0]}-{run}*"))
            outputs.append([p.read_bytes() for p in siblings])
        if not outputs[0] or outputs[0] != outputs[1]:
            differing.append(cmd[0])
    ok = not differing
    report(11, ok, f"{len(REPRO_COMMANDS)} CLI commands run twice (corpus and sweep with --jobs 2 on the rerun); differing: {differing or 'none'}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-s"]))
