"""Randomized small-instance corpus for the exact lemma checks.

Every case is rebuilt from its ``instance_seed`` alone, so a failing
record can be replayed with :func:`build_case`.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import networkx as nx
import numpy as np

from ..blocks import (
    BlockSpansGraph,
    check_local_feasibility,
    check_marginal_bounds,
    minimal_permissive_block,
    verify_block_decay_step,
    verify_telescopic_recursion,
)
from ..coloring import ListColoringInstance, is_feasible
from ..graph import Graph, bfs_distances, generate_gnp
from ..saw import CutsetAbsent, verify_saw_decay
from .pool import cell_seed, ordered_map

SCHEMA = "lemma-verdict/1"
LEMMAS = ("saw-decay", "telescopic", "marginal-bounds", "local-feasible", "block-decay")
TAG_CORPUS = 201
MAX_TRIES = 500
MAX_BLOCK_COLORINGS = 4096


class CaseRejected(Exception):
    pass


def random_instance(rng: np.random.Generator, min_n: int = 4, max_n: int = 10, q_min: int = 4, q_max: int = 8) -> ListColoringInstance:
    n = int(rng.integers(min_n, max_n + 1))
    q = int(rng.integers(q_min, q_max + 1))
    g = generate_gnp(n, float(rng.uniform(1.0, 3.0)), int(rng.integers(2**31)))
    lists = []
    for v in range(n):
        if rng.random() < 0.6:
            lists.append(range(1, q + 1))
        else:
            size = int(rng.integers(max(1, min(q, g.degree(v))), q + 1))
            lists.append(sorted(int(c) for c in rng.choice(np.arange(1, q + 1), size=size, replace=False)))
    return ListColoringInstance.from_lists(g, q, lists)


def _pick_subset(rng: np.random.Generator, pool: list[int], nonempty: bool = True) -> set[int]:
    if not pool:
        return set()
    chosen = {u for u in pool if rng.random() < 0.5}
    if nonempty and not chosen:
        chosen = {pool[int(rng.integers(len(pool)))]}
    return chosen


def _feasible_coloring(rng, inst, vertices, fixed=None, tries: int = 50) -> dict[int, int] | None:
    fixed = dict(fixed or {})
    vertices = sorted(vertices)
    for _ in range(tries):
        pc = dict(fixed)
        for u in vertices:
            opts = sorted(inst.lists[u])
            pc[u] = opts[int(rng.integers(len(opts)))]
        if is_feasible(inst, pc):
            return pc
    return None


def _block_small(inst, block) -> bool:
    return math.prod(len(inst.lists[u]) for u in block.block) <= MAX_BLOCK_COLORINGS


def _case_saw(rng, inst):
    g = inst.graph
    v = int(rng.integers(inst.n))
    dist = bfs_distances(g, v)
    far = sorted(u for u, k in dist.items() if k >= 3)
    if not far:
        raise CaseRejected
    delta = _pick_subset(rng, far)
    extra = _pick_subset(rng, [u for u in range(inst.n) if u != v and u not in delta], nonempty=False)
    lam = delta | extra if rng.random() < 0.5 else set(delta)
    sigma = _feasible_coloring(rng, inst, lam)
    if sigma is None:
        raise CaseRejected
    tau = _feasible_coloring(rng, inst, delta, {u: sigma[u] for u in lam - delta})
    if tau is None:
        raise CaseRejected
    try:
        rec = verify_saw_decay(inst, v, lam, delta, sigma, tau)
    except CutsetAbsent:
        raise CaseRejected
    params = {"v": v, "lambda": sorted(lam), "delta": sorted(delta), "wsm": lam == delta}
    return params, rec["lhs"], rec["rhs_exact"], rec["holds"]


def _block_and_far(rng, inst, need_delta: bool):
    v = int(rng.integers(inst.n))
    try:
        block = minimal_permissive_block(inst, v)
    except BlockSpansGraph:
        raise CaseRejected
    if block.m == 0 or not _block_small(inst, block):
        raise CaseRejected
    dist = bfs_distances(inst.graph, set(block.block))
    far = sorted(u for u in range(inst.n) if dist.get(u, math.inf) >= 2)
    if need_delta and not far:
        raise CaseRejected
    delta = _pick_subset(rng, far, nonempty=need_delta)
    return v, block, delta


def _case_telescopic(rng, inst, mutant=False):
    v, block, delta = _block_and_far(rng, inst, need_delta=False)
    sigma = _feasible_coloring(rng, inst, delta)
    if sigma is None:
        raise CaseRejected
    proper = list(inst.proper_colorings(block.block))
    if not proper:
        raise CaseRejected
    pi = proper.pop(int(rng.integers(len(proper))))
    # a distinct rho whenever B has a second proper coloring
    rho = proper[int(rng.integers(len(proper)))] if proper else pi
    rec = verify_telescopic_recursion(inst, block, pi, rho, sigma, drop_factor=mutant)
    params = {
        "v": v, "block": list(block.block), "delta": sorted(delta), "edge_order": rec["edge_order"],
        "surgery_feasible": rec["surgery_feasible"], "gap_ok": rec["gap_ok"],
    }
    ok = rec["equal"] and rec["surgery_feasible"] and rec["gap_ok"]
    return params, rec["lhs"], rec["rhs"], ok


def _case_bounds(rng, inst):
    v = int(rng.integers(inst.n))
    delta = _pick_subset(rng, [u for u in range(inst.n) if u != v], nonempty=False)
    sigma = _feasible_coloring(rng, inst, delta)
    if sigma is None:
        raise CaseRejected
    rec = check_marginal_bounds(inst, v, sigma)
    if not (rec["upper_applicable"] or rec["lower_applicable"]):
        raise CaseRejected
    ok = rec["upper_ok"] is not False and rec["lower_ok"] is not False
    params = {
        "v": v, "delta": sorted(delta), "upper_applicable": rec["upper_applicable"],
        "lower_applicable": rec["lower_applicable"],
    }
    return params, rec["upper_ok"], rec["lower_ok"], ok


def _case_local(rng, inst):
    v, block, delta = _block_and_far(rng, inst, need_delta=False)
    sigma = _feasible_coloring(rng, inst, delta)
    if sigma is None:
        raise CaseRejected
    ok = check_local_feasibility(inst, block, sigma)
    return {"v": v, "block": list(block.block), "delta": sorted(delta)}, None, None, ok


def _case_block_decay(rng, inst):
    v, block, delta = _block_and_far(rng, inst, need_delta=True)
    sigma = _feasible_coloring(rng, inst, delta)
    tau = _feasible_coloring(rng, inst, delta)
    if sigma is None or tau is None:
        raise CaseRejected
    rec = verify_block_decay_step(inst, v, block, delta, sigma, tau)
    params = {"v": v, "block": list(block.block), "delta": sorted(delta), "pi": rec["pi"], "rho": rec["rho"]}
    return params, rec["lhs"], rec["rhs"], rec["holds"]


_CASES = {
    "saw-decay": _case_saw,
    "telescopic": _case_telescopic,
    "marginal-bounds": _case_bounds,
    "local-feasible": _case_local,
    "block-decay": _case_block_decay,
}


def build_case(lemma: str, instance_seed: int, mutant: bool = False) -> dict:
    """Draw instances from ``instance_seed`` until one meets the lemma's preconditions, then check it."""
    rng = np.random.default_rng(instance_seed)
    for attempt in range(MAX_TRIES):
        inst = random_instance(rng)
        if not is_feasible(inst):
            continue
        try:
            if lemma == "telescopic":
                params, lhs, rhs, ok = _case_telescopic(rng, inst, mutant)
            else:
                params, lhs, rhs, ok = _CASES[lemma](rng, inst)
        except CaseRejected:
            continue
        return {
            "schema": SCHEMA, "lemma": lemma, "instance_seed": instance_seed, "attempts": attempt + 1,
            "n": inst.n, "q": inst.q, "params": params, "lhs": lhs, "rhs": rhs,
            "verdict": "pass" if ok else "fail",
        }
    return {
        "schema": SCHEMA, "lemma": lemma, "instance_seed": instance_seed, "attempts": MAX_TRIES,
        "n": None, "q": None, "params": {}, "lhs": None, "rhs": None, "verdict": "no-instance",
    }


def _task(args) -> dict:
    lemma, seed, index, mutant = args
    rec = build_case(lemma, cell_seed(seed, TAG_CORPUS, LEMMAS.index(lemma), index), mutant)
    rec["index"] = index
    return rec


def run_lemma_corpus(seed: int, instances: int, lemmas=LEMMAS, jobs: int = 1, mutant: bool = False) -> list[dict]:
    tasks = [(lemma, seed, i, mutant) for lemma in lemmas for i in range(instances)]
    return ordered_map(_task, tasks, jobs)


def corpus_failed(records) -> bool:
    return any(r["verdict"] != "pass" for r in records)


# -- separator finiteness -----------------------------------------------------

def _proper_colorings_array(g: Graph, lists) -> np.ndarray:
    """All proper list colorings as rows of an int array (brute force, small n only)."""
    axes = [np.array(sorted(lst), dtype=np.int64) for lst in lists]
    if any(len(a) == 0 for a in axes):
        return np.zeros((0, g.n), dtype=np.int64)
    grid = np.stack([a.ravel() for a in np.meshgrid(*axes, indexing="ij")], axis=1)
    keep = np.ones(len(grid), dtype=bool)
    for u, w in g.edges():
        keep &= grid[:, u] != grid[:, w]
    return grid[keep]


def _separated(g: Graph, v: int, lam: set[int], cut: set[int]) -> bool:
    seen, stack = {v}, [v]
    while stack:
        u = stack.pop()
        for w in g.adjacency[u]:
            if w in cut or w in seen:
                continue
            if w in lam:
                return False
            seen.add(w)
            stack.append(w)
    return True


def separator_finiteness(inst: ListColoringInstance) -> tuple[int, int]:
    """Check finiteness of E(mu_v^sigma, mu_v^tau) behind every slack separator.

    For every v and nonempty Lambda not containing v such that the slack
    vertices outside Lambda + v separate v from Lambda, all feasible sigma
    on Lambda must give mu_v the same support (that is what finiteness of
    the error function for every pair means).  Returns (cases, failures).
    """
    g = inst.graph
    cols = _proper_colorings_array(g, inst.lists)
    slack = {u for u in range(inst.n) if inst.has_slack(u)}
    cases = failures = 0
    if len(cols) == 0:
        return 0, 0
    base = inst.q + 1
    for v in range(inst.n):
        others = [u for u in range(inst.n) if u != v]
        for size in range(1, len(others) + 1):
            for lam in itertools.combinations(others, size):
                lam_set = set(lam)
                cut = slack - lam_set - {v}
                if not _separated(g, v, lam_set, cut):
                    continue
                cases += 1
                keys = np.zeros(len(cols), dtype=np.int64)
                for u in lam:
                    keys = keys * base + cols[:, u]
                _, inverse = np.unique(keys, return_inverse=True)
                support = np.zeros(inverse.max() + 1, dtype=np.int64)
                np.bitwise_or.at(support, inverse, np.left_shift(1, cols[:, v]))
                if np.any(support != support[0]):
                    failures += 1
    return cases, failures


def proposition_sweep(max_exhaustive_n: int = 6, qs=(3, 4), sampled_sizes=(7, 8), samples: int = 40, seed: int = 1) -> list[dict]:
    """Exhaustive over all graphs up to ``max_exhaustive_n`` vertices with full lists, sampled above.

    Sampled instances use random lists so that list sizes vary.
    """
    rows = []
    atlas = [Graph.from_edges(h.number_of_nodes(), list(h.edges())) for h in nx.graph_atlas_g() if 1 <= h.number_of_nodes() <= max_exhaustive_n]
    for n in range(1, max_exhaustive_n + 1):
        cases = failures = graphs = 0
        for g in (x for x in atlas if x.n == n):
            for q in qs:
                c, f = separator_finiteness(ListColoringInstance.q_coloring(g, q))
                cases, failures, graphs = cases + c, failures + f, graphs + 1
        rows.append({"n": n, "mode": "exhaustive", "instances": graphs, "cases": cases, "failures": failures})
    for n in sampled_sizes:
        rng = np.random.default_rng(cell_seed(seed, TAG_CORPUS, 99, n))
        cases = failures = 0
        for _ in range(samples):
            inst = random_instance(rng, n, n, min(qs), max(qs) + 1)
            c, f = separator_finiteness(inst)
            cases, failures = cases + c, failures + f
        rows.append({"n": n, "mode": "sampled", "instances": samples, "cases": cases, "failures": failures})
    return rows
