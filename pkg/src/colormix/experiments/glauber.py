"""Heat-bath Glauber dynamics, used only to cross-check the exact oracle."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

import numpy as np

from ..coloring import ListColoringInstance, exact_marginal, tv_distance
from ..graph import generate_gnp
from .pool import cell_rng, cell_seed, ordered_map

TAG_GLAUBER = 301
INIT_BUDGET = 100_000


class NoInitialColoring(RuntimeError):
    """Backtracking found no proper coloring within its budget."""


def initial_coloring(inst: ListColoringInstance, cond: Mapping[int, int], budget: int = INIT_BUDGET) -> list[int]:
    """A proper list coloring extending ``cond``, by backtracking in degree order."""
    g = inst.graph
    state = [0] * inst.n
    for u, c in cond.items():
        state[u] = c
    free = sorted((u for u in range(inst.n) if u not in cond), key=lambda u: (-g.degree(u), u))
    steps = 0

    def place(i: int) -> bool:
        nonlocal steps
        if i == len(free):
            return True
        u = free[i]
        used = {state[w] for w in g.adjacency[u]}
        for c in sorted(inst.lists[u]):
            if c in used:
                continue
            steps += 1
            if steps > budget:
                raise NoInitialColoring(f"no proper coloring found within {budget} steps")
            state[u] = c
            if place(i + 1):
                return True
            state[u] = 0
        return False

    for u, c in cond.items():
        if c not in inst.lists[u] or any(state[w] == c for w in g.adjacency[u]):
            raise NoInitialColoring("the condition itself is not proper")
    if not place(0):
        raise NoInitialColoring("the condition has no proper extension")
    return state


def _run(inst, cond, steps, rng, watch=None, thin=1):
    g = inst.graph
    state = initial_coloring(inst, cond)
    free = [u for u in range(inst.n) if u not in cond]
    samples = []
    if not free or steps == 0:
        return state, samples
    adj = [g.adjacency[u] for u in range(inst.n)]
    lists = [sorted(lst) for lst in inst.lists]
    picks = rng.integers(0, len(free), size=steps)
    coins = rng.random(steps)
    for k in range(steps):
        u = free[picks[k]]
        used = {state[w] for w in adj[u]}
        options = [c for c in lists[u] if c not in used]
        state[u] = options[int(coins[k] * len(options))]
        if watch is not None and (k + 1) % thin == 0:
            samples.append(state[watch])
    return state, samples


def glauber_sample(inst: ListColoringInstance, cond: Mapping[int, int], steps: int, seed: int) -> dict[int, int]:
    """State after ``steps`` single-site heat-bath updates started from the backtracking coloring."""
    state, _ = _run(inst, dict(cond), steps, np.random.default_rng(seed))
    return {u: c for u, c in enumerate(state)}


def glauber_marginal(
    inst: ListColoringInstance, v: int, cond: Mapping[int, int], steps: int, thin: int, seed: int
) -> dict[int, float]:
    """Empirical marginal at v from one chain, reading v every ``thin`` updates."""
    _, samples = _run(inst, dict(cond), steps, np.random.default_rng(seed), watch=v, thin=thin)
    counts = np.bincount(np.asarray(samples, dtype=np.int64), minlength=inst.q + 1)
    total = max(len(samples), 1)
    return {c: counts[c] / total for c in sorted(inst.lists[v])}


def random_check_instance(rng: np.random.Generator, max_n: int = 8) -> tuple[ListColoringInstance, int, dict[int, int]]:
    """Small G(n, p) instance with q = max degree + 2 (so heat-bath moves connect all colorings)."""
    n = int(rng.integers(3, max_n + 1))
    g = generate_gnp(n, float(rng.uniform(1.0, 3.0)), int(rng.integers(2**31)))
    q = max(g.max_degree() + 2, 3)
    inst = ListColoringInstance.q_coloring(g, q)
    v = int(rng.integers(n))
    cond = {}
    others = [u for u in range(n) if u != v and not set(g.adjacency[u]) & {v}]
    if others and rng.random() < 0.5:
        u = others[int(rng.integers(len(others)))]
        cond[u] = int(rng.integers(1, q + 1))
    return inst, v, cond


def _check_one(args) -> dict:
    seed, index, steps, thin = args
    rng = cell_rng(seed, TAG_GLAUBER, index)
    inst, v, cond = random_check_instance(rng)
    chain_seed = cell_seed(seed, TAG_GLAUBER, index, 1)
    emp = glauber_marginal(inst, v, cond, steps, thin, chain_seed)
    exact = exact_marginal(inst, v, cond)
    tv = tv_distance({c: Fraction(p) for c, p in emp.items()}, exact)
    return {
        "index": index, "instance_seed": chain_seed, "n": inst.n, "q": inst.q, "v": v,
        "conditioned": len(cond), "samples": steps // thin, "tv": float(tv),
    }


def run_glauber_check(seed: int, count: int, steps: int, thin: int, jobs: int = 1) -> list[dict]:
    return ordered_map(_check_one, [(seed, i, steps, thin) for i in range(count)], jobs)
