"""Decay of boundary influence on the marginal at a fixed vertex.

For each radius r the region is R = ball(v, r).  Pairs (sigma, tau) of
colorings of the outer boundary are drawn, and the exact marginal at v is
computed inside G[R + boundary] with the whole boundary pinned, which by
the Markov property equals the full-graph marginal under the same pinning.
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction

import numpy as np

from ..coloring import (
    InfeasibleCondition,
    ListColoringInstance,
    OracleBudgetExceeded,
    error_function,
    exact_marginal,
    relabel,
    tv_distance,
)
from ..graph import Graph, ball, generate_gnp, vertex_boundary
from ..saw import SawTreeTooLarge, build_saw_tree, decay_bound, find_permissive_cutset
from .config import ExperimentConfig
from .pool import cell_rng, ordered_map

log = logging.getLogger(__name__)

TAG_DECAY = 101
ROOT = 0

RECORD_COLUMNS = [
    "kind", "seed", "radius", "ball_size", "boundary_size", "pairs", "infeasible_skipped",
    "max_tv", "max_error", "decay_bound", "bound_holds", "status",
]
FIT_COLUMNS = ["kind", "seed", "slope", "intercept", "points", "zero_cells", "skipped_cells", "negative"]


def _sample_boundary(rng: np.random.Generator, g: Graph, lists, boundary: list[int]) -> dict[int, int] | None:
    """Colors for the boundary, proper on the edges among boundary vertices."""
    inside = set(boundary)
    out: dict[int, int] = {}
    for u in boundary:
        used = {out[w] for w in g.adjacency[u] if w in inside and w in out}
        options = sorted(lists[u] - used)
        if not options:
            return None
        out[u] = options[rng.integers(len(options))]
    return out


def _perturb(rng: np.random.Generator, g: Graph, lists, sigma: dict[int, int]) -> dict[int, int] | None:
    """Recolor a random nonempty subset of the boundary, keeping it proper."""
    verts = sorted(sigma)
    flip = [u for u in verts if rng.random() < 0.5]
    if not flip:
        flip = [verts[rng.integers(len(verts))]]
    tau = dict(sigma)
    for u in flip:
        used = {tau[w] for w in g.adjacency[u] if w in tau}
        options = sorted(lists[u] - used - {sigma[u]})
        if options:
            tau[u] = options[rng.integers(len(options))]
    return tau if tau != sigma else None


def _bound_for_radius(inst: ListColoringInstance, v: int, r: int, boundary, node_cap: int) -> Fraction | None:
    """E_{T,L,S} for the window cutset with t = r // 2 and delta = boundary."""
    t = r // 2
    if t < 1 or not boundary:
        return None
    try:
        tree = build_saw_tree(inst.graph, v, 2 * t, node_cap)
    except SawTreeTooLarge:
        return None
    cutset = find_permissive_cutset(inst, tree, boundary, t)
    return None if cutset is None else decay_bound(inst, tree, cutset)


def measure_region(
    inst: ListColoringInstance,
    v: int,
    region,
    pinned: list[int],
    pairs,
    max_branches: int | None,
    target: int | None = None,
) -> dict:
    """Max TV and max error function at v over boundary pairs, inside G[region + pinned].

    Stops after ``target`` feasible pairs when given.
    """
    sub, index = inst.induced(set(region) | set(pinned))
    root = index[v]
    max_tv, max_err = Fraction(0), 0.0
    done = skipped = 0
    for sigma, tau in pairs:
        if target is not None and done >= target:
            break
        try:
            m1 = exact_marginal(sub, root, relabel(sigma, index), max_branches)
            m2 = exact_marginal(sub, root, relabel(tau, index), max_branches)
        except InfeasibleCondition:
            skipped += 1
            continue
        done += 1
        max_tv = max(max_tv, tv_distance(m1, m2))
        max_err = max(max_err, error_function(m1, m2))
    return {"pairs": done, "infeasible_skipped": skipped, "max_tv": max_tv, "max_error": max_err}


def _pair_stream(rng, g, lists, boundary, count):
    """Yields up to ``count`` * 10 candidate pairs; the caller stops when it has enough."""
    for _ in range(10 * count):
        sigma = _sample_boundary(rng, g, lists, boundary)
        if sigma is None:
            continue
        tau = _perturb(rng, g, lists, sigma)
        if tau is not None:
            yield sigma, tau


def _seed_records(args) -> list[dict]:
    cfg, seed = args
    g = generate_gnp(cfg.n, cfg.d, seed)
    inst = ListColoringInstance.q_coloring(g, cfg.q)
    lists = [set(lst) for lst in inst.lists]
    records = []
    over_budget = False
    for r in cfg.radii:
        region = ball(g, ROOT, r)
        boundary = sorted(vertex_boundary(g, region))
        rec = {
            "kind": "gnp", "seed": seed, "radius": r, "ball_size": len(region), "boundary_size": len(boundary),
            "pairs": 0, "infeasible_skipped": 0, "max_tv": None, "max_error": None,
            "decay_bound": None, "bound_holds": None,
        }
        if over_budget:
            rec["status"] = "over-budget"
            records.append(rec)
            continue
        if not boundary:
            # nothing to pin: the marginal at v cannot depend on a boundary
            rec.update(max_tv=Fraction(0), max_error=0.0, status="no-boundary")
            records.append(rec)
            continue
        rng = cell_rng(seed, TAG_DECAY, r)
        pairs = _pair_stream(rng, g, lists, boundary, cfg.samples)
        try:
            res = measure_region(inst, ROOT, region, boundary, pairs, cfg.max_branches, target=cfg.samples)
        except OracleBudgetExceeded:
            over_budget = True
            log.info("seed %s radius %d: over the branch budget", seed, r)
            rec["status"] = "over-budget"
            records.append(rec)
            continue
        rec.update(res)
        log.info("seed %s radius %d: %d pairs, max TV %.3g", seed, r, res["pairs"], float(res["max_tv"]))
        done, max_err = res["pairs"], res["max_error"]
        rec["status"] = "ok" if done >= cfg.samples else "too-few-pairs"
        bound = _bound_for_radius(inst, ROOT, r, boundary, cfg.node_cap)
        if bound is not None:
            rec["decay_bound"] = bound
            rec["bound_holds"] = max_err <= float(bound) + 1e-9
        records.append(rec)
    return records


def fit_slope(records: list[dict]) -> dict:
    """Least squares of ln(max TV) on r over cells with status ok and positive TV."""
    pts = [(r["radius"], math.log(r["max_tv"])) for r in records if r.get("status") == "ok" and r["max_tv"] and r["max_tv"] > 0]
    zero = sum(1 for r in records if r.get("status") in ("ok", "no-boundary") and r["max_tv"] == 0)
    skipped = sum(1 for r in records if r.get("status") not in ("ok", "no-boundary"))
    out = {"points": len(pts), "zero_cells": zero, "skipped_cells": skipped}
    if len(pts) < 2:
        out.update(slope=math.nan, intercept=math.nan, negative=False)
        return out
    xs = np.array([p[0] for p in pts], dtype=float)
    ys = np.array([p[1] for p in pts], dtype=float)
    slope, intercept = np.polyfit(xs, ys, 1)
    out.update(slope=float(slope), intercept=float(intercept), negative=bool(slope < 0))
    return out


def build_frozen_gadget(length: int, q: int) -> tuple[ListColoringInstance, list[int], dict[int, list[int]]]:
    """Path p_0..p_length where every p_i carries q - 2 pendant leaves.

    Returns the q-coloring instance, the path vertices and the pendants of
    each path vertex.  Pinning the pendants of p_i to 3..q leaves p_i with
    the colors {1, 2}.
    """
    if q < 3:
        raise ValueError("the gadget needs q >= 3")
    path = list(range(length + 1))
    edges = [(i, i + 1) for i in range(length)]
    pendants: dict[int, list[int]] = {}
    nxt = length + 1
    for p in path:
        pendants[p] = list(range(nxt, nxt + q - 2))
        edges.extend((p, leaf) for leaf in pendants[p])
        nxt += q - 2
    return ListColoringInstance.q_coloring(Graph.from_edges(nxt, edges), q), path, pendants


def run_frozen_gadget(q: int, radii: list[int], max_branches: int | None = None) -> list[dict]:
    """Same measurement on the gadget: region = p_0..p_r, pinned = their pendants plus p_{r+1}.

    Pairs range over all pairs of distinct colors for p_{r+1}.
    """
    inst, path, pendants = build_frozen_gadget(max(radii) + 1, q)
    records = []
    for r in radii:
        region = path[: r + 1]
        pins = {leaf: 3 + j for p in region for j, leaf in enumerate(pendants[p])}
        far = path[r + 1]
        pairs = [
            ({**pins, far: a}, {**pins, far: b})
            for a in range(1, q + 1) for b in range(a + 1, q + 1)
        ]
        res = measure_region(inst, path[0], region, sorted(pins) + [far], pairs, max_branches)
        records.append({
            "kind": "gadget", "seed": None, "radius": r, "ball_size": len(region), "boundary_size": len(pins) + 1,
            **res, "decay_bound": None, "bound_holds": None, "status": "ok",
        })
    return records


def run_decay_experiment(cfg: ExperimentConfig, jobs: int = 1, gadget: bool = True) -> tuple[list[dict], list[dict]]:
    """Records for every (seed, radius) plus the gadget, and one slope fit per run."""
    per_seed = ordered_map(_seed_records, [(cfg, s) for s in cfg.seed_list], jobs)
    records, fits = [], []
    for seed, recs in zip(cfg.seed_list, per_seed):
        records.extend(recs)
        fits.append({"kind": "gnp", "seed": seed, **fit_slope(recs)})
    if gadget:
        recs = run_frozen_gadget(cfg.gadget_q, list(cfg.radii), cfg.max_branches)
        records.extend(recs)
        fits.append({"kind": "gadget", "seed": None, **fit_slope(recs)})
    return records, fits
