"""How often a permissive cutset exists in the [t, 2t) window of the SAW tree."""

from __future__ import annotations

import math

from ..coloring import ListColoringInstance
from ..graph import bfs_distances, generate_gnp
from ..saw import SawTreeTooLarge, build_saw_tree, find_permissive_cutset
from .config import ExperimentConfig
from .pool import ordered_map

ROOT = 0

CELL_COLUMNS = ["seed", "t", "status", "tree_nodes", "cutset_size"]
SUMMARY_COLUMNS = ["t", "seeds", "found", "absent", "skipped", "frequency"]


def _seed_cells(args) -> list[dict]:
    cfg, seed = args
    g = generate_gnp(cfg.n, cfg.d, seed)
    inst = ListColoringInstance.q_coloring(g, cfg.q)
    dist = bfs_distances(g, ROOT)
    cells = []
    for t in cfg.t_values:
        # unreachable vertices are at infinite distance and belong to delta too
        delta = [u for u in range(g.n) if dist.get(u, math.inf) > 2 * t]
        cell = {"seed": seed, "t": t, "tree_nodes": None, "cutset_size": None}
        try:
            tree = build_saw_tree(g, ROOT, 2 * t, cfg.node_cap)
        except SawTreeTooLarge:
            cell["status"] = "skipped"
            cells.append(cell)
            continue
        cutset = find_permissive_cutset(inst, tree, delta, t)
        cell["tree_nodes"] = tree.size
        if cutset is None:
            cell["status"] = "absent"
        else:
            cell["status"] = "found"
            cell["cutset_size"] = len(cutset)
        cells.append(cell)
    return cells


def summarize(cells: list[dict], t_values) -> list[dict]:
    rows = []
    for t in t_values:
        mine = [c for c in cells if c["t"] == t]
        found = sum(c["status"] == "found" for c in mine)
        absent = sum(c["status"] == "absent" for c in mine)
        tested = found + absent
        rows.append({
            "t": t, "seeds": len(mine), "found": found, "absent": absent,
            "skipped": len(mine) - tested, "frequency": found / tested if tested else math.nan,
        })
    return rows


def run_cutset_experiment(cfg: ExperimentConfig, jobs: int = 1) -> tuple[list[dict], list[dict]]:
    per_seed = ordered_map(_seed_cells, [(cfg, s) for s in cfg.seed_list], jobs)
    cells = [c for block in per_seed for c in block]
    return cells, summarize(cells, cfg.t_values)
