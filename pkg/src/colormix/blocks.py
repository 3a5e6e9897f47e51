"""Permissive blocks, boundary surgery and the block recursion checks.

Boundary edges are enumerated as sorted (inside, outside) pairs and the
index ``i`` passed to :func:`surgery` is 1-based, so factor ``i`` of the
telescopic product belongs to ``block.boundary_edges[i - 1]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .coloring import (
    ListColoringInstance,
    block_error_function,
    block_weights,
    count_extensions,
    error_function,
    exact_marginal,
    is_feasible,
    relabel,
    _locally_proper,
)
from .saw import is_permissive
from .graph import edge_boundary, set_distance, vertex_boundary, distance_to_set


class BlockSpansGraph(ValueError):
    """The closure swallowed every vertex; no permissive boundary exists."""


@dataclass(frozen=True)
class PermissiveBlock:
    center: int
    block: tuple[int, ...]
    boundary_edges: tuple[tuple[int, int], ...]

    @property
    def m(self) -> int:
        return len(self.boundary_edges)


@dataclass(frozen=True)
class SurgeryResult:
    instance: ListColoringInstance
    removed_colors: tuple[tuple[int, int], ...]  # (original vertex, color) actually removed
    vertex_map: dict  # original id -> id in ``instance``


def make_block(inst: ListColoringInstance, v: int, block: Iterable[int]) -> PermissiveBlock:
    """Wrap a vertex set as a permissive block around ``v``, checking the boundary."""
    members = tuple(sorted(set(block)))
    if v not in members:
        raise ValueError("the block must contain its center")
    for u in vertex_boundary(inst.graph, members):
        if not inst.has_slack(u):
            raise ValueError(f"boundary vertex {u} has |L| <= d + 1")
    return PermissiveBlock(v, members, tuple(edge_boundary(inst.graph, members)))


def minimal_permissive_block(inst: ListColoringInstance, v: int) -> PermissiveBlock:
    """v plus everything reachable from v through vertices without slack."""
    g = inst.graph
    block = {v}
    stack = [v]
    while stack:
        u = stack.pop()
        for w in g.adjacency[u]:
            if w not in block and not inst.has_slack(w):
                block.add(w)
                stack.append(w)
    if len(block) == g.n:
        raise BlockSpansGraph(f"closure around {v} covers the whole graph")
    members = tuple(sorted(block))
    return PermissiveBlock(v, members, tuple(edge_boundary(g, members)))


def surgery(inst: ListColoringInstance, block: PermissiveBlock, i: int, pi: Mapping[int, int], rho: Mapping[int, int]) -> SurgeryResult:
    """The instance (G_B, L_{i,pi,rho}) on V minus B."""
    m = block.m
    if not 1 <= i <= m:
        raise ValueError(f"boundary index {i} outside 1..{m}")
    lists = [set(lst) for lst in inst.lists]
    removed = []
    for k, (u_k, v_k) in enumerate(block.boundary_edges, start=1):
        if k == i:
            continue
        color = pi[u_k] if k < i else rho[u_k]
        if color in lists[v_k]:
            lists[v_k].discard(color)
            removed.append((v_k, color))
    rest = [u for u in range(inst.n) if u not in set(block.block)]
    sub, index = inst.graph.induced_subgraph(rest)
    new = ListColoringInstance(sub, inst.q, tuple(frozenset(lists[u]) for u in sorted(index)))
    return SurgeryResult(new, tuple(removed), index)


def gap_never_decreases(inst: ListColoringInstance, result: SurgeryResult) -> bool:
    return all(result.instance.gap(new) >= inst.gap(old) for old, new in result.vertex_map.items())


def _check_pair(inst: ListColoringInstance, block: PermissiveBlock, pi: Mapping[int, int], rho: Mapping[int, int]) -> None:
    for name, col in (("pi", pi), ("rho", rho)):
        if set(col) != set(block.block):
            raise ValueError(f"{name} must color exactly the block")
        if any(c not in inst.lists[u] for u, c in col.items()) or not _locally_proper(inst.graph, col):
            raise ValueError(f"{name} is not a proper list coloring of the block")


def _check_far(inst: ListColoringInstance, block: PermissiveBlock, cond: Mapping[int, int]) -> None:
    if cond and set_distance(inst.graph, block.block, cond) < 2:
        raise ValueError("the condition must be at distance >= 2 from the block")


def telescopic_factors(
    inst: ListColoringInstance, block: PermissiveBlock, pi: Mapping[int, int], rho: Mapping[int, int], sigma: Mapping[int, int]
) -> list[Fraction]:
    """Factor i = (1 - P_i(c(v_i) = pi_i | sigma)) / (1 - P_i(c(v_i) = rho_i | sigma))."""
    out = []
    for i, (u_i, v_i) in enumerate(block.boundary_edges, start=1):
        res = surgery(inst, block, i, pi, rho)
        cond = relabel(sigma, res.vertex_map)
        mu = exact_marginal(res.instance, res.vertex_map[v_i], cond)
        num = 1 - mu.get(pi[u_i], Fraction(0))
        den = 1 - mu.get(rho[u_i], Fraction(0))
        out.append(num / den)
    return out


def verify_telescopic_recursion(
    inst: ListColoringInstance,
    block: PermissiveBlock,
    pi: Mapping[int, int],
    rho: Mapping[int, int],
    sigma: Mapping[int, int],
    drop_factor: bool = False,
) -> dict:
    """Exact check of mu_B(pi)/mu_B(rho) against the product over boundary edges.

    ``drop_factor`` leaves out the first factor that is not 1; it exists
    only to let the harness prove that it notices a wrong product.
    """
    _check_pair(inst, block, pi, rho)
    _check_far(inst, block, sigma)
    num = count_extensions(inst, {**sigma, **pi})
    den = count_extensions(inst, {**sigma, **rho})
    if den == 0:
        raise ValueError("rho has no extension under sigma")
    lhs = Fraction(num, den)
    factors = telescopic_factors(inst, block, pi, rho, sigma)
    if drop_factor:
        factors = _drop_first_non_unit(factors)
    rhs = Fraction(1)
    for f in factors:
        rhs *= f
    feasible = all(is_feasible(surgery(inst, block, i, pi, rho).instance) for i in range(1, block.m + 1))
    gaps = all(gap_never_decreases(inst, surgery(inst, block, i, pi, rho)) for i in range(1, block.m + 1))
    return {
        "lhs": lhs,
        "rhs": rhs,
        "equal": lhs == rhs,
        "surgery_feasible": feasible,
        "gap_ok": gaps,
        "edge_order": list(block.boundary_edges),
    }


def _drop_first_non_unit(factors: list[Fraction]) -> list[Fraction]:
    for k, f in enumerate(factors):
        if f != 1:
            return factors[:k] + factors[k + 1 :]
    return factors


def check_marginal_bounds(inst: ListColoringInstance, v: int, cond: Mapping[int, int]) -> dict:
    """Check the upper bound 1/(|L|-d) and lower bound 1/(|L| 2^d) at v.

    A bound whose precondition fails is reported as not applicable together
    with the reason.
    """
    size, deg = len(inst.lists[v]), inst.degree(v)
    out: dict = {"upper_applicable": False, "upper_ok": None, "lower_applicable": False, "lower_ok": None, "reasons": []}
    if v in cond:
        out["reasons"].append("v is assigned by the condition")
        return out
    mu = exact_marginal(inst, v, cond)
    if inst.has_slack(v):
        out["upper_applicable"] = True
        out["upper_ok"] = all(p <= Fraction(1, size - deg) for p in mu.values())
    else:
        out["reasons"].append("upper: |L(v)| <= d(v) + 1")
    if not is_permissive(inst, v):
        out["reasons"].append("lower: v is not permissive")
    elif distance_to_set(inst.graph, v, cond) < 2:
        out["reasons"].append("lower: condition within distance 1 of v")
    else:
        out["lower_applicable"] = True
        out["lower_ok"] = all(p >= Fraction(1, size * 2**deg) for p in mu.values())
    return out


def check_local_feasibility(inst: ListColoringInstance, block: PermissiveBlock, sigma: Mapping[int, int]) -> bool:
    """mu_B^sigma(pi) > 0 exactly when pi is proper on B, over all of L(B)."""
    _check_far(inst, block, sigma)
    weights = block_weights(inst, block.block, sigma)
    for key, w in weights.items():
        pc = dict(zip(block.block, key))
        if (w > 0) != _locally_proper(inst.graph, pc):
            return False
    return True


def proper_block_weights(inst: ListColoringInstance, block: PermissiveBlock, cond: Mapping[int, int]) -> dict:
    """Unnormalised mu_B^cond restricted to L*(B)."""
    out = {}
    for pc in inst.proper_colorings(block.block):
        out[tuple(pc[u] for u in block.block)] = count_extensions(inst, {**cond, **pc})
    return out


def verify_block_decay_step(
    inst: ListColoringInstance,
    v: int,
    block: PermissiveBlock,
    delta: Iterable[int],
    sigma: Mapping[int, int],
    tau: Mapping[int, int],
) -> dict:
    """E(mu_v^sigma, mu_v^tau) against the weighted sum over the boundary of B.

    pi, rho are the maximisers of the block error function over L*(B);
    every weight 1/(|L(v_i)| - d(v_i) - 1) uses the original instance.
    """
    delta = set(delta)
    if set(sigma) != delta or set(tau) != delta:
        raise ValueError("sigma and tau must assign exactly delta")
    if v not in block.block:
        raise ValueError("the block must contain v")
    _check_far(inst, block, sigma)
    lhs = error_function(exact_marginal(inst, v, sigma), exact_marginal(inst, v, tau))
    w_sigma = proper_block_weights(inst, block, sigma)
    w_tau = proper_block_weights(inst, block, tau)
    _, pi_key, rho_key = block_error_function(w_sigma, w_tau)
    pi = dict(zip(block.block, pi_key))
    rho = dict(zip(block.block, rho_key))
    terms = []
    for i, (u_i, v_i) in enumerate(block.boundary_edges, start=1):
        res = surgery(inst, block, i, pi, rho)
        new_v = res.vertex_map[v_i]
        e_i = error_function(
            exact_marginal(res.instance, new_v, relabel(sigma, res.vertex_map)),
            exact_marginal(res.instance, new_v, relabel(tau, res.vertex_map)),
        )
        weight = 1.0 / (inst.gap(v_i) - 1)
        terms.append(weight * e_i)
    rhs = math.fsum(terms)
    return {"lhs": lhs, "rhs": rhs, "holds": lhs <= rhs + 1e-9, "pi": pi_key, "rho": rho_key}
