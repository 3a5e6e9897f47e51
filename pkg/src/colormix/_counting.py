"""Exact weighted counting of list colorings.

The state is a pairwise network: every live vertex carries an integer weight
per color and every live edge a q x q integer compatibility matrix (``None``
stands for the plain "colors differ" constraint).  A proper list coloring of
the original instance contributes weight 1, so the total weight is the number
of proper colorings.

Counting alternates three moves:

* split the live vertices into connected components and multiply,
* sum out vertices of degree <= 2 (leaves fold into a neighbor's weights,
  degree-2 vertices into an edge matrix between their two neighbors),
* otherwise branch on the live vertex of largest degree.

Colors that no weight tells apart are interchangeable (the network is
invariant under permuting them), so a branch solves one child per class
of such colors and reconstructs the others by symmetry.  Fixing a color
splits it off its class; elimination and component splits keep the
symmetry intact.

Everything is exact Python integers stored in object arrays.  An optional
:class:`Budget` caps the number of branch children so callers can give up on
regions whose treewidth is too large, deterministically.
"""

from __future__ import annotations

import numpy as np


class BudgetExceeded(RuntimeError):
    """The branch budget of an exact count ran out."""


class Budget:
    __slots__ = ("limit", "used")

    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def charge(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise BudgetExceeded(f"exact count needed more than {self.limit} branches")


def _zeros(q: int) -> np.ndarray:
    return np.array([0] * q, dtype=object)


def _as_matrix(m, q: int) -> np.ndarray:
    if m is not None:
        return m
    out = np.ones((q, q), dtype=object)
    np.fill_diagonal(out, 0)
    return out


class Network:
    __slots__ = ("q", "weights", "nbrs")

    def __init__(self, q: int, weights: dict, nbrs: dict):
        self.q = q
        self.weights = weights
        self.nbrs = nbrs

    def copy(self) -> "Network":
        return Network(self.q, dict(self.weights), {v: dict(e) for v, e in self.nbrs.items()})

    def remove(self, v: int) -> None:
        for u in self.nbrs.pop(v):
            del self.nbrs[u][v]
        del self.weights[v]

    def set_edge(self, a: int, b: int, m: np.ndarray) -> None:
        self.nbrs[a][b] = m
        self.nbrs[b][a] = m.T

    def components(self) -> list[list[int]]:
        pool = set(self.weights)
        comps = []
        for start in sorted(pool):
            if start not in pool:
                continue
            pool.discard(start)
            comp, stack = [start], [start]
            while stack:
                u = stack.pop()
                for w in self.nbrs[u]:
                    if w in pool:
                        pool.discard(w)
                        comp.append(w)
                        stack.append(w)
            comps.append(comp)
        return comps

    def restrict(self, vertices: list[int]) -> "Network":
        keep = set(vertices)
        return Network(
            self.q,
            {v: self.weights[v] for v in vertices},
            {v: {u: m for u, m in self.nbrs[v].items() if u in keep} for v in vertices},
        )


def color_classes(net: Network) -> tuple[tuple[int, ...], ...]:
    """Partition of color indices by their weight in every vertex.

    Only valid while every edge is a plain "colors differ" constraint,
    i.e. straight after :func:`build_network`.
    """
    live = sorted(net.weights)
    groups: dict[tuple, list[int]] = {}
    for c in range(net.q):
        groups.setdefault(tuple(net.weights[v][c] for v in live), []).append(c)
    return tuple(tuple(g) for g in sorted(groups.values()))


def _split(classes, c: int):
    out = []
    for k in classes:
        if c in k:
            out.append((c,))
            if len(k) > 1:
                out.append(tuple(x for x in k if x != c))
        else:
            out.append(k)
    return tuple(out)


def _orbit_sum(vec: np.ndarray, cls: tuple[int, ...]) -> np.ndarray:
    """Sum of ``vec`` over the swaps (rep c') for c' in ``cls``, rep = cls[0].

    Entries outside the class are counted |cls| times, entries inside all
    become the class total.
    """
    out = vec * len(cls)
    total = sum(vec[x] for x in cls)
    for x in cls:
        out[x] = total
    return out


def build_network(q: int, adjacency, lists, assigned: dict[int, int]) -> Network | None:
    """Network for the unassigned vertices; ``None`` if some weight vector is empty."""
    weights = {}
    for v in range(len(adjacency)):
        if v in assigned:
            continue
        w = _zeros(q)
        banned = {assigned[u] for u in adjacency[v] if u in assigned}
        for c in lists[v]:
            if c not in banned:
                w[c - 1] = 1
        if not any(w):
            return None
        weights[v] = w
    nbrs = {v: {u: None for u in adjacency[v] if u in weights} for v in weights}
    return Network(q, weights, nbrs)


def _eliminate_low_degree(net: Network, keep: int | None) -> int:
    """Sum out vertices of degree <= 2 other than ``keep``; returns the scalar factor."""
    factor = 1
    q = net.q
    stack = [v for v in net.weights if v != keep and len(net.nbrs[v]) <= 2]
    while stack:
        u = stack.pop()
        if u not in net.weights or u == keep:
            continue
        deg = len(net.nbrs[u])
        if deg > 2:
            continue
        w = net.weights[u]
        if deg == 0:
            factor *= sum(w)
            net.remove(u)
            if factor == 0:
                return 0
            continue
        if deg == 1:
            (p, m), = net.nbrs[u].items()
            if m is None:
                msg = sum(w) - w
            else:
                msg = w.dot(m)
            net.weights[p] = net.weights[p] * msg
            net.remove(u)
            if not any(net.weights[p]):
                return 0
            if p != keep and len(net.nbrs[p]) <= 2:
                stack.append(p)
            continue
        (a, ma), (b, mb) = net.nbrs[u].items()
        if ma is None and mb is None:
            total = sum(w)
            new = total - w[:, None] - w[None, :]
            new[np.diag_indices(q)] += w
        else:
            ma = _as_matrix(ma, q)
            mb = _as_matrix(mb, q)
            new = ma.T.dot(w[:, None] * mb)
        if b in net.nbrs[a]:
            new = new * _as_matrix(net.nbrs[a][b], q)
        net.remove(u)
        net.set_edge(a, b, new)
        for x in (a, b):
            if x != keep and len(net.nbrs[x]) <= 2:
                stack.append(x)
    return factor


def _condition(net: Network, v: int, color_index: int) -> Network:
    """Copy of ``net`` with ``v`` fixed to the given color and removed."""
    child = net.copy()
    for u, m in net.nbrs[v].items():
        if m is None:
            w = child.weights[u].copy()
            w[color_index] = 0
        else:
            w = child.weights[u] * m[color_index]
        child.weights[u] = w
    child.remove(v)
    return child


def solve(net: Network, keep: int | None = None, budget: Budget | None = None, classes=None):
    """Total weight of ``net``.

    With ``keep`` set, returns the vector of total weights indexed by the
    color of ``keep`` instead of a scalar.  ``classes`` is a partition of
    the colors under which ``net`` is symmetric (see :func:`color_classes`);
    by default every color is its own class.
    """
    if classes is None:
        classes = tuple((c,) for c in range(net.q))
    result = 1
    vector = None
    for comp in net.components():
        sub = net.restrict(comp) if len(comp) != len(net.weights) else net.copy()
        if keep is not None and keep in sub.weights:
            vector = _solve_connected(sub, keep, budget, classes)
            if not any(vector):
                return vector
        else:
            result *= _solve_connected(sub, None, budget, classes)
            if result == 0:
                return 0 if keep is None else _zeros(net.q)
    if keep is None:
        return result
    if vector is None:
        raise KeyError(f"vertex {keep} is not live in the network")
    return vector * result


def _solve_connected(net: Network, keep: int | None, budget: Budget | None, classes):
    factor = _eliminate_low_degree(net, keep)
    if factor == 0:
        return _zeros(net.q) if keep is not None else 0
    live = list(net.weights)
    if keep is not None and live == [keep]:
        return net.weights[keep] * factor
    if not live:
        return factor
    if len(live) == 1:
        return sum(net.weights[live[0]]) * factor
    # branch on the largest-degree live vertex (ties broken by id)
    pivot = max(live, key=lambda x: (len(net.nbrs[x]), -x))
    w = net.weights[pivot]
    if pivot == keep:
        out = _zeros(net.q)
        for cls in classes:
            c = cls[0]
            if w[c]:
                if budget is not None:
                    budget.charge()
                value = w[c] * solve(_condition(net, pivot, c), None, budget, _split(classes, c))
                for x in cls:
                    out[x] = value
        return out * factor
    acc = _zeros(net.q) if keep is not None else 0
    for cls in classes:
        c = cls[0]
        if w[c]:
            if budget is not None:
                budget.charge()
            sub = solve(_condition(net, pivot, c), keep, budget, _split(classes, c))
            if keep is None:
                acc = acc + w[c] * sub * len(cls)
            else:
                acc = acc + w[c] * _orbit_sum(sub, cls)
    return acc * factor
