"""Self-avoiding-walk trees, permissive cutsets and the tree decay quantity.

A tree node is identified by its walk (a tuple of graph vertices starting at
the root), so a cutset is simply a frozenset of walks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .coloring import ListColoringInstance, error_function, exact_marginal
from .graph import Graph, bfs_distances

DEFAULT_NODE_CAP = 10_000_000

Walk = tuple[int, ...]
Cutset = frozenset  # of Walk


class SawTreeTooLarge(RuntimeError):
    """The walk enumeration would exceed the configured node cap."""


class DepthLimitTooSmall(ValueError):
    """The tree is truncated above the depth the cutset search needs."""


class CutsetAbsent(LookupError):
    """No permissive cutset of the requested shape exists."""


class SawNode:
    __slots__ = ("walk", "children")

    def __init__(self, walk: Walk):
        self.walk = walk
        self.children: tuple[SawNode, ...] = ()

    @property
    def graph_vertex(self) -> int:
        return self.walk[-1]

    @property
    def depth(self) -> int:
        return len(self.walk) - 1

    def __repr__(self) -> str:
        return f"SawNode({self.walk})"


@dataclass(frozen=True)
class SawTree:
    root: SawNode
    depth_limit: int
    size: int

    @property
    def root_vertex(self) -> int:
        return self.root.walk[0]

    def nodes(self) -> Iterator[SawNode]:
        """Pre-order traversal, children in neighbor-id order."""
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))


def count_saw_nodes(g: Graph, v: int, depth_limit: int, cap: int | None = None) -> int:
    """Number of self-avoiding walks from v of length <= depth_limit.

    Stops early and returns cap + 1 once the count passes ``cap``.
    """
    count = 0
    on_path = [False] * g.n
    on_path[v] = True
    stack = [(v, 0, iter(g.adjacency[v]))]
    count = 1
    while stack:
        u, depth, it = stack[-1]
        nxt = None
        if depth < depth_limit:
            for w in it:
                if not on_path[w]:
                    nxt = w
                    break
        if nxt is None:
            stack.pop()
            on_path[u] = False
            continue
        count += 1
        if cap is not None and count > cap:
            return cap + 1
        on_path[nxt] = True
        stack.append((nxt, depth + 1, iter(g.adjacency[nxt])))
    return count


def build_saw_tree(g: Graph, v: int, depth_limit: int, node_cap: int = DEFAULT_NODE_CAP) -> SawTree:
    if depth_limit < 0:
        raise ValueError("depth_limit must be non-negative")
    if not 0 <= v < g.n:
        raise ValueError(f"root {v} out of range")
    projected = count_saw_nodes(g, v, depth_limit, node_cap)
    if projected > node_cap:
        raise SawTreeTooLarge(f"SAW tree from {v} to depth {depth_limit} has more than {node_cap} nodes")
    root = SawNode((v,))
    stack = [(root, frozenset((v,)))]
    while stack:
        node, seen = stack.pop()
        if node.depth >= depth_limit:
            continue
        kids = tuple(SawNode(node.walk + (w,)) for w in g.adjacency[node.graph_vertex] if w not in seen)
        node.children = kids
        for kid in kids:
            stack.append((kid, seen | {kid.graph_vertex}))
    return SawTree(root, depth_limit, projected)


def is_permissive(inst: ListColoringInstance, u: int) -> bool:
    """u and every neighbor w have |L(w)| > d(w) + 1."""
    return inst.has_slack(u) and all(inst.has_slack(w) for w in inst.graph.adjacency[u])


def _delta_distances(g: Graph, delta: Iterable[int]) -> dict[int, int]:
    delta = set(delta)
    return bfs_distances(g, delta) if delta else {}


def _qualifies(inst: ListColoringInstance, u: int, root: int, dist_delta: Mapping[int, int]) -> bool:
    return u != root and dist_delta.get(u, math.inf) >= 2 and is_permissive(inst, u)


def _reaches_depth(node: SawNode, depth: int) -> bool:
    stack = [node]
    while stack:
        x = stack.pop()
        if x.depth >= depth:
            return True
        stack.extend(x.children)
    return False


def find_permissive_cutset(inst: ListColoringInstance, tree: SawTree, delta: Iterable[int], t: int) -> Cutset | None:
    """Shallowest permissive nodes with depth in [t, 2t) covering every walk of length 2t.

    Returns ``None`` when some walk of length 2t has no qualifying node in
    that depth window.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    delta = set(delta)
    v = tree.root_vertex
    dist_delta = _delta_distances(inst.graph, delta)
    if dist_delta.get(v, math.inf) <= 2 * t:
        raise ValueError(f"need dist(v, delta) > 2t = {2 * t}")
    if tree.depth_limit < 2 * t:
        raise DepthLimitTooSmall(f"tree depth {tree.depth_limit} is below 2t = {2 * t}")

    chosen: set[Walk] = set()
    stack = [tree.root]
    while stack:
        node = stack.pop()
        d = node.depth
        if d == 2 * t:
            return None
        if t <= d and _qualifies(inst, node.graph_vertex, v, dist_delta):
            if _reaches_depth(node, 2 * t):
                chosen.add(node.walk)
            continue
        stack.extend(node.children)
    return frozenset(chosen)


def shallowest_permissive_cutset(inst: ListColoringInstance, tree: SawTree, delta: Iterable[int]) -> Cutset | None:
    """Greedy cutset for v and delta over the whole (truncated) tree.

    On every walk that reaches delta, takes the first qualifying node, and
    only for subtrees that actually reach delta.  ``None`` if some walk hits
    delta first.
    """
    delta = set(delta)
    v = tree.root_vertex
    if v in delta:
        return None
    dist_delta = _delta_distances(inst.graph, delta)

    def reaches_delta(node: SawNode) -> bool:
        stack = [node]
        while stack:
            x = stack.pop()
            if x.graph_vertex in delta:
                return True
            stack.extend(x.children)
        return False

    chosen: set[Walk] = set()
    stack = [tree.root]
    while stack:
        node = stack.pop()
        if node.graph_vertex in delta:
            return None
        if _qualifies(inst, node.graph_vertex, v, dist_delta):
            if reaches_delta(node):
                chosen.add(node.walk)
            continue
        stack.extend(node.children)
    return frozenset(chosen)


def is_valid_cutset(inst: ListColoringInstance, tree: SawTree, delta: Iterable[int], cutset: Cutset, permissive: bool = True) -> bool:
    """Check both cutset conditions (and permissiveness) against ``tree``."""
    delta = set(delta)
    v = tree.root_vertex
    dist_delta = _delta_distances(inst.graph, delta)
    for walk in cutset:
        u = walk[-1]
        if u == v or dist_delta.get(u, math.inf) < 2:
            return False
        if permissive and not is_permissive(inst, u):
            return False
    stack = [tree.root]
    while stack:
        node = stack.pop()
        if node.walk in cutset:
            continue
        if node.graph_vertex in delta:
            return False
        stack.extend(node.children)
    return True


def slack_factor(inst: ListColoringInstance, u: int) -> Fraction:
    """delta(u): 1/(|L(u)| - d(u) - 1) when that is positive, else 1."""
    gap = inst.gap(u)
    return Fraction(1, gap - 1) if gap > 1 else Fraction(1)


def decay_bound(inst: ListColoringInstance, tree: SawTree, cutset: Cutset) -> Fraction:
    """E_{T,L,S} evaluated exactly; leaves outside the cutset contribute 0."""
    factors: dict[int, Fraction] = {}

    def factor(u: int) -> Fraction:
        if u not in factors:
            factors[u] = slack_factor(inst, u)
        return factors[u]

    # post-order without recursion: value[node] filled after its children
    value: dict[int, Fraction] = {}
    stack: list[tuple[SawNode, bool]] = [(tree.root, False)]
    while stack:
        node, done = stack.pop()
        if node.walk in cutset:
            value[id(node)] = Fraction(3 * inst.q)
            continue
        if not done:
            stack.append((node, True))
            stack.extend((kid, False) for kid in node.children)
            continue
        total = Fraction(0)
        for kid in node.children:
            total += factor(kid.graph_vertex) * value.pop(id(kid))
        value[id(node)] = total
    return value[id(tree.root)]


def format_tree(tree: SawTree, cutset: Cutset = frozenset()) -> str:
    """One line per node: indentation by depth, then "depth graph_vertex" and "S" for cutset members."""
    lines = []
    for node in tree.nodes():
        mark = " S" if node.walk in cutset else ""
        lines.append(f"{'  ' * node.depth}{node.depth} {node.graph_vertex}{mark}")
    return "\n".join(lines) + "\n"


def verify_saw_decay(
    inst: ListColoringInstance,
    v: int,
    lam: Iterable[int],
    delta: Iterable[int],
    sigma: Mapping[int, int],
    tau: Mapping[int, int],
    t: int | None = None,
    node_cap: int = DEFAULT_NODE_CAP,
) -> dict:
    """Compare E(mu_v^sigma, mu_v^tau) with E_{T,L,S} for a permissive cutset S.

    With ``t`` the cutset comes from the [t, 2t) window search; without it
    the greedy search runs over the full SAW tree.
    """
    lam, delta = set(lam), set(delta)
    if set(sigma) != lam or set(tau) != lam:
        raise ValueError("sigma and tau must both assign exactly lambda")
    if not delta <= lam:
        raise ValueError("delta must be a subset of lambda")
    if any(sigma[u] != tau[u] for u in lam - delta):
        raise ValueError("sigma and tau may differ only on delta")
    lhs = error_function(exact_marginal(inst, v, sigma), exact_marginal(inst, v, tau))
    if t is None:
        tree = build_saw_tree(inst.graph, v, max(inst.n - 1, 0), node_cap)
        cutset = shallowest_permissive_cutset(inst, tree, delta)
    else:
        tree = build_saw_tree(inst.graph, v, 2 * t, node_cap)
        cutset = find_permissive_cutset(inst, tree, delta, t)
    if cutset is None:
        raise CutsetAbsent(f"no permissive cutset for v={v} and delta={sorted(delta)}")
    rhs = decay_bound(inst, tree, cutset)
    return {
        "lhs": lhs,
        "rhs": float(rhs),
        "rhs_exact": rhs,
        "cutset_size": len(cutset),
        "holds": lhs <= float(rhs) + 1e-9,
    }
