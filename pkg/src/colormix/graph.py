"""Simple undirected graphs on dense integer vertex ids.

Graphs are immutable; every adjacency list is sorted so that edge lists,
boundaries and anything derived from them come out in a canonical order.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np


@dataclass(frozen=True)
class Graph:
    n: int
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.adjacency) != self.n:
            raise ValueError("adjacency must have one entry per vertex")
        for v, nbrs in enumerate(self.adjacency):
            if list(nbrs) != sorted(set(nbrs)):
                raise ValueError(f"adjacency of {v} must be sorted and duplicate-free")
            for u in nbrs:
                if u == v:
                    raise ValueError(f"self-loop at {v}")
                if not 0 <= u < self.n:
                    raise ValueError(f"neighbor {u} of {v} out of range")
        for v, nbrs in enumerate(self.adjacency):
            for u in nbrs:
                # adjacency lists are short; bisect is not worth it here
                if v not in self.adjacency[u]:
                    raise ValueError(f"edge {v}-{u} is not symmetric")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build a graph, rejecting self-loops and repeated edges."""
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if v in adj[u]:
                raise ValueError(f"duplicate edge ({u}, {v})")
            adj[u].add(v)
            adj[v].add(u)
        return cls(n, tuple(tuple(sorted(a)) for a in adj))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, tuple(() for _ in range(n)))

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges as (u, v) with u < v, in lexicographic order."""
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if u < v:
                    yield (u, v)

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple["Graph", dict[int, int]]:
        """Return G[vertices] relabelled to 0..k-1 and the old -> new id map.

        New ids follow the sorted order of the old ids.
        """
        keep = sorted(set(vertices))
        index = {old: new for new, old in enumerate(keep)}
        adj = tuple(
            tuple(index[u] for u in self.adjacency[old] if u in index) for old in keep
        )
        return Graph(len(keep), adj), index


def generate_gnp(n: int, d: float, seed: int) -> Graph:
    """Sample G(n, d/n).

    Pairs (u, v), u < v, are visited in lexicographic order and the gaps
    between included pairs are drawn as geometric skips by inversion from a
    PCG64 uniform stream, so the work is proportional to the edge count and
    the output depends only on (n, d, seed).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if d < 0 or d > n:
        raise ValueError(f"average degree d={d} must lie in [0, n]")
    p = d / n
    edges: list[tuple[int, int]] = []
    if p <= 0.0 or n < 2:
        return Graph.empty(n)
    rng = np.random.Generator(np.random.PCG64(seed))
    log_q = math.log1p(-p) if p < 1.0 else None
    u, v = 0, 0  # v is advanced before use; pairs start at (0, 1)
    while True:
        if log_q is None:
            skip = 0
        else:
            r = rng.random()
            skip = int(math.floor(math.log1p(-r) / log_q))
        v += 1 + skip
        while v >= n and u < n - 1:
            v = v - n + u + 2
            u += 1
        if u >= n - 1:
            break
        edges.append((u, v))
    return Graph.from_edges(n, edges)


def bfs_distances(g: Graph, source: int | Iterable[int]) -> dict[int, int]:
    """Shortest-path edge counts from ``source`` (a vertex or a vertex set).

    Unreachable vertices are absent from the result.
    """
    sources = [source] if isinstance(source, int) else sorted(set(source))
    for s in sources:
        if not 0 <= s < g.n:
            raise ValueError(f"source {s} out of range")
    dist = {s: 0 for s in sources}
    queue = deque(sources)
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def distance_to_set(g: Graph, u: int, s: Iterable[int]) -> float:
    """dist_G(u, S); ``math.inf`` when S is empty or unreachable."""
    targets = set(s)
    if not targets:
        return math.inf
    if u in targets:
        return 0
    dist = bfs_distances(g, u)
    return min((dist[t] for t in targets if t in dist), default=math.inf)


def set_distance(g: Graph, a: Iterable[int], b: Iterable[int]) -> float:
    """dist_G(A, B) by a multi-source BFS from A."""
    a, b = set(a), set(b)
    if not a or not b:
        return math.inf
    dist = bfs_distances(g, a)
    return min((dist[t] for t in b if t in dist), default=math.inf)


def vertex_boundary(g: Graph, s: Iterable[int]) -> frozenset[int]:
    s = set(s)
    return frozenset(w for u in s for w in g.adjacency[u] if w not in s)


def edge_boundary(g: Graph, s: Iterable[int]) -> list[tuple[int, int]]:
    """Edges leaving ``s`` as (inside, outside) pairs sorted by (inside, outside)."""
    s = set(s)
    return sorted((u, w) for u in s for w in g.adjacency[u] if w not in s)


def ball(g: Graph, center: int, radius: int) -> frozenset[int]:
    if radius < 0:
        raise ValueError("radius must be non-negative")
    return frozenset(u for u, k in bfs_distances(g, center).items() if k <= radius)


def connected_components(g: Graph, vertices: Iterable[int] | None = None) -> list[list[int]]:
    """Components of G[vertices] as sorted lists, ordered by smallest member."""
    pool = set(range(g.n)) if vertices is None else set(vertices)
    comps = []
    for start in sorted(pool):
        if start not in pool:
            continue
        pool.discard(start)
        comp, stack = [start], [start]
        while stack:
            u = stack.pop()
            for w in g.adjacency[u]:
                if w in pool:
                    pool.discard(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


# -- text format ------------------------------------------------------------

def format_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def parse_graph_lines(lines: Sequence[str]) -> tuple[Graph, int]:
    """Parse a graph block from the start of ``lines``.

    Returns the graph and the number of lines consumed.
    """
    if not lines:
        raise ValueError("missing graph header")
    try:
        n, m = (int(tok) for tok in lines[0].split())
    except ValueError as exc:
        raise ValueError(f"bad graph header {lines[0]!r}") from exc
    if len(lines) < m + 1:
        raise ValueError(f"expected {m} edge lines, found {len(lines) - 1}")
    edges = []
    for line in lines[1 : m + 1]:
        u, v = (int(tok) for tok in line.split())
        if u >= v:
            raise ValueError(f"edge line {line!r} must have u < v")
        edges.append((u, v))
    return Graph.from_edges(n, edges), m + 1


def parse_graph(text: str) -> Graph:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    g, used = parse_graph_lines(lines)
    if used != len(lines):
        raise ValueError("trailing content after graph block")
    return g
