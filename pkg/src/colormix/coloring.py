"""List-coloring instances, exact Gibbs marginals and marginal distances.

A partial coloring is a plain ``dict`` mapping vertex -> color, and a
marginal is a ``dict`` mapping color -> :class:`fractions.Fraction`.
Colors are the integers ``1..q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

from . import _counting
from .graph import Graph, parse_graph_lines, format_graph

PartialColoring = dict[int, int]
Marginal = dict[int, Fraction]


class InfeasibleCondition(ValueError):
    """The conditioning coloring has no proper extension."""


OracleBudgetExceeded = _counting.BudgetExceeded


@dataclass(frozen=True)
class ListColoringInstance:
    graph: Graph
    q: int
    lists: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        if self.q < 1:
            raise ValueError("palette size must be positive")
        if len(self.lists) != self.graph.n:
            raise ValueError("need one color list per vertex")
        for v, lst in enumerate(self.lists):
            if any(not 1 <= c <= self.q for c in lst):
                raise ValueError(f"list of vertex {v} leaves the palette 1..{self.q}")

    @classmethod
    def q_coloring(cls, graph: Graph, q: int) -> "ListColoringInstance":
        full = frozenset(range(1, q + 1))
        return cls(graph, q, tuple(full for _ in range(graph.n)))

    @classmethod
    def from_lists(cls, graph: Graph, q: int, lists: Sequence[Iterable[int]]) -> "ListColoringInstance":
        return cls(graph, q, tuple(frozenset(lst) for lst in lists))

    @property
    def n(self) -> int:
        return self.graph.n

    def degree(self, v: int) -> int:
        return self.graph.degree(v)

    def gap(self, v: int) -> int:
        """|L(v)| - d(v)."""
        return len(self.lists[v]) - self.graph.degree(v)

    def has_slack(self, v: int) -> bool:
        """|L(v)| > d(v) + 1."""
        return self.gap(v) > 1

    def induced(self, vertices: Iterable[int]) -> tuple["ListColoringInstance", dict[int, int]]:
        """Restriction to G[vertices] (lists untouched) plus the old -> new id map."""
        sub, index = self.graph.induced_subgraph(vertices)
        lists = tuple(self.lists[old] for old in sorted(index))
        return ListColoringInstance(sub, self.q, lists), index

    def list_colorings(self, vertices: Sequence[int]) -> Iterator[PartialColoring]:
        """All of L(S) for S = ``vertices`` (proper or not), in lexicographic order."""
        vertices = list(vertices)
        for colors in product(*(sorted(self.lists[v]) for v in vertices)):
            yield dict(zip(vertices, colors))

    def proper_colorings(self, vertices: Sequence[int]) -> Iterator[PartialColoring]:
        """L*(S): the colorings in L(S) that are proper on G[S]."""
        vertices = list(vertices)
        for pc in self.list_colorings(vertices):
            if _locally_proper(self.graph, pc):
                yield pc


def _locally_proper(g: Graph, pc: Mapping[int, int]) -> bool:
    for u, c in pc.items():
        for w in g.adjacency[u]:
            if w > u and pc.get(w) == c:
                return False
    return True


def relabel(pc: Mapping[int, int], index: Mapping[int, int]) -> PartialColoring:
    """Move a partial coloring through an old -> new vertex map, dropping vertices not mapped."""
    return {index[v]: c for v, c in pc.items() if v in index}


def is_proper(inst: ListColoringInstance, pc: Mapping[int, int], s: Iterable[int] | None = None) -> bool:
    """True iff ``pc`` respects the lists and has no monochromatic edge inside its domain.

    Raises ValueError when a color falls outside its vertex's list, or when
    ``s`` is given and differs from the domain of ``pc``.
    """
    if s is not None and set(s) != set(pc):
        raise ValueError("partial coloring must assign exactly the vertices of s")
    for v, c in pc.items():
        if c not in inst.lists[v]:
            raise ValueError(f"color {c} is not in the list of vertex {v}")
    return _locally_proper(inst.graph, pc)


def count_extensions(inst: ListColoringInstance, pc: Mapping[int, int] | None = None) -> int:
    """Number of proper colorings of ``inst`` that agree with ``pc``."""
    pc = dict(pc or {})
    for v, c in pc.items():
        if c not in inst.lists[v]:
            return 0
    if not _locally_proper(inst.graph, pc):
        return 0
    net = _counting.build_network(inst.q, inst.graph.adjacency, inst.lists, pc)
    if net is None:
        return 0
    return _counting.solve(net, classes=_counting.color_classes(net))


def is_feasible(inst: ListColoringInstance, pc: Mapping[int, int] | None = None) -> bool:
    return count_extensions(inst, pc) > 0


def marginal_weights(
    inst: ListColoringInstance, v: int, cond: Mapping[int, int] | None = None, max_branches: int | None = None
) -> dict[int, int]:
    """Unnormalised marginal at ``v``: color -> number of extensions of cond + {v: color}.

    ``max_branches`` bounds the search; past it :class:`OracleBudgetExceeded` is raised.
    """
    cond = dict(cond or {})
    if v in cond:
        raise ValueError(f"vertex {v} is already assigned by the condition")
    out = {c: 0 for c in sorted(inst.lists[v])}
    if any(c not in inst.lists[u] for u, c in cond.items()) or not _locally_proper(inst.graph, cond):
        return out
    net = _counting.build_network(inst.q, inst.graph.adjacency, inst.lists, cond)
    if net is None:
        return out
    budget = None if max_branches is None else _counting.Budget(max_branches)
    vec = _counting.solve(net, keep=v, budget=budget, classes=_counting.color_classes(net))
    for c in out:
        out[c] = int(vec[c - 1])
    return out


def exact_marginal(
    inst: ListColoringInstance, v: int, cond: Mapping[int, int] | None = None, max_branches: int | None = None
) -> Marginal:
    """mu_v^cond as exact fractions over the colors of L(v)."""
    weights = marginal_weights(inst, v, cond, max_branches)
    total = sum(weights.values())
    if total == 0:
        raise InfeasibleCondition(f"condition {dict(cond or {})} has no proper extension")
    return {c: Fraction(w, total) for c, w in weights.items()}


def block_weights(inst: ListColoringInstance, block: Sequence[int], cond: Mapping[int, int] | None = None) -> dict[tuple[int, ...], int]:
    """Unnormalised mu_B^cond over L(B); keys are color tuples in ``block`` order."""
    cond = dict(cond or {})
    block = list(block)
    if any(u in cond for u in block):
        raise ValueError("block overlaps the condition")
    out = {}
    for pi in inst.list_colorings(block):
        out[tuple(pi[u] for u in block)] = count_extensions(inst, {**cond, **pi})
    return out


def tv_distance(m1: Mapping[int, Fraction | float], m2: Mapping[int, Fraction | float]):
    """Total variation distance; exact when both marginals are exact."""
    keys = set(m1) | set(m2)
    return sum((abs(m1.get(x, 0) - m2.get(x, 0)) for x in keys), Fraction(0)) / 2


def _log_ratio(a, b) -> float:
    """log(a/b) with 0/0 -> 0 (ratio 1), a/0 -> +inf, 0/b -> -inf."""
    if a == 0 and b == 0:
        return 0.0
    if b == 0:
        return math.inf
    if a == 0:
        return -math.inf
    if isinstance(a, Fraction) or isinstance(b, Fraction):
        r = Fraction(a) / Fraction(b)
        return math.log(r.numerator) - math.log(r.denominator)
    return math.log(a) - math.log(b)


def error_function(m1: Mapping[int, Fraction | float], m2: Mapping[int, Fraction | float]) -> float:
    """max over x, y of log(m1(x)/m2(x)) - log(m1(y)/m2(y)).

    Uses 0/0 = 1 and inf - inf = 0, so the value is ``math.inf`` exactly
    when the two supports differ.
    """
    keys = sorted(set(m1) | set(m2))
    if not keys:
        return 0.0
    pairs = [(m1.get(x, 0), m2.get(x, 0)) for x in keys]
    if any((a == 0) != (b == 0) for a, b in pairs):
        return math.inf
    live = [(a, b) for a, b in pairs if a != 0]
    if not live:
        return 0.0
    both_zero = len(live) < len(pairs)
    if all(isinstance(a, Fraction) and isinstance(b, Fraction) for a, b in live):
        ratios = [a / b for a, b in live] + ([Fraction(1)] if both_zero else [])
        r = max(ratios) / min(ratios)
        return math.log(r.numerator) - math.log(r.denominator)
    logs = [_log_ratio(a, b) for a, b in live] + ([0.0] if both_zero else [])
    return max(logs) - min(logs)


def block_error_function(w1: Mapping, w2: Mapping) -> tuple[float, object, object]:
    """Error function between two block marginals, plus a maximising (pi, rho).

    ``w1`` and ``w2`` may be unnormalised weights over the same keys; the
    error function only sees ratios, so normalisation cancels.  Only keys
    where both weights are positive compete for the maximum.
    """
    live = [k for k in w1 if w1[k] and w2.get(k)]
    if any(bool(w1[k]) != bool(w2.get(k, 0)) for k in w1):
        raise ValueError("supports differ; the block error function is infinite")
    ratios = {k: Fraction(w1[k]) / Fraction(w2[k]) for k in live}
    pi = max(live, key=lambda k: ratios[k])
    rho = min(live, key=lambda k: ratios[k])
    r = ratios[pi] / ratios[rho]
    return math.log(r.numerator) - math.log(r.denominator), pi, rho


# -- text format ------------------------------------------------------------

def format_instance(inst: ListColoringInstance) -> str:
    lines = [f"q {inst.q}", format_graph(inst.graph).rstrip("\n")]
    lines.extend(f"{v}: {','.join(str(c) for c in sorted(lst))}" for v, lst in enumerate(inst.lists))
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> ListColoringInstance:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("q "):
        raise ValueError("instance must start with a 'q <palette size>' header")
    q = int(lines[0].split()[1])
    graph, used = parse_graph_lines(lines[1:])
    rest = lines[1 + used :]
    if len(rest) != graph.n:
        raise ValueError(f"expected {graph.n} list lines, found {len(rest)}")
    lists: list[frozenset[int]] = []
    for expected, line in enumerate(rest):
        head, _, body = line.partition(":")
        if int(head) != expected:
            raise ValueError(f"list lines must be in vertex order; got {head!r}")
        body = body.strip()
        lists.append(frozenset(int(c) for c in body.split(",")) if body else frozenset())
    return ListColoringInstance(graph, q, tuple(lists))


def parse_coloring(text: str) -> PartialColoring:
    """Parse ``"v:c,v:c"`` into a partial coloring."""
    out: PartialColoring = {}
    for item in filter(None, (tok.strip() for tok in text.split(","))):
        v, c = item.split(":")
        out[int(v)] = int(c)
    return out
