import random
from fractions import Fraction

import networkx as nx
import pytest

from colormix.blocks import (
    BlockSpansGraph,
    check_local_feasibility,
    check_marginal_bounds,
    gap_never_decreases,
    make_block,
    minimal_permissive_block,
    surgery,
    verify_block_decay_step,
    verify_telescopic_recursion,
)
from colormix.coloring import ListColoringInstance, exact_marginal, is_feasible
from colormix.graph import Graph, set_distance


def lists_inst(n, edges, q, lists=None):
    g = Graph.from_edges(n, edges)
    if lists is None:
        return ListColoringInstance.q_coloring(g, q)
    return ListColoringInstance.from_lists(g, q, lists)


def random_inst(rng, n_max=8, q_range=(3, 7)):
    n = rng.randint(3, n_max)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.35]
    q = rng.randint(*q_range)
    lists = [[c for c in range(1, q + 1) if rng.random() < 0.85] or [1] for _ in range(n)]
    return lists_inst(n, edges, q, lists)


# -- blocks ---------------------------------------------------------------

def test_block_is_center_when_neighbors_have_slack():
    inst = lists_inst(3, [(0, 1), (1, 2)], 6)
    b = minimal_permissive_block(inst, 1)
    assert b.block == (1,)
    assert b.boundary_edges == ((1, 0), (1, 2))


def test_block_absorbs_saturated_path():
    inst = lists_inst(4, [(0, 1), (1, 2), (2, 3)], 5, [[1, 2], [1, 2, 3], [1, 2, 3], [1, 2, 3, 4, 5]])
    b = minimal_permissive_block(inst, 0)
    assert b.block == (0, 1, 2)
    assert b.boundary_edges == ((2, 3),)


def test_block_spans_complete_graph():
    inst = lists_inst(4, [(u, v) for u in range(4) for v in range(u + 1, 4)], 3)
    with pytest.raises(BlockSpansGraph):
        minimal_permissive_block(inst, 0)


def test_block_is_reachability_closure():
    rng = random.Random(5)
    for _ in range(100):
        inst = random_inst(rng)
        g = inst.graph
        v = rng.randrange(g.n)
        tight = [u for u in range(g.n) if not inst.has_slack(u)]
        h = nx.Graph()
        h.add_nodes_from([v, *tight])
        h.add_edges_from((a, b) for a, b in g.edges() if a in h and b in h)
        expected = nx.node_connected_component(h, v)
        if len(expected) == g.n:
            with pytest.raises(BlockSpansGraph):
                minimal_permissive_block(inst, v)
            continue
        b = minimal_permissive_block(inst, v)
        assert set(b.block) == expected
        assert make_block(inst, v, b.block) == b


def test_make_block_rejects_tight_boundary():
    inst = lists_inst(3, [(0, 1), (1, 2)], 3)
    with pytest.raises(ValueError):
        make_block(inst, 0, [0])


# -- surgery --------------------------------------------------------------

def test_surgery_single_edge_removes_nothing():
    inst = lists_inst(3, [(0, 1), (1, 2)], 5)
    b = make_block(inst, 0, [0])
    res = surgery(inst, b, 1, {0: 1}, {0: 2})
    assert res.removed_colors == ()
    assert res.instance.graph.n == 2 and res.instance.lists == inst.lists[1:]


def test_surgery_two_edges_hand_case():
    inst = lists_inst(3, [(0, 1), (0, 2)], 5)
    b = make_block(inst, 0, [0])
    res = surgery(inst, b, 1, {0: 1}, {0: 2})
    assert res.removed_colors == ((2, 2),)
    assert res.instance.lists[res.vertex_map[1]] == frozenset(range(1, 6))
    assert res.instance.lists[res.vertex_map[2]] == frozenset({1, 3, 4, 5})
    res2 = surgery(inst, b, 2, {0: 1}, {0: 2})
    assert res2.removed_colors == ((1, 1),)


def test_surgery_gap_and_feasibility_on_random_instances():
    rng = random.Random(9)
    done = 0
    while done < 100:
        inst = random_inst(rng)
        if not is_feasible(inst):
            continue
        v = rng.randrange(inst.n)
        try:
            b = minimal_permissive_block(inst, v)
        except BlockSpansGraph:
            continue
        proper = list(inst.proper_colorings(b.block))
        if not proper or b.m == 0:
            continue
        pi, rho = rng.choice(proper), rng.choice(proper)
        for i in range(1, b.m + 1):
            res = surgery(inst, b, i, pi, rho)
            assert gap_never_decreases(inst, res)
            assert is_feasible(res.instance)
        done += 1


# -- telescopic recursion -------------------------------------------------

def test_telescopic_equal_colorings_gives_one():
    inst = lists_inst(4, [(0, 1), (0, 2), (0, 3)], 4)
    b = make_block(inst, 0, [0])
    rec = verify_telescopic_recursion(inst, b, {0: 2}, {0: 2}, {})
    assert rec["lhs"] == rec["rhs"] == 1 and rec["equal"]


def test_telescopic_star_single_vertex_block():
    # leaves 1..3 hang off the center, and each leaf has one further pendant
    edges = [(0, 1), (0, 2), (0, 3), (1, 4), (2, 5), (3, 6)]
    inst = lists_inst(7, edges, 4)
    b = make_block(inst, 0, [0])
    for sigma in ({}, {4: 1, 5: 2}):
        rec = verify_telescopic_recursion(inst, b, {0: 1}, {0: 3}, sigma)
        assert rec["equal"] and rec["surgery_feasible"] and rec["gap_ok"]
        # with no condition the palette symmetry makes both sides 1
        assert (rec["lhs"] == 1) == (not sigma)


def test_telescopic_rejects_near_condition():
    inst = lists_inst(3, [(0, 1), (1, 2)], 5)
    b = make_block(inst, 0, [0])
    with pytest.raises(ValueError):
        verify_telescopic_recursion(inst, b, {0: 1}, {0: 2}, {1: 3})


def test_telescopic_mutant_breaks_equality():
    edges = [(0, 1), (0, 2), (0, 3), (1, 4), (2, 5), (3, 6)]
    inst = lists_inst(7, edges, 4)
    b = make_block(inst, 0, [0])
    rec = verify_telescopic_recursion(inst, b, {0: 1}, {0: 3}, {4: 1, 5: 2}, drop_factor=True)
    assert not rec["equal"]


# -- marginal bounds and local feasibility --------------------------------

def test_bounds_isolated_vertex_tight():
    inst = lists_inst(1, [], 5)
    rec = check_marginal_bounds(inst, 0, {})
    assert rec["upper_ok"] and rec["lower_ok"]
    assert set(exact_marginal(inst, 0).values()) == {Fraction(1, 5)}


def test_bounds_star_center():
    d = 4
    inst = lists_inst(d + 1, [(0, i) for i in range(1, d + 1)], d + 3)
    rec = check_marginal_bounds(inst, 0, {})
    assert rec["upper_applicable"] and rec["upper_ok"]
    assert rec["lower_applicable"] and rec["lower_ok"]


def test_bounds_report_reasons():
    inst = lists_inst(3, [(0, 1), (1, 2)], 3)
    rec = check_marginal_bounds(inst, 1, {0: 1})
    assert not rec["upper_applicable"] and not rec["lower_applicable"]
    assert len(rec["reasons"]) == 2


def test_local_feasibility_on_random_blocks():
    rng = random.Random(12)
    done = 0
    while done < 60:
        inst = random_inst(rng, n_max=7, q_range=(4, 7))
        v = rng.randrange(inst.n)
        try:
            b = minimal_permissive_block(inst, v)
        except BlockSpansGraph:
            continue
        far = [u for u in range(inst.n) if set_distance(inst.graph, b.block, [u]) >= 2]
        sigma = {}
        for u in far:
            if rng.random() < 0.5:
                sigma[u] = rng.choice(sorted(inst.lists[u]))
        if not is_feasible(inst, sigma):
            continue
        assert check_local_feasibility(inst, b, sigma)
        done += 1


# -- block decay step -----------------------------------------------------

def test_block_step_equal_boundaries():
    inst = lists_inst(5, [(i, i + 1) for i in range(4)], 5)
    b = make_block(inst, 0, [0])
    rec = verify_block_decay_step(inst, 0, b, [4], {4: 1}, {4: 1})
    assert rec["lhs"] == 0 and rec["holds"]


def test_block_step_path_q5():
    inst = lists_inst(5, [(i, i + 1) for i in range(4)], 5)
    b = minimal_permissive_block(inst, 0)
    assert b.block == (0,)
    for a, c in ((1, 2), (2, 5), (3, 4)):
        rec = verify_block_decay_step(inst, 0, b, [4], {4: a}, {4: c})
        assert rec["holds"]
