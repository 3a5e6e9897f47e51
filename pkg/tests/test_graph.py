import math
import random

import pytest

from colormix.graph import (
    Graph,
    ball,
    bfs_distances,
    edge_boundary,
    format_graph,
    generate_gnp,
    parse_graph,
    vertex_boundary,
)


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def test_gnp_edgeless_when_d_zero():
    g = generate_gnp(5, 0, seed=1)
    assert g.n == 5 and g.edge_count == 0


def test_gnp_complete_when_p_one():
    assert generate_gnp(4, 4, seed=7).adjacency == complete(4).adjacency


def test_gnp_edge_count_within_five_sigma():
    n, d = 1000, 2
    pairs = n * (n - 1) // 2
    p = d / n
    mean, sigma = pairs * p, math.sqrt(pairs * p * (1 - p))
    g = generate_gnp(n, d, seed=42)
    assert abs(g.edge_count - mean) <= 5 * sigma


def test_gnp_deterministic():
    a = format_graph(generate_gnp(300, 3.0, seed=9))
    b = format_graph(generate_gnp(300, 3.0, seed=9))
    assert a == b
    assert a != format_graph(generate_gnp(300, 3.0, seed=10))


@pytest.mark.parametrize("d", [-0.1, 6])
def test_gnp_rejects_bad_degree(d):
    with pytest.raises(ValueError):
        generate_gnp(5, d, seed=1)


def test_gnp_mean_edges_over_seeds():
    # pooled over many seeds the edge rate should match p closely
    n, d = 60, 3.0
    total = sum(generate_gnp(n, d, seed=s).edge_count for s in range(400))
    pairs = 400 * n * (n - 1) // 2
    p = d / n
    assert abs(total - pairs * p) <= 5 * math.sqrt(pairs * p * (1 - p))


def test_bfs_examples():
    assert bfs_distances(path(3), 0) == {0: 0, 1: 1, 2: 2}
    g = Graph.from_edges(3, [(0, 1)])
    assert 2 not in bfs_distances(g, 0)
    assert sorted(bfs_distances(cycle(4), 2).values()) == [0, 1, 1, 2]


def test_bfs_triangle_inequality():
    g = generate_gnp(80, 3.0, seed=5)
    dist = [bfs_distances(g, v) for v in range(g.n)]
    rng = random.Random(0)
    for _ in range(500):
        a, b, c = (rng.randrange(g.n) for _ in range(3))
        ab = dist[a].get(b, math.inf)
        bc = dist[b].get(c, math.inf)
        assert dist[a].get(c, math.inf) <= ab + bc


def test_vertex_boundary_examples():
    g = cycle(4)
    assert vertex_boundary(g, range(4)) == frozenset()
    star = Graph.from_edges(5, [(0, i) for i in range(1, 5)])
    assert vertex_boundary(star, {0}) == frozenset({1, 2, 3, 4})
    assert vertex_boundary(g, {0}) == frozenset({1, 3})


def test_edge_boundary_examples():
    assert edge_boundary(cycle(3), set()) == []
    assert edge_boundary(complete(3), {0}) == [(0, 1), (0, 2)]
    assert len(edge_boundary(complete(4), {0, 1})) == 4


def test_boundary_invariants():
    g = generate_gnp(60, 3.0, seed=3)
    rng = random.Random(1)
    for _ in range(50):
        s = {v for v in range(g.n) if rng.random() < 0.3}
        vb = vertex_boundary(g, s)
        assert not vb & s
        assert all(any(w in s for w in g.adjacency[u]) for u in vb)
        eb = edge_boundary(g, s)
        assert len(eb) == sum(len(set(g.adjacency[u]) - s) for u in s)
        assert eb == sorted(eb)


def test_ball_examples():
    g = path(5)
    assert ball(g, 2, 0) == {2}
    assert ball(g, 2, 1) == {1, 2, 3}
    h = generate_gnp(100, 2.5, seed=4)
    dist = bfs_distances(h, 0)
    assert ball(h, 0, 3) == {u for u, k in dist.items() if k <= 3}


def test_graph_text_roundtrip():
    g = generate_gnp(50, 2.0, seed=11)
    text = format_graph(g)
    assert parse_graph(text) == g
    lines = text.splitlines()
    assert lines[0] == f"{g.n} {g.edge_count}"
    assert all(int(a) < int(b) for a, b in (ln.split() for ln in lines[1:]))


@pytest.mark.parametrize("text", ["3 2\n0 1\n0 1\n", "3 1\n1 1\n", "3 2\n0 1\n"])
def test_graph_reader_rejects_bad_input(text):
    with pytest.raises(ValueError):
        parse_graph(text)


def test_graph_rejects_asymmetric_adjacency():
    with pytest.raises(ValueError):
        Graph(2, ((1,), ()))
