import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypercop.core import (
    Graph,
    GraphError,
    all_pairs_distances,
    ball,
    ball_excluding,
    bfs_order,
    interval,
)
from hypercop.generators import complete, cycle, path, subdivided_grid

from . import oracles


@st.composite
def connected_graphs(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    # random spanning tree keeps it connected, extra edges on top
    edges = {(draw(st.integers(0, i - 1)), i) for i in range(1, n)}
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=2 * n))
    edges |= {(min(a, b), max(a, b)) for a, b in extra if a != b}
    return Graph(n, sorted(edges))


def test_path_distance():
    assert all_pairs_distances(path(3))[0, 2] == 2


def test_complete_distances():
    d = all_pairs_distances(complete(4))
    assert (d[~np.eye(4, dtype=bool)] == 1).all()


def test_subdivided_grid_diagonal():
    g = subdivided_grid(2)
    d = g.distances()
    assert d[g.marks["a"], g.marks["c"]] == 8


def test_disconnected_rejected():
    with pytest.raises(GraphError, match="not connected"):
        Graph(4, [(0, 1), (2, 3)])


@pytest.mark.parametrize("edges", [[(0, 0)], [(0, 1), (1, 0)]])
def test_bad_edges_rejected(edges):
    with pytest.raises(GraphError):
        Graph(2, edges)


@settings(max_examples=60, deadline=None)
@given(connected_graphs())
def test_distances_match_networkx(g):
    d = all_pairs_distances(g)
    assert d.tolist() == oracles.distances(g)
    assert (d == d.T).all() and (np.diag(d) == 0).all()
    # |d(u,w) - d(v,w)| <= d(u,v)
    assert (np.abs(d[:, None, :] - d[None, :, :]) <= d[:, :, None]).all()


def test_ball_examples():
    c6 = cycle(6)
    dm = c6.distances()
    assert ball(dm, 3, 0) == {3}
    assert ball(dm, 0, 2) == {4, 5, 0, 1, 2}
    assert ball(dm, 0, 3) == set(range(6))


def test_ball_excluding_examples():
    assert ball_excluding(path(3), 0, 2, 1) == {0}
    assert ball_excluding(cycle(4), 0, 2, 1) == {0, 3, 2}
    assert ball_excluding(cycle(6), 0, 1, 3) == {5, 0, 1}
    with pytest.raises(GraphError):
        ball_excluding(path(3), 1, 2, 1)


@settings(max_examples=60, deadline=None)
@given(connected_graphs(), st.data())
def test_ball_excluding_matches_punctured_bfs(g, data):
    if g.n < 2:
        return
    v = data.draw(st.integers(0, g.n - 1))
    x = data.draw(st.integers(0, g.n - 1).filter(lambda k: k != v))
    r = data.draw(st.integers(0, g.n))
    got = ball_excluding(g, v, r, x)
    assert x not in got
    assert got == oracles.punctured_ball(g.adjacency, v, r, x)


def test_interval_examples():
    assert interval(cycle(6).distances(), 0, 3) == set(range(6))
    assert interval(cycle(4).distances(), 0, 2) == {0, 1, 2, 3}
    assert interval(path(4).distances(), 2, 2) == {2}


@settings(max_examples=40, deadline=None)
@given(connected_graphs(max_n=7))
def test_interval_is_union_of_geodesics(g):
    dm = g.distances()
    for u in range(g.n):
        for v in range(g.n):
            iv = interval(dm, u, v)
            assert iv == oracles.geodesic_interval(g, u, v)
            assert iv <= ball(dm, u, int(dm[u, v]))


def test_bfs_order_star_and_path():
    star = Graph(5, [(0, i) for i in range(1, 5)])
    assert bfs_order(star, 0).order == (0, 1, 2, 3, 4)
    b = bfs_order(path(3), 1)
    assert b.order == (1, 0, 2)
    assert b.parent[0] == 1 and b.parent[2] == 1


@settings(max_examples=60, deadline=None)
@given(connected_graphs(), st.data())
def test_bfs_order_properties(g, data):
    root = data.draw(st.integers(0, g.n - 1))
    b = bfs_order(g, root)
    dm = g.distances()
    depth = [dm[root, v] for v in b.order]
    assert depth == sorted(depth)
    assert b.parent[root] == root
    for v in range(g.n):
        if v != root:
            assert dm[v, b.parent[v]] == 1
            assert dm[root, b.parent[v]] == dm[root, v] - 1
        k = data.draw(st.integers(0, g.n))
        a = b.ancestor(v, k)
        assert dm[v, a] == min(k, dm[root, v])
        assert dm[v, a] + dm[a, root] == dm[v, root]


def test_induced_subgraph():
    sub, keep = cycle(6).induced([0, 1, 2])
    assert keep == [0, 1, 2]
    assert sub.edges() == [(0, 1), (1, 2)]
