import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from limitcolor.graph import (
    Graph,
    GraphError,
    bfs_distances,
    bulk,
    closed_penumbra,
    corona,
    disk,
    induced_level_metric,
    is_separated,
    maximal_separated_set,
    relative_density_constant,
    sphere,
    MetricView,
)
from limitcolor.workbench.generators import cycle, grid, path, random_bounded_degree, tree_ball


def _all_paths_distance(g, x):
    # oracle: shortest simple path by exhaustive DFS
    best = {x: 0}

    def walk(v, seen, length):
        for w in g.neighbors(v):
            if w in seen:
                continue
            if length + 1 < best.get(w, 10 ** 9):
                best[w] = length + 1
            walk(w, seen | {w}, length + 1)

    walk(x, {x}, 0)
    return best


def test_bfs_path_and_cycle():
    assert bfs_distances(path(5), 0) == {0: 0, 1: 1, 2: 2, 3: 3, 4: 4}
    assert bfs_distances(cycle(6), 0) == {0: 0, 1: 1, 2: 2, 3: 3, 4: 2, 5: 1}
    assert bfs_distances(cycle(6), 0) == _all_paths_distance(cycle(6), 0)


def test_disk_examples():
    assert set(disk(cycle(6), 0, 1)) == {5, 0, 1}
    assert len(disk(path(21), 10, 3)) == 7
    t = tree_ball(3, 2)
    assert len(disk(t, t.basepoint, 2)) == 10


def test_sphere_corona_penumbra():
    assert set(corona(cycle(6), 0, 0, 2)) == {1, 2, 4, 5}
    assert set(sphere(path(5), 0, 4)) == {4}
    g = grid(5, 5)
    for x in (0, 12):
        assert closed_penumbra(g, [x], 2) == disk(g, x, 2)
    with pytest.raises(ValueError):
        corona(g, 0, 3, 2)


def test_maximal_separated_examples():
    assert set(maximal_separated_set(path(5), 2)) == {0, 2, 4}
    assert set(maximal_separated_set(cycle(6), 3)) == {0, 3}
    assert set(maximal_separated_set(cycle(6), 1)) == set(range(6))
    assert relative_density_constant(path(5), [0, 2, 4]) == 1
    assert relative_density_constant(path(5), range(5)) == 0
    assert is_separated(cycle(6), [0, 3], 3)
    with pytest.raises(ValueError, match="empty net"):
        relative_density_constant(path(5), [])


def test_graph_validation():
    with pytest.raises(GraphError):
        Graph(3, [(0, 0)])
    with pytest.raises(GraphError):
        Graph(3, [(0, 1), (1, 0)])
    with pytest.raises(GraphError) as exc:
        Graph(4, [(0, 1), (2, 3)])
    assert exc.value.components == [[0, 1], [2, 3]]
    g = Graph(3, [(0, 1), (1, 2)])
    assert g.degree_bound == 2
    assert Graph.from_dict(g.to_dict()) == g


def test_induced_level_metric():
    g = cycle(8)
    m = induced_level_metric(g, range(8), g.edges())
    assert m.distances_from(0) == bfs_distances(g, 0)
    two = induced_level_metric(g, [0, 4], [(0, 4)])
    assert two.dist(0, 4) == 1
    with pytest.raises(GraphError) as exc:
        induced_level_metric(g, [0, 2, 4], [(0, 2)])
    assert exc.value.components == [[0, 2], [4]]


def test_bulk_uses_frontier():
    g = grid(7, 7)
    assert set(bulk(g, 1)) == {r * 7 + c for r in range(1, 6) for c in range(1, 6)}
    assert set(bulk(g, 3)) == {24}
    assert len(bulk(cycle(9), 5)) == 9


graphs = st.builds(
    lambda n, d, seed: random_bounded_degree(n, d, seed=seed),
    st.integers(4, 30),
    st.integers(2, 4),
    st.integers(0, 10 ** 6),
)


@settings(max_examples=40, deadline=None)
@given(graphs, st.integers(1, 6))
def test_sphere_and_disk_bounds(g, r):
    k = g.degree_bound
    for x in list(g.vertices())[:5]:
        assert len(sphere(g, x, r)) <= k * (k - 1) ** (r - 1)
        size = len(disk(g, x, r))
        if k == 2:
            assert size <= 1 + 2 * r
        elif k == 3:
            assert size <= 3 * 2 ** r
        elif k > 3:
            assert size <= 4 * (k - 1) ** r


@settings(max_examples=40, deadline=None)
@given(graphs, st.integers(1, 5), st.integers(0, 10 ** 6))
def test_maximal_separated_is_net(g, k, seed):
    order = list(g.vertices())
    random.Random(seed).shuffle(order)
    a = maximal_separated_set(g, k, order)
    assert is_separated(g, a, k)
    assert relative_density_constant(g, a) <= k - 1
    assert len(a) > g.n / max(g.degree_bound, 2) ** k
    # brute-force separation and maximality
    dist = {u: bfs_distances(g, u) for u in g.vertices()}
    for u, v in itertools.combinations(a, 2):
        assert dist[u][v] >= k
    for v in g.vertices():
        assert v in a or any(dist[v][u] < k for u in a)


@settings(max_examples=40, deadline=None)
@given(graphs, st.integers(0, 4), st.integers(0, 4))
def test_penumbra_of_disk_is_disk(g, r, t):
    x = g.basepoint
    assert closed_penumbra(g, disk(g, x, r), t) == disk(g, x, r + t)
    for i in range(r + 1):
        assert set(sphere(g, x, i)) <= set(disk(g, x, r))
    assert sum(len(sphere(g, x, i)) for i in range(r + 1)) == len(disk(g, x, r))


@settings(max_examples=30, deadline=None)
@given(graphs, st.integers(1, 3))
def test_short_scale_metric_agreement(g, r):
    # Y0 = a connected disk, Y = its r-penumbra with the induced path metric
    x = g.basepoint
    y0 = disk(g, x, 2)
    y = closed_penumbra(g, y0, r)
    from limitcolor.graph import induced_subgraph

    sub, members = induced_subgraph(g, y)
    m = MetricView(sub, members)
    for u in y0:
        dy = m.distances_from(u)
        dx = bfs_distances(g, u)
        for v in y0:
            if dx[v] <= 2 * r:
                assert dy[v] == dx[v]
