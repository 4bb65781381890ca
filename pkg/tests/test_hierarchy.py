import pytest
from hypothesis import given, settings, strategies as st

from limitcolor.constants import build_schedule
from limitcolor.graph import MetricView, bfs_distances, disk, is_separated
from limitcolor.hierarchy import MINUS, PLUS, Hierarchy, HierarchyError, bfs_ordering, children
from limitcolor.workbench.generators import cycle, grid, path, random_bounded_degree, star


def _sched(degree, r, s):
    return build_schedule("desk", degree, r=r, s=s, check_minima=False)


def test_cycle_literal_net_and_clusters():
    # 4-separated greedy net on C20 in (distance to 0, id) order, worked by hand
    h = Hierarchy(cycle(20), _sched(2, [2], [3]), split="all-minus", y_separation="literal")
    lv = h[0]
    assert lv.order == [0, 4, 16, 8, 12]
    assert all(lv.sign[x] == MINUS for x in lv.order)
    # ties go to the centre earlier in the level order
    assert set(lv.cluster[0]) == {18, 19, 0, 1, 2}
    assert set(lv.cluster[4]) == {3, 4, 5, 6}
    assert set(lv.cluster[16]) == {14, 15, 16, 17}
    assert set(lv.cluster[8]) == {7, 8, 9, 10}
    assert set(lv.cluster[12]) == {11, 12, 13}
    assert set(lv.closed_cluster[4]) == {2, 3, 4, 5, 6}
    assert lv.edges == [(0, 4), (0, 16), (4, 8), (8, 12), (12, 16)]


def test_cycle_strict_net():
    h = Hierarchy(cycle(20), _sched(2, [2], [3]), split="all-minus")
    assert h[0].order == [0, 5, 15, 10]


def test_bfs_ordering_examples():
    o = bfs_ordering(MetricView(star(3)), range(4), 0)
    assert o.order == [0, 1, 2, 3]
    assert list(children(o, 0)) == [1, 2, 3]

    o = bfs_ordering(MetricView(path(5)), range(5), 2)
    assert o.order == [2, 1, 3, 0, 4]
    assert o.parent == {1: 2, 3: 2, 0: 1, 4: 3}

    o = bfs_ordering(MetricView(grid(3, 3)), range(9), 4)
    assert o.order == [4, 1, 3, 5, 7, 0, 2, 6, 8]
    assert o.children[1] == [0, 2]
    assert o.children[3] == [6]
    assert o.children[5] == [8]
    assert o.children[7] == []

    o = bfs_ordering(MetricView(cycle(6)), range(6), 0)
    assert o.children[0] == [1, 5]
    assert o.children[1] == [2]
    assert o.children[5] == [4]
    assert o.children[2] == [3]


def test_bfs_ordering_rejects_disconnected_cluster():
    with pytest.raises(HierarchyError):
        bfs_ordering(MetricView(path(5)), [0, 1, 3], 0)


def test_grid_containment_and_star_shape():
    g = grid(15, 15)
    h = Hierarchy(g, _sched(4, [2], [3]), split="all-minus")
    lv = h[0]
    for x in lv.order:
        o = lv.bfs[x]
        dx = bfs_distances(g, x)
        # star-shaped: ordering depth is the ambient distance
        assert all(o.dist[u] == dx[u] for u in lv.cluster[x])
        assert set(disk(g, x, lv.r)) <= set(lv.cluster[x])
        assert set(lv.cluster[x]) <= set(lv.closed_cluster[x])


def test_compose_and_projection():
    g = grid(20, 20)
    h = Hierarchy(g, _sched(4, [2, 1], [3, 3]), split="all-minus")
    seen = set()
    for x in h[1].order:
        part = set(h.compose(1, -1, x))
        assert not part & seen
        seen |= part
        assert all(h.projection(1, v) == x for v in part)
        assert set(h.compose(1, 0, x)) == set(h[1].cluster[x])
        assert part <= set(h.compose(1, -1, x, closed=True))
    assert seen == set(g.vertices())
    with pytest.raises(HierarchyError):
        h.compose(0, 0, h[0].order[0])


def test_unknown_policies_rejected():
    with pytest.raises(HierarchyError):
        Hierarchy(cycle(20), _sched(2, [2], [3]), split="half")
    with pytest.raises(HierarchyError):
        Hierarchy(cycle(20), _sched(2, [2], [3]), y_separation="loose")


graphs = st.builds(
    lambda n, d, seed: random_bounded_degree(n, d, seed=seed),
    st.integers(10, 60),
    st.integers(2, 4),
    st.integers(0, 10 ** 6),
)


@settings(max_examples=30, deadline=None)
@given(graphs, st.integers(1, 3), st.sampled_from(["formula", "all-minus", "all-plus"]))
def test_level_zero_structure(g, r, policy):
    s = 3
    h = Hierarchy(g, _sched(g.degree_bound, [r], [s]), split=policy)
    lv = h[0]
    m = MetricView(g)
    assert is_separated(m, lv.y, 2 * r + 1)
    assert h.basepoint in lv.members
    assert is_separated(m, lv.plus(), 2 * r * s + 1)
    assert is_separated(m, lv.minus(), 2 * r + 1)
    for x in lv.plus():
        for y in lv.minus():
            assert m.dist(x, y) > r * (2 * s + 1)
    # open clusters partition the graph and sit inside the closed ones
    total = sorted(v for x in lv.order for v in lv.cluster[x])
    assert total == list(g.vertices())
    for x in lv.order:
        assert set(lv.cluster[x]) <= set(lv.closed_cluster[x])
        assert lv.cluster_of[x] == x
    for a, b in lv.edges:
        assert a in lv.members and b in lv.members
