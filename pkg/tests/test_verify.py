import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_pointed_isomorphisms, random_connected
from limitcolor.constants import build_schedule
from limitcolor.graph import bfs_distances, disk, induced_subgraph
from limitcolor.hierarchy import Hierarchy
from limitcolor.iso import Coloring
from limitcolor.palette import Family, Palette
from limitcolor.verify import (
    CheckLine,
    LadderSide,
    VerificationReport,
    check_aperiodic_finite,
    check_finitary,
    check_level_invariants,
    check_rigidity_ladder,
    check_rigidity_level0,
    inject_cluster_fault,
    inject_color_fault,
    min_separating_delta,
    repetitivity_density,
    sweep_delta,
)
from limitcolor.workbench.generators import complete, cycle, grid, path


def _const(g, c=0):
    return Coloring({v: c for v in g.vertices()}, 2)


def _hier(g, r, s, **kw):
    return Hierarchy(g, build_schedule("desk", g.degree_bound, r=r, s=s, check_minima=False), **kw)


def test_constant_cycle_fails_finitary():
    g = cycle(20)
    rep = check_finitary(g, _const(g), 3, 2)
    line = rep["finitary(eps=3,delta=2)"]
    assert line.status == "fail"
    x, y = line.witness["pair"]
    assert 0 < line.witness["distance"] < 3
    assert bfs_distances(g, x)[y] == line.witness["distance"]
    assert min_separating_delta(g, _const(g), 3, delta_max=5) is None


def test_eps_one_is_vacuous():
    g = cycle(20)
    line = check_finitary(g, _const(g), 1, 2)["finitary(eps=1,delta=2)"]
    assert line.status == "pass" and line.domain == 0 and "vacuous" in line.note


def test_clipped_bulk_is_rejected():
    g = grid(10, 10)
    with pytest.raises(ValueError, match="clipped"):
        check_finitary(g, _const(g), 2, 3, bulk=[0])
    with pytest.raises(ValueError, match="empty bulk"):
        check_finitary(g, _const(g), 2, 6)


def test_sweep_is_monotone():
    rng = random.Random(3)
    g = path(40)
    col = Coloring({v: rng.randrange(2) for v in g.vertices()}, 2)
    dom = list(range(12, 28))
    delta, pending = sweep_delta(g, col, 3, dom, delta_max=10)
    assert delta is not None and not pending
    for d in range(delta, 11):
        assert check_finitary(g, col, 3, d, dom).ok
    if delta > 0:
        assert not check_finitary(g, col, 3, delta - 1, dom).ok


def _naive_separated(g, col, eps, delta):
    for x in g.vertices():
        for y, d in bfs_distances(g, x).items():
            if not 0 < d < eps:
                continue
            ga, la = induced_subgraph(g, disk(g, x, delta), x)
            gb, lb = induced_subgraph(g, disk(g, y, delta), y)
            if brute_pointed_isomorphisms(ga, ga.basepoint, [col[v] for v in la],
                                          gb, gb.basepoint, [col[v] for v in lb]):
                return False
    return True


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_finitary_matches_naive_oracle(seed):
    rng = random.Random(seed)
    g = random_connected(rng, rng.randint(2, 8))
    col = Coloring({v: rng.randrange(2) for v in g.vertices()}, 2)
    eps, delta = rng.randint(1, 3), rng.randint(0, 2)
    assert check_finitary(g, col, eps, delta).ok == _naive_separated(g, col, eps, delta)


def test_aperiodic_finite_examples():
    k2 = complete(2)
    line = check_aperiodic_finite(k2, _const(k2))["aperiodic"]
    assert line.status == "fail" and sorted(line.witness["pair"]) == [0, 1]
    assert check_aperiodic_finite(k2, Coloring({0: 0, 1: 1}, 2)).ok
    p3 = path(3)
    assert check_aperiodic_finite(p3, Coloring({0: 0, 1: 0, 2: 1}, 2)).ok
    assert not check_aperiodic_finite(p3, _const(p3)).ok


def test_repetitivity_examples():
    g = cycle(12)
    assert repetitivity_density(g, _const(g), 0, 2) == 0
    alternating = Coloring({v: v % 2 for v in g.vertices()}, 2)
    assert repetitivity_density(g, alternating, 0, 2) == 1
    lone = Coloring({v: int(v == 0) for v in g.vertices()}, 2)
    assert repetitivity_density(g, lone, 0, 2) == 6


def test_report_integrity():
    rep = VerificationReport()
    rep.add(CheckLine("a", 1, "pass"))
    with pytest.raises(ValueError):
        rep.add(CheckLine("a", 1, "pass"))
    with pytest.raises(ValueError):
        rep.add(CheckLine("b", 1, "fail"))
    with pytest.raises(ValueError):
        rep.add(CheckLine("c", 1, "maybe"))
    assert VerificationReport.from_dict(rep.to_dict()).to_dict() == rep.to_dict()


@pytest.fixture(scope="module")
def grid_run():
    h = _hier(grid(40, 40), [12], [3])
    pal = Palette(h)
    return h, pal, pal.build_phi()


def test_level_invariants_on_a_grid(grid_run):
    h, pal, phi = grid_run
    rep = check_level_invariants(h, palette=pal, phi=phi)
    assert rep.ok, [str(l) for l in rep.failures()]
    for name in ("L0.partition", "L0.star-shaped", "L0.disk-in-cluster", "L0.chi-distinct",
                 "P0.marker", "P0.children-injective", "phi.cluster-is-family-member", "phi.index-recovered"):
        assert rep[name].status == "pass"
    assert rep["L0.distances-plus"].status == "skipped"
    with pytest.raises(ValueError):
        check_level_invariants(h, schedule=build_schedule("desk", 4, r=[12], s=[3]))


def test_color_faults_are_caught(grid_run):
    h, pal, phi = grid_run
    rng = random.Random(0)
    for v in rng.sample(range(h.graph.n), 10):
        bad = inject_color_fault(phi.coloring, v)
        rep = check_level_invariants(h, palette=pal, phi=phi, coloring=bad)
        assert rep.failures() and all(l.witness is not None for l in rep.failures())


def test_cluster_fault_is_caught():
    h = _hier(grid(40, 40), [12], [3])
    lv = h[0]
    x, y = lv.order[0], lv.order[1]
    z = max(lv.cluster[y], key=lambda v: bfs_distances(h.graph, x)[v])
    inject_cluster_fault(h, 0, z, x)
    rep = check_level_invariants(h)
    failed = {l.check for l in rep.failures()}
    assert "L0.closed-contains-open" in failed
    assert rep["L0.closed-contains-open"].witness["center"] == x
    with pytest.raises(ValueError):
        inject_cluster_fault(h, 0, z, x)


def test_rigidity_on_small_clusters():
    h = _hier(cycle(120), [12], [3])
    rep = check_rigidity_level0(Palette(h))
    assert rep.ok and rep["rigidity.self-identity"].domain > 0


def test_ladder_vacuous_and_corrupted():
    h = _hier(cycle(200), [20], [3])
    pal = Palette(h)
    phi = pal.build_phi()
    rep = check_rigidity_ladder(h.graph, phi.coloring, h, 0, h[0].order, 40, pal, phi)
    assert rep.ok and "vacuous" in rep["ladder.b-sign"].note

    x = h[0].order[0]
    assert len(pal.family(0, x).net) > 1
    other = Palette(h)
    fam = other.families[0][x]
    other.families[0][x] = Family(0, x, fam.sign, fam.base, fam.net[::-1], fam.marker, fam.capacity)
    side = LadderSide(h.graph, phi.coloring, h, other, phi)
    if other.family(0, x).index_of(phi.coloring) == pal.family(0, x).index_of(phi.coloring):
        pytest.skip("index is a palindrome on this net")
    rep = check_rigidity_ladder(h.graph, phi.coloring, h, 0, [x], 20, pal, phi, other=side, pairs=[(x, x)])
    line = rep["ladder.d-index"]
    assert line.status == "fail" and line.witness["pair"] == [x, x]
    assert rep["ladder.b-sign"].status == "pass"
