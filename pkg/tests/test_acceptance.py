"""The ten acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL`` line (also when it
fails) and asserts its own runtime limit.
"""

import random
import time

import pytest

from oracles import brute_distinguishing_number, brute_pointed_isomorphisms, random_connected, spreadsheet
from limitcolor.constants import build_schedule
from limitcolor.graph import MetricView, disk, is_separated, maximal_separated_set, relative_density_constant, sphere
from limitcolor.hierarchy import Hierarchy
from limitcolor.iso import PointedPattern, iter_pointed_isomorphisms
from limitcolor.palette import Palette
from limitcolor.verify import (
    check_finitary,
    check_level_invariants,
    check_rigidity_level0,
    inject_cluster_fault,
    inject_color_fault,
    min_separating_delta,
)
from limitcolor.workbench.dnum import distinguishing_index, distinguishing_number
from limitcolor.workbench.generators import (
    cayley_ball,
    complete,
    complete_bipartite,
    cycle,
    grid,
    path,
    petersen,
    random_bounded_degree,
    star,
    torus,
    tree,
    tree_ball,
)
from limitcolor.workbench.pipeline import RunConfig, run_pipeline


@pytest.fixture
def criterion(capsys):
    """``with criterion(n, limit) as note:`` runs a body, prints its verdict and checks the time."""
    from contextlib import contextmanager

    @contextmanager
    def run(n, title, limit):
        notes = []
        start = time.perf_counter()
        ok = False
        try:
            yield notes
            ok = True
        finally:
            took = time.perf_counter() - start
            ok = ok and took < limit
            extra = ("; " + "; ".join(notes)) if notes else ""
            with capsys.disabled():
                print("\ncriterion %d: %s  %s (%.1fs, limit %ds)%s" % (n, "PASS" if ok else "FAIL", title, took, limit, extra))
        assert took < limit, "criterion %d took %.1fs" % (n, took)

    return run


def test_1_distinguishing_numbers(criterion):
    with criterion(1, "exact distinguishing numbers", 10):
        assert distinguishing_number(cycle(5)) == 3
        assert distinguishing_number(complete(4)) == 4
        assert distinguishing_number(complete_bipartite(3, 3)) == 4
        p4 = path(4)
        assert distinguishing_number(p4) == brute_distinguishing_number(p4) == 2
        assert distinguishing_number(petersen()) == 3


def test_2_net_properties(criterion):
    with criterion(2, "maximal separated sets are nets", 30) as notes:
        rng = random.Random(2024)
        checked = 0
        for _ in range(200):
            g = random_bounded_degree(rng.randint(3, 200), rng.randint(2, 5), seed=rng.randrange(10 ** 9))
            m = MetricView(g)
            delta = g.degree_bound
            for k in (2, 3, 4):
                a = maximal_separated_set(m, k)
                assert is_separated(m, a, k)
                assert relative_density_constant(m, a) <= k - 1
                assert len(a) * delta ** k > g.n
                checked += 1
        notes.append("%d nets" % checked)


def _corpus():
    out = [cycle(n) for n in (3, 5, 12, 40)] + [path(n) for n in (2, 7, 30)]
    out += [complete(n) for n in (2, 4, 6)] + [complete_bipartite(3, 3), complete_bipartite(2, 5), star(4), petersen()]
    out += [grid(12, 9), torus(8, 8), tree(3, 4), tree_ball(3, 5), tree_ball(4, 4)]
    out += [cayley_ball("Z", 10), cayley_ball("Z2", 6), cayley_ball("F2", 4)]
    out += [random_bounded_degree(60, d, seed=s) for d in (2, 3, 4, 5) for s in range(3)]
    return out


def test_3_growth_bounds(criterion):
    with criterion(3, "sphere and disk growth bounds", 10) as notes:
        corpus = _corpus()
        for g in corpus:
            k = g.degree_bound
            for x in g.vertices():
                for r in range(1, 7):
                    assert len(sphere(g, x, r)) <= k * (k - 1) ** (r - 1)
                    size = len(disk(g, x, r))
                    if k == 2:
                        assert size <= 1 + 2 * r
                    elif k == 3:
                        assert size <= 3 * 2 ** r
                    elif k > 3:
                        assert size <= 4 * (k - 1) ** r
        notes.append("%d graphs" % len(corpus))


def test_4_constants(criterion):
    with criterion(4, "constants calculator", 5):
        for degree in (2, 3):
            for eps in ([1, 2, 3], [2, 5, 7]):
                paper = build_schedule("paper", degree, eps)
                assert paper.levels[0].s == 27 + eps[0]
            rs, ss = [12, 5, 4], [3, 4, 5]
            sched = build_schedule("desk", degree, r=rs, s=ss)
            sheet = spreadsheet(degree, rs, ss)
            for n in range(3):
                lv = sched.levels[n]
                assert lv.r_bar == lv.r_hat * (3 * lv.s + 1)
                for key in ("R_minus", "R_plus", "l", "L", "Gamma_minus", "Gamma_plus", "K_bar", "K", "r_bar"):
                    assert getattr(lv, key) == sheet[key][n], (degree, n, key)
        assert build_schedule("paper", 2, [1]).levels[0].r_hat > 2 ** 11


def test_5_hierarchy_invariants(criterion):
    with criterion(5, "hierarchy invariants", 120) as notes:
        sched_args = dict(r=[12, 4], s=[3, 3])
        for name, g in (("grid 60x60", grid(60, 60)), ("tree 3-ary depth 6", tree(3, 6))):
            h = Hierarchy(g, build_schedule("desk", g.degree_bound, **sched_args))
            rep = check_level_invariants(h)
            assert rep.ok, [str(l) for l in rep.failures()]
            for key in ("disk-in-cluster", "star-shaped", "closed-in-disk", "metric-comparison", "degree-bound"):
                assert rep["L0." + key].status in ("pass", "boundary-skipped")
            skipped = [l.check for l in rep.with_status("boundary-skipped")]
            notes.append("%s boundary-skipped: %s" % (name, ", ".join(skipped) or "none"))


def test_6_rigidity(criterion):
    with criterion(6, "level-0 rigidity", 120) as notes:
        for g in (cycle(120), path(150), grid(200, 2)):
            h = Hierarchy(g, build_schedule("desk", g.degree_bound, r=[12], s=[3]))
            pal = Palette(h)
            rep = check_rigidity_level0(pal, max_size=64, max_net=4)
            assert rep.ok, [str(l) for l in rep.failures()]
            line = rep["rigidity.self-identity"]
            assert line.status == "pass" and line.domain > 0
            notes.append("%s: %d clusters, %d skipped" % (g.name, len(h[0].order) - line.skipped, line.skipped))


def _desk_run(text):
    res = run_pipeline(RunConfig.from_text(text))
    g, col = res.graph, res.phi.coloring
    assert max(col[v] for v in g.vertices()) < g.degree_bound
    assert res.report.ok, [str(l) for l in res.report.failures()]
    return res


def test_7_finitary_separation(criterion):
    with criterion(7, "finitary separation on desk runs", 300) as notes:
        res = _desk_run("generator = grid\ngen.w = 60\ngen.h = 60\nr = 12, 4\ns = 3, 3\nlevels = 1\n"
                        "corona_inner = 0\nn_separation = 1\ndelta_max = 16\n")
        assert res.delta is not None
        notes.append("grid delta=%d" % res.delta)
        res = _desk_run("generator = cycle\ngen.n = 200\nr = 20, 4\ns = 3, 3\nlevels = 1\n"
                        "corona_inner = 0\nn_separation = 1\ndelta_max = 100\n")
        g, col = res.graph, res.phi.coloring
        delta = min_separating_delta(g, col, 4, delta_max=100)
        assert delta == res.delta
        assert check_finitary(g, col, 4, delta).ok
        notes.append("C200 delta=%d" % delta)


def test_8_isomorphism_oracle(criterion):
    with criterion(8, "backtracking matches brute force", 30) as notes:
        rng = random.Random(8)
        found = 0
        for _ in range(500):
            n = rng.randint(1, 8)
            ga = random_connected(rng, n)
            k = rng.randint(1, 3)
            ca = [rng.randrange(k) for _ in range(n)]
            if rng.random() < 0.5:
                perm = list(range(n))
                rng.shuffle(perm)
                gb = type(ga)(n, [(perm[u], perm[v]) for u, v in ga.edges()])
                cb = [0] * n
                for v in range(n):
                    cb[perm[v]] = ca[v]
            else:
                gb = random_connected(rng, n)
                cb = [rng.randrange(k) for _ in range(n)]
            a, b = rng.randrange(n), rng.randrange(n)
            want = brute_pointed_isomorphisms(ga, a, ca, gb, b, cb)
            got = list(iter_pointed_isomorphisms(PointedPattern(ga, a, ca), PointedPattern(gb, b, cb)))
            key = lambda f: sorted(f.items())
            assert sorted(map(key, got)) == sorted(map(key, want))
            found += bool(want)
        notes.append("%d of 500 cases isomorphic" % found)


def test_9_line_graph_reduction(criterion):
    with criterion(9, "distinguishing index via line graphs", 5):
        assert distinguishing_index(cycle(5)) == 3
        assert distinguishing_index(star(3)) == 3
        assert distinguishing_index(path(3)) == 2


def test_10_fault_injection(criterion):
    with criterion(10, "fault injection", 60) as notes:
        g = cycle(200)
        sched = build_schedule("desk", 2, r=[20, 4], s=[3, 3])
        h = Hierarchy(g, sched)
        pal = Palette(h, corona_inner=0, n_separation=1)
        phi = pal.build_phi()
        assert check_level_invariants(h, palette=pal, phi=phi).ok
        for v in range(0, 200, 7):
            rep = check_level_invariants(h, palette=pal, phi=phi, coloring=inject_color_fault(phi.coloring, v))
            assert rep.failures() and all(l.witness is not None for l in rep.failures())
        lv = h[0]
        x, y = lv.order[0], lv.order[1]
        z = next(u for u in lv.cluster[y] if u not in lv.closed_cluster[x])
        inject_cluster_fault(h, 0, z, x)
        rep = check_level_invariants(h)
        bad = rep.failures()
        assert bad and all(l.witness is not None for l in bad)
        notes.append("cluster fault flagged by %s" % ", ".join(l.check for l in bad))
