import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_pointed_isomorphisms
from limitcolor.constants import build_schedule
from limitcolor.equivalence import (
    EquivalenceError,
    Equivalences,
    compute_representatives,
    n_equivalence,
    weak_equivalence,
    zero_equivalence,
)
from limitcolor.graph import induced_subgraph
from limitcolor.hierarchy import Hierarchy
from limitcolor.palette import Palette
from limitcolor.workbench.generators import cycle, random_bounded_degree


def _hier(g, r, s, **kw):
    return Hierarchy(g, build_schedule("desk", g.degree_bound, r=r, s=s, check_minima=False), **kw)


@pytest.fixture(scope="module")
def long_cycle():
    h = _hier(cycle(300), [2, 1], [3, 3], split="all-minus")
    return h, Equivalences(h)


def test_identity_is_a_self_equivalence(long_cycle):
    h, e = long_cycle
    for n in (0, 1):
        for x in h[n].order[:6]:
            ws = list(e.iter_witnesses(n, x, x))
            assert any(w.is_identity() for w in ws)
            assert all(not e.check(w) for w in ws)


def test_translated_centres_are_equivalent(long_cycle):
    h, e = long_cycle
    w = n_equivalence(e, 1, 15, 45)
    assert w is not None and w(15) == 45
    # a rotation by 30 on the middle of the cycle
    assert all(w(v) == (v + 30) % 300 for v in e.domain(1, 15))
    # the reflection fails the transport clause
    assert len(list(e.iter_witnesses(1, 15, 45))) == 1
    assert not e.check(w)
    assert weak_equivalence(e, 1, 15, 45) is not None
    with pytest.raises(EquivalenceError):
        n_equivalence(e, 0, 0, 5)
    with pytest.raises(EquivalenceError):
        e.find(1, 15, 16)


def test_perturbed_chi_breaks_equivalence(long_cycle):
    h, e = long_cycle
    chi0 = dict(e.chi(0))
    only = set(e.middle(1, 45)) - set(e.middle(1, 15))
    chi0[sorted(only)[0]] = 9
    other = Equivalences(h, chi_values={0: chi0})
    assert other.equivalence(1, 15, 45) is None
    assert e.equivalence(1, 15, 45) is not None


def test_composition_and_inverse_stay_valid(long_cycle):
    h, e = long_cycle
    a = e.equivalence(1, 15, 45)
    b = e.equivalence(1, 45, 75)
    assert not e.check(a.inverse())
    assert not e.check(a.then(b))
    assert a.then(b).y == 75
    with pytest.raises(EquivalenceError):
        a.then(a)


def test_representatives_are_key_minimal(long_cycle):
    h, e = long_cycle
    for n in (0, 1):
        table = compute_representatives(e, n)
        key = e.rep_key(n)
        assert sorted(x for c in table.classes for x in c) == sorted(h[n].members)
        for c in table.classes:
            rep = min(c, key=key)
            assert all(table.rep[x] == rep for x in c)
            assert table.h[rep] == {v: v for v in table.h[rep]}
            for x in c:
                assert table.h[x][rep] == x
        # distinct classes are not equivalent
        reps = [c[0] for c in table.classes]
        for i, x in enumerate(reps):
            for y in reps[i + 1:]:
                assert e.find(n, x, y) is None


def test_different_cluster_sizes_are_not_equivalent():
    h = _hier(cycle(200), [20], [3])
    lv = h[0]
    pairs = [(x, y) for x in lv.order for y in lv.order if len(lv.closed_cluster[x]) != len(lv.closed_cluster[y])]
    assert pairs
    for x, y in pairs:
        assert zero_equivalence(h, x, y) is None


def test_canonical_families_are_pushed_forward():
    h = _hier(cycle(200), [20], [3])
    pal = Palette(h)
    table = pal.equivalences.representatives(0)
    assert any(len(c) > 1 for c in table.classes)
    for x in h[0].order:
        rep, f = table.rep[x], table.h[x]
        a, b = pal.family(0, rep), pal.family(0, x)
        assert b.base == {f[u]: c for u, c in a.base.items()}
        assert b.net == [f[v] for v in a.net]
        assert pal.orderings[0][x].order == [f[v] for v in pal.orderings[0][rep].order]


graphs = st.builds(
    lambda n, d, seed: random_bounded_degree(n, d, seed=seed),
    st.integers(8, 24),
    st.integers(2, 3),
    st.integers(0, 10 ** 6),
)


def _brute_zero(h, x, y):
    # level-0 equivalence from scratch: closed clusters labelled by open membership
    lv = h[0]
    ga, la = induced_subgraph(h.graph, lv.closed_cluster[x], x)
    gb, lb = induced_subgraph(h.graph, lv.closed_cluster[y], y)
    ca = [v in lv.cluster[x] for v in la]
    cb = [v in lv.cluster[y] for v in lb]
    return bool(brute_pointed_isomorphisms(ga, ga.basepoint, ca, gb, gb.basepoint, cb))


@settings(max_examples=25, deadline=None)
@given(graphs)
def test_zero_equivalence_matches_brute_force(g):
    h = _hier(g, [1], [3], split="all-minus")
    lv = h[0]
    small = [x for x in lv.order if len(lv.closed_cluster[x]) <= 7]
    e = Equivalences(h)
    for x in small:
        for y in small:
            assert (e.zero(x, y) is not None) == _brute_zero(h, x, y)


@settings(max_examples=15, deadline=None)
@given(graphs)
def test_weak_level_zero_uses_the_disk(g):
    h = _hier(g, [1], [3], split="all-minus")
    e = Equivalences(h)
    for x in h[0].order:
        assert set(e.weak_domain(0, x)) == set(h.metric(-1).ball(x, 1))
        assert weak_equivalence(e, 0, x, x) is not None
