"""Equivalences between centres of one level.

Level 0: a pointed isomorphism of closed clusters carrying the open cluster
onto the open cluster.

Level ``n >= 1``: a pointed isomorphism of the ambient union of closed
clusters around the level-``n`` disk of radius ``n`` that keeps that disk,
its clusters, the signs, ``chi`` and the edges one level down, and that
agrees with the representative maps of level ``n - 1`` near the cluster.

Weak equivalences are the same idea on the ``r^±`` disk of ``d_{n-1}``.

Candidate maps come from the isomorphism search with the necessary
labels attached; every candidate is then checked clause by clause.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Tuple

from .graph import GraphError, VertexSet, bfs_distances
from .hierarchy import Hierarchy
from .iso import PointedPattern, iter_pointed_isomorphisms


class EquivalenceError(ValueError):
    pass


@dataclass
class EquivalenceWitness:
    n: int
    x: int
    y: int
    mapping: Dict[int, int]
    weak: bool = False

    def __call__(self, v: int) -> int:
        return self.mapping[v]

    def inverse(self) -> "EquivalenceWitness":
        return EquivalenceWitness(self.n, self.y, self.x, {b: a for a, b in self.mapping.items()}, self.weak)

    def then(self, other: "EquivalenceWitness") -> "EquivalenceWitness":
        """``other`` after ``self``."""
        if other.x != self.y:
            raise EquivalenceError("witnesses do not compose")
        return EquivalenceWitness(self.n, self.x, other.y, {a: other.mapping[b] for a, b in self.mapping.items()},
                                  self.weak)

    def is_identity(self) -> bool:
        return all(a == b for a, b in self.mapping.items())


@dataclass
class RepresentativeTable:
    n: int
    classes: List[List[int]]
    rep: Dict[int, int]
    h: Dict[int, Dict[int, int]]
    weak: bool = False

    def class_of(self, x: int) -> List[int]:
        for c in self.classes:
            if x in c:
                return c
        raise KeyError(x)


def _signature(p: PointedPattern) -> Tuple:
    g = p.graph
    dist = bfs_distances(g, p.basepoint)
    colors = p.colors or (None,) * g.n
    profile = Counter((dist[v], g.degree(v), colors[v]) for v in g.vertices())
    rel = tuple(sum(len(s) for s in r) for r in p.relations)
    return (g.n, g.n_edges(), rel, tuple(sorted(profile.items(), key=repr)))


class Equivalences:
    """Equivalence tests and representative tables for a hierarchy.

    ``chi_values`` maps each level to its ``chi`` colouring (computed when
    missing).  Representative tables are built lazily, lower levels first.
    """

    def __init__(self, hier: Hierarchy, chi_values: Optional[Dict[int, Dict[int, int]]] = None,
                 node_budget: Optional[int] = None, limit: int = 256):
        self.hier = hier
        self._chi = dict(chi_values or {})
        self.node_budget = node_budget
        self.limit = limit
        self._tables: Dict[Tuple[int, bool], RepresentativeTable] = {}
        self._key_cache: Dict[int, Dict[int, int]] = {}

    # -- data ------------------------------------------------------------------------------

    def chi(self, n: int) -> Dict[int, int]:
        if n not in self._chi:
            from .palette import chi

            self._chi[n] = chi(self.hier, n)
        return self._chi[n]

    def disk_n(self, n: int, x: int) -> VertexSet:
        return self.hier.metric(n).ball(x, n)

    def middle(self, n: int, x: int) -> VertexSet:
        """Union of closed level-``n`` clusters (one level down) over the disk."""
        out = set()
        for v in self.disk_n(n, x):
            out.update(self.hier[n].closed_cluster[v])
        return VertexSet(out)

    def domain(self, n: int, x: int) -> VertexSet:
        """Ambient union of closed clusters of the level-``n`` disk of radius ``n``."""
        out = set()
        for v in self.disk_n(n, x):
            out.update(self.hier.compose(n, -1, v, closed=True))
        return VertexSet(out)

    def weak_disk(self, n: int, x: int) -> VertexSet:
        lv = self.hier[n]
        return self.hier.metric(n - 1).ball(x, lv.radius(x))

    def weak_domain(self, n: int, x: int) -> VertexSet:
        if n == 0:
            return self.weak_disk(0, x)
        out = set()
        for u in self.weak_disk(n, x):
            out.update(self.hier.compose(n - 1, -1, u, closed=True))
        return VertexSet(out)

    def rep_key(self, n: int):
        """``(d_n(., p_n), d(., p), id)`` with ``p_n`` the level-``n`` centre owning ``p``."""
        if n not in self._key_cache:
            anchor = self.hier.projection(n, self.hier.basepoint)
            self._key_cache[n] = self.hier.metric(n).distances_from(anchor)
        dn = self._key_cache[n]
        base = self.hier.base_dist
        return lambda v: (dn[v], base[v], v)

    # -- patterns ------------------------------------------------------------------------

    def _pattern(self, vertices, x, label, relations=()) -> PointedPattern:
        try:
            return PointedPattern.from_vertices(self.hier.graph, vertices, x, label, relations)
        except GraphError as exc:
            raise EquivalenceError("equivalence domain of %d is disconnected: %s" % (x, exc)) from exc

    def _zero_pattern(self, x: int) -> PointedPattern:
        lv = self.hier[0]
        open_ = lv.cluster[x]
        return self._pattern(lv.closed_cluster[x], x, lambda v: v in open_)

    def _n_pattern(self, n: int, x: int) -> PointedPattern:
        below = self.hier[n - 1]
        chi = self.chi(n - 1)
        disk = set(self.disk_n(n, x))
        mid = self.middle(n, x)
        edges = [e for e in below.edges if e[0] in mid and e[1] in mid]

        def label(v):
            return (v in disk, (below.sign[v], chi[v]) if v in mid else None)

        return self._pattern(self.domain(n, x), x, label, [edges])

    def _weak_pattern(self, n: int, x: int) -> PointedPattern:
        if n == 0:
            return self._pattern(self.weak_disk(0, x), x, None)
        below = self.hier[n - 1]
        chi = self.chi(n - 1)
        disk = self.weak_disk(n, x)
        edges = [e for e in below.edges if e[0] in disk and e[1] in disk]

        def label(v):
            return (below.sign[v], chi[v]) if v in disk else None

        return self._pattern(self.weak_domain(n, x), x, label, [edges])

    def pattern(self, n: int, x: int, weak: bool = False) -> PointedPattern:
        if weak:
            return self._weak_pattern(n, x)
        return self._zero_pattern(x) if n == 0 else self._n_pattern(n, x)

    # -- clause checks ---------------------------------------------------------------------

    def _transport(self, n: int, f: Dict[int, int], u: int) -> Optional[str]:
        """Check ``f == h_{n, f(u)} o h_{n, u}^{-1}`` on the level-``n`` domain of ``u``."""
        if u not in f:
            return "%d outside the map" % u
        v = f[u]
        table = self.representatives(n)
        if v not in table.rep:
            return "%d maps to %d, not a level-%d centre" % (u, v, n)
        if table.rep[u] != table.rep[v]:
            return "%d and %d are not level-%d equivalent" % (u, v, n)
        hu, hv = table.h[u], table.h[v]
        inv = {b: a for a, b in hu.items()}
        for a in self.domain(n, u):
            if a not in f:
                return "%d outside the map" % a
            if f[a] != hv[inv[a]]:
                return "at %d: %d instead of %d" % (a, f[a], hv[inv[a]])
        return None

    def check(self, w: EquivalenceWitness) -> List[Tuple[str, str]]:
        """Failed clauses of a witness as ``(clause, detail)`` pairs."""
        n, x, y, f = w.n, w.x, w.y, w.mapping
        hier = self.hier
        bad: List[Tuple[str, str]] = []
        g = hier.graph
        if f.get(x) != y:
            bad.append(("pointed", "%r -> %r" % (x, f.get(x))))
        lv = hier[n]
        if lv.sign.get(x) != lv.sign.get(y):
            bad.append(("sign", "%d and %d differ in sign" % (x, y)))
        dom = set(self.weak_domain(n, x) if w.weak else (self.domain(n, x) if n else hier[0].closed_cluster[x]))
        cod = set(self.weak_domain(n, y) if w.weak else (self.domain(n, y) if n else hier[0].closed_cluster[y]))
        if set(f) != dom or set(f.values()) != cod or len(set(f.values())) != len(f):
            bad.append(("bijection", "map is not a bijection of the domains"))
            return bad
        for a in dom:
            for b in g.neighbors(a):
                if b in dom and not g.has_edge(f[a], f[b]):
                    bad.append(("isomorphism", "edge %d-%d not kept" % (a, b)))
                    return bad
        if sum(1 for a in dom for b in g.neighbors(a) if b in dom) != sum(
                1 for a in cod for b in g.neighbors(a) if b in cod):
            bad.append(("isomorphism", "edge counts differ"))
            return bad
        if w.weak:
            bad.extend(self._check_weak(n, x, y, f))
        elif n == 0:
            if {f[a] for a in lv.cluster[x]} != set(lv.cluster[y]):
                bad.append(("open cluster", "cluster of %d not carried onto cluster of %d" % (x, y)))
        else:
            bad.extend(self._check_n(n, x, y, f))
        return bad

    def _check_n(self, n: int, x: int, y: int, f: Dict[int, int]) -> List[Tuple[str, str]]:
        hier = self.hier
        lv, below = hier[n], hier[n - 1]
        chi = self.chi(n - 1)
        bad = []
        dx, dy = self.disk_n(n, x), self.disk_n(n, y)
        if {f[v] for v in dx} != set(dy):
            return [("(i)", "disk of %d not carried onto disk of %d" % (x, y))]
        for v in dx:
            for name, table in (("closed", lv.closed_cluster), ("open", lv.cluster)):
                if {f[a] for a in table[v]} != set(table[f[v]]):
                    bad.append(("(ii)", "%s cluster of %d not carried onto that of %d" % (name, v, f[v])))
        mx, my = self.middle(n, x), self.middle(n, y)
        if {f[a] for a in mx} != set(my):
            bad.append(("(iii)", "middle sets differ"))
            return bad
        for a in mx:
            if below.sign[a] != below.sign[f[a]]:
                bad.append(("(iii)", "sign of %d not kept" % a))
            if chi[a] != chi[f[a]]:
                bad.append(("(iii)", "chi of %d not kept" % a))
        emx = {e for e in below.edges if e[0] in mx and e[1] in mx}
        emy = {e for e in below.edges if e[0] in my and e[1] in my}
        if {tuple(sorted((f[a], f[b]))) for a, b in emx} != emy:
            bad.append(("(iii)", "edges of level %d not kept" % (n - 1)))
        pen = below.metric.penumbra(lv.cluster[x], 1)
        for u in pen:
            msg = self._transport(n - 1, f, u)
            if msg:
                bad.append(("(v)", msg))
                break
        return bad

    def _check_weak(self, n: int, x: int, y: int, f: Dict[int, int]) -> List[Tuple[str, str]]:
        if n == 0:
            return []
        below = self.hier[n - 1]
        chi = self.chi(n - 1)
        bad = []
        dx, dy = self.weak_disk(n, x), self.weak_disk(n, y)
        if {f[v] for v in dx} != set(dy):
            return [("(i)", "disk of %d not carried onto disk of %d" % (x, y))]
        for a in dx:
            if below.sign[a] != below.sign[f[a]] or chi[a] != chi[f[a]]:
                bad.append(("(ii)", "sign or chi of %d not kept" % a))
        ex = {e for e in below.edges if e[0] in dx and e[1] in dx}
        ey = {e for e in below.edges if e[0] in dy and e[1] in dy}
        if {tuple(sorted((f[a], f[b]))) for a, b in ex} != ey:
            bad.append(("(ii)", "edges of level %d not kept" % (n - 1)))
        r = self.hier[n].radius(x)
        for u in below.metric.ball(x, r - 1):
            msg = self._transport(n - 1, f, u)
            if msg:
                bad.append(("(iv)", msg))
                break
        return bad

    # -- search ----------------------------------------------------------------------------

    def iter_witnesses(self, n: int, x: int, y: int, weak: bool = False,
                       accept: Optional[Callable[[Dict[int, int]], bool]] = None):
        """All valid witnesses ``x -> y`` (up to the search limit)."""
        lv = self.hier[n]
        if x not in lv.sign or y not in lv.sign:
            raise EquivalenceError("both points must be level-%d centres" % n)
        if lv.sign[x] != lv.sign[y]:
            return
        a = self.pattern(n, x, weak)
        b = self.pattern(n, y, weak)
        if _signature(a) != _signature(b):
            return
        for f in iter_pointed_isomorphisms(a, b, limit=self.limit, node_budget=self.node_budget):
            w = EquivalenceWitness(n, x, y, f, weak)
            if accept is not None and not accept(f):
                continue
            if not self.check(w):
                yield w

    def find(self, n: int, x: int, y: int, weak: bool = False) -> Optional[EquivalenceWitness]:
        for w in self.iter_witnesses(n, x, y, weak):
            return w
        return None

    def zero(self, x: int, y: int) -> Optional[EquivalenceWitness]:
        return self.find(0, x, y)

    def equivalence(self, n: int, x: int, y: int) -> Optional[EquivalenceWitness]:
        return self.find(n, x, y)

    def weak(self, n: int, x: int, y: int) -> Optional[EquivalenceWitness]:
        return self.find(n, x, y, weak=True)

    # -- representatives -------------------------------------------------------------------

    def _table(self, n: int, weak: bool) -> RepresentativeTable:
        lv = self.hier[n]
        key = self.rep_key(n)
        classes: List[List[int]] = []
        rep: Dict[int, int] = {}
        h: Dict[int, Dict[int, int]] = {}
        sigs: Dict[Tuple, List[int]] = {}
        for x in sorted(lv.members, key=key):
            sig = (lv.sign[x], _signature(self.pattern(n, x, weak)))
            found = None
            for c in sigs.get(sig, []):
                w = self.find(n, classes[c][0], x, weak)
                if w is not None:
                    found = (c, w)
                    break
            if found is None:
                sigs.setdefault(sig, []).append(len(classes))
                classes.append([x])
                rep[x] = x
                dom = self.weak_domain(n, x) if weak else (self.domain(n, x) if n else lv.closed_cluster[x])
                h[x] = {a: a for a in dom}
            else:
                c, w = found
                classes[c].append(x)
                rep[x] = classes[c][0]
                h[x] = w.mapping
        return RepresentativeTable(n, classes, rep, h, weak)

    def representatives(self, n: int) -> RepresentativeTable:
        if (n, False) not in self._tables:
            for m in range(n):
                self.representatives(m)
            self._tables[(n, False)] = self._table(n, False)
        return self._tables[(n, False)]

    def weak_representatives(self, n: int) -> RepresentativeTable:
        if (n, True) not in self._tables:
            for m in range(n):
                self.representatives(m)
            self._tables[(n, True)] = self._table(n, True)
        return self._tables[(n, True)]


def _engine(levels) -> Equivalences:
    return levels if isinstance(levels, Equivalences) else Equivalences(levels)


def zero_equivalence(levels, x: int, y: int) -> Optional[EquivalenceWitness]:
    return _engine(levels).zero(x, y)


def n_equivalence(levels, n: int, x: int, y: int) -> Optional[EquivalenceWitness]:
    if n < 1:
        raise EquivalenceError("use zero_equivalence at level 0")
    return _engine(levels).equivalence(n, x, y)


def weak_equivalence(levels, n: int, x: int, y: int) -> Optional[EquivalenceWitness]:
    return _engine(levels).weak(n, x, y)


def compute_representatives(levels, n: int, weak: bool = False) -> RepresentativeTable:
    eng = _engine(levels)
    return eng.weak_representatives(n) if weak else eng.representatives(n)
