"""Checkable claims about hierarchies and colourings, collected as reports.

Every check produces one report line with the size of the domain it
quantified over, a status and, on failure, a concrete witness.  Statuses:

``pass``              every item in the domain satisfied the claim;
``fail``              some item did not (the witness names it);
``boundary-skipped``  every item touched the patch boundary;
``skipped``           the claim's hypothesis does not hold for these radii.

Items near the boundary are counted in ``skipped`` and never silently
passed.
"""

from __future__ import annotations

import json
import time
from collections import Counter
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .graph import Graph, bfs_distances, bulk as bulk_vertices, frontier_distance
from .hierarchy import MINUS, PLUS, Hierarchy
from .iso import Coloring, PointedPattern, automorphisms, find_pointed_isomorphism, iter_pointed_isomorphisms

STATUSES = ("pass", "fail", "boundary-skipped", "skipped")


@dataclass
class CheckLine:
    check: str
    domain: int
    status: str
    witness: Optional[object] = None
    runtime: float = 0.0
    skipped: int = 0
    note: str = ""

    def __str__(self) -> str:
        extra = ""
        if self.skipped:
            extra += " skipped=%d" % self.skipped
        if self.witness is not None:
            extra += " witness=%s" % json.dumps(self.witness, default=str)
        if self.note:
            extra += " (%s)" % self.note
        return "%-40s %-16s n=%d%s" % (self.check, self.status, self.domain, extra)


@dataclass
class VerificationReport:
    lines: List[CheckLine] = field(default_factory=list)

    def add(self, line: CheckLine) -> CheckLine:
        if line.status not in STATUSES:
            raise ValueError("unknown status %r" % line.status)
        if line.status == "fail" and line.witness is None:
            raise ValueError("a failing line needs a witness")
        if any(l.check == line.check for l in self.lines):
            raise ValueError("check %r reported twice" % line.check)
        self.lines.append(line)
        return line

    def extend(self, other: "VerificationReport") -> "VerificationReport":
        for line in other.lines:
            self.add(line)
        return self

    def __getitem__(self, check: str) -> CheckLine:
        for line in self.lines:
            if line.check == check:
                return line
        raise KeyError(check)

    def __contains__(self, check: str) -> bool:
        return any(l.check == check for l in self.lines)

    def __iter__(self):
        return iter(self.lines)

    def __len__(self) -> int:
        return len(self.lines)

    @property
    def ok(self) -> bool:
        return all(l.status != "fail" for l in self.lines)

    def failures(self) -> List[CheckLine]:
        return [l for l in self.lines if l.status == "fail"]

    def with_status(self, status: str) -> List[CheckLine]:
        return [l for l in self.lines if l.status == status]

    def to_dict(self) -> dict:
        return {"ok": self.ok, "lines": [asdict(l) for l in self.lines]}

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        rep = cls()
        for line in d["lines"]:
            rep.add(CheckLine(**line))
        return rep

    def summary(self) -> str:
        return "\n".join(str(l) for l in self.lines)


class _Tally:
    """Accumulates one report line item by item."""

    def __init__(self, check: str):
        self.check = check
        self.count = 0
        self.skipped = 0
        self.witness = None
        self.note = ""
        self.start = time.perf_counter()

    def item(self, ok: bool, witness=None, in_bulk: bool = True) -> None:
        if not in_bulk:
            self.skipped += 1
            return
        self.count += 1
        if not ok and self.witness is None:
            self.witness = witness if witness is not None else "unspecified"

    def line(self, status: Optional[str] = None) -> CheckLine:
        if status is None:
            if self.witness is not None:
                status = "fail"
            elif self.count == 0 and self.skipped:
                status = "boundary-skipped"
            else:
                status = "pass"
        return CheckLine(self.check, self.count, status, self.witness,
                         round(time.perf_counter() - self.start, 6), self.skipped, self.note)


# -- finitary separation -------------------------------------------------------------------


def _usable_bulk(graph: Graph, delta: int, bulk: Optional[Iterable[int]]) -> List[int]:
    if bulk is None:
        domain = list(bulk_vertices(graph, delta))
    else:
        domain = sorted(set(bulk))
        if graph.frontier:
            fd = frontier_distance(graph)
            clipped = [v for v in domain if fd[v] < delta]
            if clipped:
                raise ValueError("disk of radius %d around bulk vertex %d is clipped by the boundary" % (delta, clipped[0]))
    if not domain:
        raise ValueError("empty bulk")
    return domain


def _disk_signature(graph: Graph, coloring, x: int, delta: int) -> Tuple:
    # ambient degree is a disk invariant only strictly inside the disk
    d = bfs_distances(graph, x, delta)
    return tuple(sorted(Counter((k, coloring[v], graph.degree(v) if k < delta else -1)
                                for v, k in d.items()).items()))


def _close_pairs(graph: Graph, domain: Sequence[int], eps: int) -> List[Tuple[int, int, int]]:
    members = set(domain)
    out = []
    for x in domain:
        for y, d in bfs_distances(graph, x, eps - 1).items():
            if x < y and y in members and d > 0:
                out.append((x, y, d))
    return out


def _unseparated(graph: Graph, coloring, pairs, delta: int, cache=None) -> List[Tuple[int, int, int]]:
    sig = {} if cache is None else cache
    pat: Dict[int, PointedPattern] = {}
    bad = []
    for x, y, d in pairs:
        for v in (x, y):
            if v not in sig:
                sig[v] = _disk_signature(graph, coloring, v, delta)
        if sig[x] != sig[y]:
            continue
        for v in (x, y):
            if v not in pat:
                pat[v] = PointedPattern.disk(graph, v, delta, coloring)
        if find_pointed_isomorphism(pat[x], pat[y]) is not None:
            bad.append((x, y, d))
    return bad


def check_finitary(graph: Graph, coloring, eps: int, delta: int,
                   bulk: Optional[Iterable[int]] = None) -> VerificationReport:
    """No two bulk vertices at distance ``0 < d < eps`` have isomorphic coloured ``delta``-disks."""
    domain = _usable_bulk(graph, delta, bulk)
    tally = _Tally("finitary(eps=%d,delta=%d)" % (eps, delta))
    pairs = _close_pairs(graph, domain, eps)
    bad = _unseparated(graph, coloring, pairs, delta)
    for x, y, d in pairs:
        tally.item(True)
    tally.count = len(pairs)
    if bad:
        x, y, d = bad[0]
        tally.witness = {"pair": [x, y], "distance": d, "unseparated_pairs": len(bad)}
    if not pairs:
        tally.note = "vacuous: no pairs closer than eps"
    rep = VerificationReport()
    rep.add(tally.line())
    return rep


def min_separating_delta(graph: Graph, coloring, eps: int, bulk: Optional[Iterable[int]] = None,
                         delta_max: int = 16) -> Optional[int]:
    """Least ``delta <= delta_max`` passing :func:`check_finitary` on one fixed domain.

    Separation is monotone in ``delta`` (larger disks refine smaller ones),
    so pairs are dropped from the sweep once separated.
    """
    return sweep_delta(graph, coloring, eps, bulk, delta_max)[0]


def sweep_delta(graph: Graph, coloring, eps: int, bulk: Optional[Iterable[int]] = None,
                delta_max: int = 16) -> Tuple[Optional[int], List[Tuple[int, int, int]]]:
    """``(least delta or None, pairs still unseparated at the last radius tried)``."""
    domain = _usable_bulk(graph, delta_max, bulk)
    pending = _close_pairs(graph, domain, eps)
    for delta in range(delta_max + 1):
        pending = _unseparated(graph, coloring, pending, delta)
        if not pending:
            return delta, []
    return None, pending


# -- finite aperiodicity and repetitivity ------------------------------------------------------


def check_aperiodic_finite(graph: Graph, coloring, cap: int = 64) -> VerificationReport:
    """Passes iff the only colour-preserving automorphism is the identity."""
    tally = _Tally("aperiodic")
    auts = automorphisms(graph, coloring, cap)
    tally.count = len(auts)
    for f in auts:
        moved = [v for v in graph.vertices() if f[v] != v]
        if moved:
            tally.witness = {"pair": [moved[0], f[moved[0]]], "automorphisms": len(auts)}
            break
    rep = VerificationReport()
    rep.add(tally.line())
    return rep


def repetitivity_density(graph: Graph, coloring, p: int, radius: int,
                         bulk: Optional[Iterable[int]] = None) -> Optional[int]:
    """Relative-density constant, over ``bulk``, of the vertices whose pointed
    coloured ``radius``-disk matches the one at ``p``; ``None`` if none match."""
    if graph.frontier and frontier_distance(graph)[p] < radius:
        raise ValueError("disk of radius %d around %d is clipped by the boundary" % (radius, p))
    domain = sorted(set(graph.vertices() if bulk is None else bulk))
    ref = PointedPattern.disk(graph, p, radius, coloring)
    sig = _disk_signature(graph, coloring, p, radius)
    hits = []
    for x in domain:
        if x == p:
            hits.append(x)
            continue
        if graph.frontier and frontier_distance(graph)[x] < radius:
            continue
        if _disk_signature(graph, coloring, x, radius) != sig:
            continue
        if find_pointed_isomorphism(ref, PointedPattern.disk(graph, x, radius, coloring)) is not None:
            hits.append(x)
    if not hits:
        return None
    from .graph import multi_source_distances

    dist = multi_source_distances(graph, hits)
    return max(dist[v] for v in domain)


# -- level invariants --------------------------------------------------------------------------


class _Bulk:
    """Decides which level items are far from the patch boundary.

    A level-``n`` centre is in the bulk when its composed closed cluster
    avoids the frontier, or, with ``margin`` set, when it is at least
    ``margin`` away from the frontier.
    """

    def __init__(self, hier: Hierarchy, margin: Optional[int] = None):
        self.hier = hier
        self.margin = margin
        g = hier.graph
        self.fd = frontier_distance(g) if g.frontier else None
        self.frontier = set(g.frontier)
        self._cache: Dict[Tuple[int, int], bool] = {}

    def center(self, n: int, x: int) -> bool:
        if self.fd is None:
            return True
        key = (n, x)
        if key not in self._cache:
            if self.margin is not None:
                self._cache[key] = self.fd[x] >= self.margin
            else:
                cl = self.hier.compose(n, -1, x, closed=True)
                self._cache[key] = not any(v in self.frontier for v in cl)
        return self._cache[key]

    def point(self, n: int, z: int) -> bool:
        """A point of ``X_{n-1}`` is in the bulk when its level-``n`` owner is."""
        return self.center(n, self.hier[n].cluster_of[z])


def _star_shaped(metric, cluster, x) -> Optional[Tuple[int, int, int]]:
    members = set(cluster)
    dist = metric.distances_from(x)
    for u in sorted(members):
        for w in metric.neighbors(u):
            if dist[w] == dist[u] - 1 and w not in members:
                return (x, u, w)
    return None


def _level_lines(hier: Hierarchy, n: int, bulk: _Bulk) -> List[CheckLine]:
    lv = hier[n]
    prev = hier.metric(n - 1)
    rec = hier.schedule.level(n)
    r, s = lv.r, lv.s
    out: List[CheckLine] = []
    pre = "L%d." % n
    prev_members = list(prev.labels())

    t = _Tally(pre + "basepoint-in-level")
    t.item(hier.basepoint in lv.members, {"basepoint": hier.basepoint})
    out.append(t.line())

    t = _Tally(pre + "partition")
    seen: Dict[int, int] = {}
    for x in lv.order:
        for z in lv.cluster[x]:
            t.item(z not in seen, {"vertex": z, "clusters": [seen.get(z), x]})
            seen[z] = x
    for z in prev_members:
        if z not in seen:
            t.item(False, {"vertex": z, "clusters": []})
        else:
            t.item(lv.cluster_of.get(z) == seen[z], {"vertex": z, "cluster_of": lv.cluster_of.get(z), "cluster": seen[z]})
    out.append(t.line())

    t = _Tally(pre + "closed-contains-open")
    for x in lv.order:
        extra = set(lv.cluster[x]) - set(lv.closed_cluster[x])
        t.item(not extra, {"center": x, "vertex": min(extra) if extra else None})
    out.append(t.line())

    plus, minus = list(lv.plus()), list(lv.minus())
    ysep = 2 * r + 1 if hier.y_separation == "strict" else 2 * r
    for name, pts, k in (("separated-plus", plus, 2 * r * s + 1), ("separated-minus", minus, ysep)):
        t = _Tally(pre + name)
        pts_set = set(pts)
        for x in pts:
            close = [(w, d) for w, d in prev.distances_from(x, k - 1).items() if w in pts_set and w != x]
            t.item(not close, {"pair": [x, close[0][0]], "distance": close[0][1]} if close else None)
        out.append(t.line())

    t = _Tally(pre + "sign-gap")
    if plus and minus:
        for x in minus:
            close = [(w, d) for w, d in prev.distances_from(x, r * (2 * s + 1)).items() if w in set(plus)]
            t.item(not close, {"pair": [x, close[0][0]], "distance": close[0][1]} if close else None)
    out.append(t.line())

    t = _Tally(pre + "plus-net-in-Yplus")
    yplus = [y for y in lv.y if lv.y_sign[y] == PLUS]
    if plus:
        reach = prev.penumbra(plus, 2 * r * s)
        for y in yplus:
            t.item(y in reach, {"vertex": y})
    out.append(t.line())

    t = _Tally(pre + "relatively-dense")
    reach = set(prev.penumbra(lv.members, lv.R_plus))
    for z in prev_members:
        t.item(z in reach, {"vertex": z}, bulk.point(n, z))
    out.append(t.line())

    t = _Tally(pre + "disk-in-cluster")
    for x in lv.order:
        ball = prev.ball(x, lv.radius(x))
        miss = [u for u in ball if u not in lv.cluster[x]]
        t.item(not miss, {"center": x, "vertex": miss[0]} if miss else None)
    out.append(t.line())

    t = _Tally(pre + "closed-in-disk")
    for x in lv.order:
        ball = set(prev.ball(x, lv.big_radius(x)))
        miss = [u for u in lv.closed_cluster[x] if u not in ball]
        t.item(not miss, {"center": x, "vertex": miss[0]} if miss else None)
    out.append(t.line())

    t = _Tally(pre + "star-shaped")
    for x in lv.order:
        w = _star_shaped(prev, lv.cluster[x], x)
        t.item(w is None, {"center": w[0], "vertex": w[1], "geodesic_step_outside": w[2]} if w else None)
    out.append(t.line())

    t = _Tally(pre + "zone-local")
    big = lv.R_plus
    for z in prev_members:
        a, b = lv.dist_plus[z], lv.dist_minus[z]
        a2 = a if a <= big else float("inf")
        b2 = b if b <= big else float("inf")
        local = PLUS if a2 - 2 * r * s <= b2 - r else MINUS
        t.item(local == lv.zone[z], {"vertex": z, "zone": lv.zone[z], "local_zone": local})
    out.append(t.line())

    t = _Tally(pre + "edges")
    expected = set()
    for z in prev_members:
        own = lv.owners[z]
        for w in list(prev.neighbors(z)) + [z]:
            for x in own:
                for y in lv.owners[w]:
                    if x != y:
                        expected.add((min(x, y), max(x, y)))
    got = set(lv.edges)
    diff = sorted(expected ^ got)
    t.item(not diff, {"pair": list(diff[0])} if diff else None)
    t.count = len(got | expected)
    out.append(t.line())

    t = _Tally(pre + "bfs-ordering")
    for x in lv.order:
        o = lv.bfs[x]
        bad = None
        for i in range(1, len(o.order)):
            u, v = o.order[i - 1], o.order[i]
            if o.dist[u] > o.dist[v]:
                bad = {"center": x, "pair": [u, v], "reason": "distance order"}
                break
            if o.dist[u] == o.dist[v] and o.rank[o.parent[u]] > o.rank[o.parent[v]]:
                bad = {"center": x, "pair": [u, v], "reason": "parent order"}
                break
        if bad is None:
            for u in o.order[1:]:
                prev_nb = [w for w in prev.neighbors(u) if w in o.rank and o.dist[w] == o.dist[u] - 1]
                if o.parent[u] != min(prev_nb, key=o.rank.__getitem__):
                    bad = {"center": x, "vertex": u, "reason": "parent is not the least earlier neighbour"}
                    break
        t.item(bad is None, bad)
    out.append(t.line())

    t = _Tally(pre + "children")
    cap = hier.degree(n - 1)
    for x in lv.order:
        o = lv.bfs[x]
        bad = None
        kids = [w for u in o.order for w in o.children[u]]
        if sorted(kids) != sorted(o.order[1:]):
            bad = {"center": x, "reason": "children do not partition the cluster"}
        for u in o.order:
            if bad:
                break
            if u != x and len(o.children[u]) > cap - 1:
                bad = {"center": x, "vertex": u, "children": len(o.children[u])}
            for w in o.children[u]:
                if o.dist[w] != o.dist[u] + 1 or w not in prev.neighbors(u):
                    bad = {"center": x, "vertex": w, "parent": u}
                    break
        t.item(bad is None, bad)
    out.append(t.line())

    # bulk-dependent metric claims
    t = _Tally(pre + "metric-comparison")
    amb = hier.ambient
    l_n, L_n = rec.l, rec.L
    for x in lv.order:
        dn = lv.metric.distances_from(x)
        dp = prev.distances_from(x)
        da = amb.distances_from(x)
        for y in lv.order:
            if y <= x:
                continue
            ok = dn[y] <= dp[y] <= l_n * dn[y] and dn[y] <= da[y] <= L_n * dn[y]
            t.item(ok, {"pair": [x, y], "d_n": dn[y], "d_prev": dp[y], "d_ambient": da[y]},
                   bulk.center(n, x) and bulk.center(n, y))
    out.append(t.line())

    t = _Tally(pre + "degree-bound")
    bound = 4 * (hier.degree(n - 1) - 1) ** (2 * lv.R_plus)
    for x in lv.order:
        t.item(lv.metric.degree(x) <= bound, {"center": x, "degree": lv.metric.degree(x)}, bulk.center(n, x))
    out.append(t.line())

    t = _Tally(pre + "composed-in-gamma")
    sigma = sum(hier[i].r for i in range(n + 1))
    t2 = _Tally(pre + "sum-r-in-composed")
    for x in lv.order:
        comp = set(hier.compose(n, -1, x))
        gamma = rec.Gamma_plus if lv.sign[x] == PLUS else rec.Gamma_minus
        d = amb.distances_from(x)
        far = [u for u in comp if d[u] > gamma]
        t.item(not far, {"center": x, "vertex": far[0]} if far else None, bulk.center(n, x))
        miss = [u for u, k in d.items() if k <= sigma and u not in comp]
        t2.item(not miss, {"center": x, "vertex": miss[0]} if miss else None, bulk.center(n, x))
    out += [t.line(), t2.line()]

    for name, hyp, sgn in (("distances-plus", 20, PLUS), ("distances-minus", 26, MINUS)):
        t = _Tally(pre + name)
        if s <= hyp:
            t.note = "needs s_%d > %d, have %d" % (n, hyp, s)
            out.append(t.line("skipped"))
            continue
        pts = [x for x in lv.order if lv.sign[x] == sgn]
        for x in pts:
            dn = lv.metric.distances_from(x, 2)
            dp = prev.distances_from(x)
            for y in pts:
                if y == x or y not in dn:
                    continue
                if sgn == PLUS:
                    t.item(dp[y] < lv.r_plus * s, {"pair": [x, y]}, bulk.center(n, x) and bulk.center(n, y))
                elif dn[y] == 2 or dn[y] == 1:
                    t.item(dp[y] < lv.r_minus * s, {"pair": [x, y]}, bulk.center(n, x) and bulk.center(n, y))
        out.append(t.line())

    t = _Tally(pre + "threshold-inequality")
    if hier.schedule.mode != "paper":
        t.note = "holds only at full-scale radii; desk radii are too small"
        out.append(t.line("skipped"))
    else:
        for x in lv.order:
            a = len(prev.distances_from(x, lv.radius(x)))
            b = len(prev.distances_from(x, lv.radius(x) * s))
            t.item(hier.eta(n, a) >= (6 + b) ** 2, {"center": x}, bulk.center(n, x))
        out.append(t.line())
    return out


def _chi_lines(hier: Hierarchy, n: int, chi: Dict[int, int]) -> List[CheckLine]:
    lv = hier[n]
    prev = hier.metric(n - 1)
    t = _Tally("L%d.chi-nonzero" % n)
    for x in lv.order:
        t.item(chi.get(x, 0) != 0, {"center": x})
    t2 = _Tally("L%d.chi-distinct" % n)
    for x in lv.order:
        for y, d in prev.distances_from(x, lv.radius(x) * lv.s).items():
            if y != x and y in lv.sign and lv.sign[y] == lv.sign[x] and x < y:
                t2.item(chi[x] != chi[y], {"pair": [x, y], "chi": chi[x]})
    return [t.line(), t2.line()]


def _palette_lines(palette, phi=None) -> List[CheckLine]:
    from .palette import CENTER_COLOR, MARKER_RADIUS, SPECIAL_ABOVE, marker_set

    hier = palette.hier
    g = hier.graph
    out: List[CheckLine] = []
    used = phi.indices if phi is not None else {n: {x: 0 for x in hier[n].order} for n in range(len(hier))}
    lv0 = hier[0]
    t = _Tally("P0.children-injective")
    t2 = _Tally("P0.marker")
    for x in lv0.order:
        fam = palette.family(0, x)
        o = palette.orderings[0][x]
        psi = fam.coloring(used.get(0, {}).get(x, 0))
        bad = None
        for u in o.order:
            cs = [psi[w] for w in o.children[u]]
            if len(cs) != len(set(cs)):
                bad = {"center": x, "vertex": u, "colors": cs}
                break
        t.item(bad is None, bad)
        near = bfs_distances(g, x, MARKER_RADIUS)
        zeros = {u for u in near if u in psi and psi[u] == 0}
        t2.item(zeros == set(marker_set(fam.marker, fam.sign)), {"center": x, "zeros": sorted(zeros)})
    out += [t.line(), t2.line()]
    for n in range(1, len(hier)):
        t = _Tally("P%d.center-marker" % n)
        for x in hier[n].order:
            fam = palette.family(n, x)
            psi = fam.coloring(used.get(n, {}).get(x, 0))
            ones = sorted(u for u, c in psi.items() if c in (1, 2))
            stray = sorted(u for u, c in psi.items() if c in (0, 3, 5) or (c == SPECIAL_ABOVE and u not in fam.net))
            t.item(ones == [x] and psi[x] == CENTER_COLOR[fam.sign] and not stray,
                   {"center": x, "marked": ones, "stray": stray})
        out.append(t.line())
    t = _Tally("P.nets-distinct-subsets")
    for n in range(len(hier)):
        for x in hier[n].order:
            fam = palette.family(n, x)
            t.item(len(set(fam.net)) == len(fam.net), {"level": n, "center": x})
    out.append(t.line())
    return out


def _phi_lines(palette, coloring, phi) -> List[CheckLine]:
    """The ambient colouring agrees with a family member on every level-0 cluster,
    and the recovered indices agree with the recursion."""
    from .palette import pair_index

    hier = palette.hier
    t = _Tally("phi.cluster-is-family-member")
    t2 = _Tally("phi.index-recovered")
    for x in hier[0].order:
        fam = palette.family(0, x)
        idx = fam.index_of(coloring)
        psi = fam.coloring(idx) if idx < fam.capacity else {}
        wrong = [u for u in hier[0].cluster[x] if psi.get(u) != coloring[u]]
        t.item(not wrong, {"center": x, "vertex": wrong[0], "expected": psi.get(wrong[0]),
                           "actual": coloring[wrong[0]]} if wrong else None)
        if phi is not None:
            want = pair_index(*phi.values[0][x])
            t2.item(idx == want, {"center": x, "recovered": idx, "expected": want})
    return [t.line(), t2.line()]


def check_level_invariants(hier: Hierarchy, schedule=None, palette=None, phi=None, coloring=None,
                           margin: Optional[int] = None) -> VerificationReport:
    """One report line per invariant, per level; palette lines when a palette is given."""
    if schedule is not None and schedule is not hier.schedule:
        raise ValueError("hierarchy was built from a different schedule")
    bulk = _Bulk(hier, margin)
    rep = VerificationReport()
    for n in range(len(hier)):
        for line in _level_lines(hier, n, bulk):
            rep.add(line)
        if palette is not None:
            for line in _chi_lines(hier, n, palette.chi[n]):
                rep.add(line)
    if palette is not None:
        for line in _palette_lines(palette, phi):
            rep.add(line)
        if coloring is None and phi is not None:
            coloring = phi.coloring
        if coloring is not None:
            for line in _phi_lines(palette, coloring, phi):
                rep.add(line)
    return rep


# -- rigidity ---------------------------------------------------------------------------------


def check_rigidity_level0(palette, centers: Optional[Iterable[int]] = None, max_size: int = 64,
                          max_net: int = 4) -> VerificationReport:
    """No colour-preserving pointed self-equivalence of a small level-0 cluster
    other than the identity, and none between different family members."""
    hier = palette.hier
    lv = hier[0]
    g = hier.graph
    t = _Tally("rigidity.self-identity")
    t2 = _Tally("rigidity.index-determined")
    skipped = 0
    for x in (lv.order if centers is None else centers):
        closed, open_ = lv.closed_cluster[x], set(lv.cluster[x])
        fam = palette.family(0, x)
        if len(closed) > max_size or len(fam.net) > max_net:
            skipped += 1
            continue
        count = min(fam.capacity, 1 << max_net)
        cols = [fam.coloring(i) for i in range(count)]
        pats = [PointedPattern.from_vertices(g, closed, x, (lambda v, c=c: (v in open_, c.get(v) if v in open_ else None)))
                for c in cols]
        for i in range(count):
            for j in range(count):
                for f in iter_pointed_isomorphisms(pats[i], pats[j]):
                    if i == j:
                        moved = [v for v, w in f.items() if v != w]
                        t.item(not moved, {"center": x, "index": i, "moved": moved[:1]})
                    else:
                        t2.item(False, {"center": x, "indices": [i, j]})
                    break
                else:
                    if i == j:
                        t.item(False, {"center": x, "index": i, "reason": "identity not found"})
                    else:
                        t2.item(True)
    rep = VerificationReport()
    for tl in (t, t2):
        tl.skipped = skipped
        if skipped and tl.count == 0:
            tl.note = "every cluster exceeded the size or net cap"
        rep.add(tl.line("skipped" if tl.count == 0 and tl.witness is None and skipped else None))
    return rep


@dataclass
class LadderSide:
    """One side of a ladder comparison: graph, colouring, hierarchy, palette, phi."""

    graph: Graph
    coloring: object
    hier: Hierarchy
    palette: object = None
    phi: object = None


def _side_from(graph, coloring, hier, palette=None, phi=None) -> LadderSide:
    return LadderSide(graph, coloring, hier, palette, phi)


def check_rigidity_ladder(graph: Graph, coloring, hier: Hierarchy, n: int, centers: Iterable[int],
                          radius: int, palette=None, phi=None, other: Optional[LadderSide] = None,
                          pairs: Optional[Iterable[Tuple[int, int]]] = None) -> VerificationReport:
    """Structure carried by coloured-disk isomorphisms.

    For each sampled centre ``x`` every vertex ``y`` of ``other`` (default:
    the same patch) with a matching coloured ``radius``-disk is tried; the
    isomorphism ``f`` found must keep, up to level ``n`` and on the part of
    the hierarchy it sees: signs (b), family indices (d), zones (f),
    open and closed clusters (g/h) and level edges (i).
    """
    a = _side_from(graph, coloring, hier, palette, phi)
    b = other or a
    tallies = {k: _Tally("ladder.%s" % k) for k in ("b-sign", "d-index", "f-zone", "gh-cluster", "i-edges")}
    found = []
    if pairs is None:
        cand = []
        for x in centers:
            sig = _disk_signature(a.graph, a.coloring, x, radius)
            for y in b.graph.vertices():
                if b.graph.frontier and frontier_distance(b.graph)[y] < radius:
                    continue
                if _disk_signature(b.graph, b.coloring, y, radius) == sig:
                    cand.append((x, y))
    else:
        cand = list(pairs)
    for x, y in cand:
        pa = PointedPattern.disk(a.graph, x, radius, a.coloring)
        pb = PointedPattern.disk(b.graph, y, radius, b.coloring)
        f = find_pointed_isomorphism(pa, pb)
        if f is None:
            continue
        if b is a and x == y:
            continue
        found.append((x, y, f))
    for x, y, f in found:
        _ladder_pair(a, b, n, f, tallies)
    rep = VerificationReport()
    for t in tallies.values():
        if not found:
            t.note = "vacuous: no coloured-disk isomorphism between distinct points"
        rep.add(t.line())
    return rep


def _ladder_pair(a: LadderSide, b: LadderSide, n: int, f: Dict[int, int], tallies) -> None:
    dom = set(f)
    for m in range(min(n, len(a.hier) - 1, len(b.hier) - 1) + 1):
        la, lb = a.hier[m], b.hier[m]
        seen = [u for u in la.order if set(a.hier.compose(m, -1, u, closed=True)) <= dom]
        for u in seen:
            v = f[u]
            tallies["b-sign"].item(v in lb.sign and lb.sign[v] == la.sign[u],
                                   {"level": m, "pair": [u, v]})
            if v not in lb.sign:
                continue
            if m == 0 and a.palette is not None and b.palette is not None:
                ia = a.palette.family(0, u).index_of(a.coloring)
                ib = b.palette.family(0, v).index_of(b.coloring)
                tallies["d-index"].item(ia == ib, {"level": 0, "pair": [u, v], "indices": [ia, ib]})
            elif a.phi is not None and b.phi is not None and m in a.phi.values and m in b.phi.values:
                pa, pb = a.phi.values[m].get(u), b.phi.values[m].get(v)
                tallies["d-index"].item(pa == pb, {"level": m, "pair": [u, v], "values": [pa, pb]})
            for name, table_a, table_b in (("open", la.cluster, lb.cluster), ("closed", la.closed_cluster, lb.closed_cluster)):
                img = {f[z] for z in table_a[u] if z in f}
                tallies["gh-cluster"].item(img == set(table_b[v]), {"level": m, "pair": [u, v], "cluster": name})
            for z in la.cluster[u]:
                if z in f and f[z] in lb.zone:
                    tallies["f-zone"].item(la.zone[z] == lb.zone[f[z]], {"level": m, "pair": [z, f[z]]})
        inside = set(seen)
        for u, w in la.edges:
            if u in inside and w in inside and f[u] in lb.sign and f[w] in lb.sign:
                e = (min(f[u], f[w]), max(f[u], f[w]))
                tallies["i-edges"].item(e in set(lb.edges), {"level": m, "edge": [u, w]})


# -- fault injection --------------------------------------------------------------------------


def inject_color_fault(coloring, v: int, color: Optional[int] = None) -> Coloring:
    """Copy of ``coloring`` with the colour at ``v`` changed."""
    colors = dict(coloring.items())
    bound = coloring.palette_bound if isinstance(coloring, Coloring) else max(colors.values()) + 1
    colors[v] = (colors[v] + 1) % max(bound, 2) if color is None else color
    return Coloring(colors, max(bound, colors[v] + 1))


def inject_cluster_fault(hier: Hierarchy, n: int, z: int, center: int) -> None:
    """Move point ``z`` of level ``n - 1`` into the cluster of ``center`` (in place)."""
    lv = hier[n]
    old = lv.cluster_of[z]
    if old == center:
        raise ValueError("point already belongs to that cluster")
    from .graph import VertexSet

    lv.cluster[old] = VertexSet(u for u in lv.cluster[old] if u != z)
    lv.cluster[center] = VertexSet(list(lv.cluster[center]) + [z])
    lv.cluster_of[z] = center
