"""Colourings of the hierarchy.

Every level contributes two things:

* ``chi``: a colouring of the centres of level ``n`` in which nearby
  centres of the same sign get distinct values, increasing in level order;
* a *family* per centre ``x``: a base colouring of the cluster of ``x``
  that marks ``x`` and its sign, plus a separated set ``N`` whose subsets
  (chosen by the bits of an index) receive one special colour.

The final colouring is assembled top-down.  A centre's value at level
``n + 1`` is a pair, the pair is turned into an index, and the index picks
the member of the family that colours the centre's cluster at level ``n``.
At the bottom the clusters are ambient vertex sets and the colours lie in
``range(deg X)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .graph import bfs_distances, maximal_separated_set
from .hierarchy import MINUS, PLUS, BFSOrdering, Hierarchy
from .iso import Coloring

MARKER_LENGTH = 5
MARKER_RADIUS = 7
LEVEL0_CORONA = 10
LEVEL0_NET_SEPARATION = 3
LEVELN_CORONA = 10

CENTER_COLOR = {MINUS: 1, PLUS: 2}
SPECIAL_ABOVE = 4
FREE_COLOR = 6
CAPACITY_POLICIES = ("realized", "formula")


class PaletteError(ValueError):
    pass


class CapacityError(PaletteError):
    """A family index does not fit the family built at ``(level, center)``."""

    def __init__(self, level: int, center: int, index: int, capacity: int, suggestion: Optional[int] = None):
        self.level = level
        self.center = center
        self.index = index
        self.capacity = capacity
        self.suggestion = suggestion
        msg = "level %d centre %d needs family index %d but only %d colourings exist" % (
            level, center, index, capacity)
        if suggestion is not None:
            msg += "; increase r_%d (try r_%d >= %d)" % (level, level, suggestion)
        super().__init__(msg)


# -- index pairing -------------------------------------------------------------------------


def pair_index(i: int, j: int, size: Optional[int] = None) -> int:
    """Injection of pairs into indices, shell by shell in ``max(i, j)``.

    Within the shell ``m = max(i, j)`` the pairs come as ``(0, m), ...,
    (m - 1, m), (m, 0), ..., (m, m)``, so ``range(k)**2`` lands exactly on
    ``range(k * k)``.
    """
    if i < 0 or j < 0:
        raise ValueError("indices are natural numbers")
    if size is not None and (i >= size or j >= size):
        raise CapacityError(-1, -1, max(i, j), size)
    m = max(i, j)
    return m * m + i if i < m else m * m + m + j


def unpair(k: int) -> Tuple[int, int]:
    if k < 0:
        raise ValueError("indices are natural numbers")
    from math import isqrt

    m = isqrt(k)
    t = k - m * m
    return (t, m) if t < m else (m, t - m)


# -- chi ----------------------------------------------------------------------------------------


def index_size(hier: Hierarchy, n: int, x: int) -> int:
    """Size of the index set of centre ``x``: 5 plus its far disk."""
    lv = hier[n]
    return 5 + len(hier.metric(n - 1).distances_from(x, lv.radius(x) * lv.s))


def chi(hier: Hierarchy, n: int) -> Dict[int, int]:
    """Greedy colouring of level ``n`` in level order.

    Each centre takes the least positive value not used by an earlier centre
    of its sign within ``d_{n-1}``-distance ``r^± s``.
    """
    lv = hier[n]
    prev = hier.metric(n - 1)
    out: Dict[int, int] = {}
    for x in lv.order:
        near = prev.distances_from(x, lv.radius(x) * lv.s)
        used = {out[y] for y in near if y in out and lv.sign[y] == lv.sign[x]}
        size = 5 + len(near)
        c = 1
        while c in used:
            c += 1
        if c >= size:
            raise PaletteError("index set of level-%d centre %d exhausted" % (n, x))
        out[x] = c
    return out


# -- level 0 markers ---------------------------------------------------------------------------


def marker_geodesic(g, cluster, x: int, length: int = MARKER_LENGTH) -> List[int]:
    """Lexicographically least geodesic ``x = t_0, ..., t_length`` in ``cluster``."""
    members = set(cluster)
    dist = bfs_distances(g, x, length)
    path = [x]
    tried: List[List[int]] = [sorted(w for w in g.neighbors(x) if dist.get(w) == 1 and w in members)]
    while path:
        if len(path) == length + 1:
            return path
        options = tried[-1]
        if not options:
            path.pop()
            tried.pop()
            continue
        w = options.pop(0)
        path.append(w)
        k = len(path)
        tried.append(sorted(v for v in g.neighbors(w) if dist.get(v) == k and v in members))
    raise PaletteError(
        "no geodesic of length %d from centre %d inside its cluster; the level-0 radius must be at least %d"
        % (length, x, MARKER_RADIUS + 1))


def marker_set(tau: Sequence[int], sign: int) -> List[int]:
    picks = (0, 1, 2, 4, 5) if sign == PLUS else (0, 1, 2, 5)
    return [tau[k] for k in picks]


def adapted_psi0_level0(g, ordering: BFSOrdering, sign: int, degree: Optional[int] = None,
                        tau: Optional[Sequence[int]] = None) -> Dict[int, int]:
    """Base colouring of a level-0 cluster.

    Colour 0 goes exactly on the marker; every children set gets distinct
    colours ``1, 2, ...`` in BFS order off the marker.
    """
    degree = g.degree_bound if degree is None else degree
    x = ordering.center
    if tau is None:
        tau = marker_geodesic(g, ordering.order, x)
    zeros = set(marker_set(tau, sign))
    colors = {v: 0 for v in zeros}
    for u in ordering.order:
        c = 1
        for w in ordering.children[u]:
            if w in zeros:
                continue
            if c >= degree:
                raise PaletteError("vertex %d has too many children for %d colours" % (u, degree))
            colors[w] = c
            c += 1
    if x not in colors:
        colors[x] = 0
    return colors


def level0_net(g, cluster, x: int, outer: int, inner: int = LEVEL0_CORONA) -> List[int]:
    """Maximal 3-separated subset of the corona ``inner < d(x, .) <= outer``.

    Returned in enumeration order, by ``(d(x, .), id)``.
    """
    members = set(cluster)
    dist = bfs_distances(g, x, outer)
    ring = sorted((v for v, d in dist.items() if d > inner and v in members), key=lambda v: (dist[v], v))
    chosen = set(maximal_separated_set(g, LEVEL0_NET_SEPARATION, ring, ring))
    return [v for v in ring if v in chosen]


# -- level n > 0 ---------------------------------------------------------------------------------


def adapted_psi0_leveln(cluster, x: int, sign: int) -> Dict[int, int]:
    """Centre gets 1 (minus) or 2 (plus); everything else the free colour 6."""
    colors = {u: FREE_COLOR for u in cluster}
    colors[x] = CENTER_COLOR[sign]
    return colors


def leveln_net(hier: Hierarchy, n: int, x: int, inner: int = LEVELN_CORONA,
               separation: Optional[int] = None) -> List[int]:
    """Separated subset of the level-``n`` corona around ``x``.

    Candidates are cluster points with ``inner < d_{n-1}(x, .) < r^±``,
    taken by ``(d_{n-1}, id)``; separation is measured in ``d_{n-2}``.
    """
    lv = hier[n]
    prev = hier.metric(n - 1)
    sep = hier[n - 1].r ** 2 * hier[n - 1].s if separation is None else separation
    members = set(lv.cluster[x])
    dist = prev.distances_from(x, lv.radius(x) - 1)
    ring = sorted((v for v, d in dist.items() if d > inner and v in members), key=lambda v: (dist[v], v))
    if sep <= 1:
        return ring
    chosen = set(maximal_separated_set(hier.metric(n - 2), sep, ring, ring))
    return [v for v in ring if v in chosen]


# -- families ------------------------------------------------------------------------------------


@dataclass
class Family:
    """The colourings ``psi^i`` of one cluster.

    ``net`` is kept in its enumeration order: bit ``k`` of ``i`` puts the
    special colour on ``net[k]``.
    """

    n: int
    center: int
    sign: int
    base: Dict[int, int]
    net: List[int]
    marker: List[int] = field(default_factory=list)
    capacity: int = 1

    @property
    def special(self) -> int:
        return 0 if self.n == 0 else SPECIAL_ABOVE

    def subset(self, i: int) -> List[int]:
        if not 0 <= i < self.capacity:
            raise CapacityError(self.n, self.center, i, self.capacity)
        return [v for k, v in enumerate(self.net) if i >> k & 1]

    def coloring(self, i: int) -> Dict[int, int]:
        out = dict(self.base)
        for v in self.subset(i):
            out[v] = self.special
        return out

    def index_of(self, colors) -> int:
        """Recover the index from a colouring of the cluster."""
        return sum(1 << k for k, v in enumerate(self.net) if colors[v] == self.special)

    def push_forward(self, h: Dict[int, int], center: int) -> "Family":
        return Family(self.n, center, self.sign, {h[u]: c for u, c in self.base.items()},
                      [h[v] for v in self.net], [h[v] for v in self.marker], self.capacity)


def _push_ordering(o: BFSOrdering, h: Dict[int, int]) -> BFSOrdering:
    order = [h[v] for v in o.order]
    return BFSOrdering(
        center=h[o.center], order=order, rank={v: i for i, v in enumerate(order)},
        dist={h[v]: d for v, d in o.dist.items()}, parent={h[v]: h[u] for v, u in o.parent.items()},
        children={h[v]: [h[w] for w in ws] for v, ws in o.children.items()},
    )


@dataclass
class PhiResult:
    coloring: Coloring
    values: Dict[int, Dict[int, Tuple[int, int]]]
    indices: Dict[int, Dict[int, int]]
    top: int


class Palette:
    """Families and ``chi`` for every level of a hierarchy.

    With ``canonical`` on, level-0 families (and BFS-orderings) are built at
    class representatives and pushed forward along the equivalence maps;
    above level 0 the net is pushed along the weak-equivalence maps.
    ``corona_inner`` and ``n_separation`` relax the level ``n > 0`` net for
    small desk radii.  ``capacity="realized"`` sizes a family by its net
    (``2^|N|``); ``"formula"`` also caps it by the threshold value.
    """

    def __init__(self, hier: Hierarchy, canonical: bool = True, corona_inner: int = LEVELN_CORONA,
                 n_separation: Optional[int] = None, capacity: str = "realized", equivalences=None):
        if capacity not in CAPACITY_POLICIES:
            raise PaletteError("capacity policy must be one of %s" % (CAPACITY_POLICIES,))
        self.hier = hier
        self.canonical = canonical
        self.corona_inner = corona_inner
        self.n_separation = n_separation
        self.capacity_policy = capacity
        self.graph = hier.graph
        self.chi: Dict[int, Dict[int, int]] = {n: chi(hier, n) for n in range(len(hier))}
        if canonical and equivalences is None:
            from .equivalence import Equivalences

            equivalences = Equivalences(hier, chi_values=self.chi)
        self.equivalences = equivalences
        self.orderings: Dict[int, Dict[int, BFSOrdering]] = {}
        self.families: Dict[int, Dict[int, Family]] = {}
        for n in range(len(hier)):
            self._build_level(n)

    def _capacity(self, n: int, x: int, net_size: int) -> int:
        cap = 1 << net_size
        if self.capacity_policy == "formula":
            lv = self.hier[n]
            a = len(self.hier.metric(n - 1).distances_from(x, lv.radius(x)))
            cap = min(cap, int(self.hier.eta(n, a)))
        return max(cap, 1)

    def _fresh(self, n: int, x: int) -> Family:
        lv = self.hier[n]
        if n == 0:
            ordering = self.orderings[0][x]
            tau = marker_geodesic(self.graph, lv.cluster[x], x)
            base = adapted_psi0_level0(self.graph, ordering, lv.sign[x], tau=tau)
            net = list(level0_net(self.graph, lv.cluster[x], x, lv.radius(x)))
            return Family(0, x, lv.sign[x], base, net, list(tau), self._capacity(0, x, len(net)))
        base = adapted_psi0_leveln(lv.cluster[x], x, lv.sign[x])
        net = list(leveln_net(self.hier, n, x, self.corona_inner, self.n_separation))
        return Family(n, x, lv.sign[x], base, net, [x], self._capacity(n, x, len(net)))

    def _build_level(self, n: int) -> None:
        lv = self.hier[n]
        self.orderings[n] = dict(lv.bfs)
        fams: Dict[int, Family] = {}
        if not self.canonical:
            for x in lv.order:
                fams[x] = self._fresh(n, x)
        elif n == 0:
            table = self.equivalences.representatives(0)
            for x in lv.order:
                rep = table.rep[x]
                if rep == x:
                    fams[x] = self._fresh(0, x)
                else:
                    h = table.h[x]
                    self.orderings[0][x] = _push_ordering(self.orderings[0][rep], h)
                    fams[x] = fams[rep].push_forward(h, x)
        else:
            table = self.equivalences.weak_representatives(n)
            for x in lv.order:
                rep = table.rep[x]
                fam = self._fresh(n, x) if rep == x else None
                if fam is None:
                    h = table.h[x]
                    src = fams[rep]
                    base = adapted_psi0_leveln(lv.cluster[x], x, lv.sign[x])
                    fam = Family(n, x, lv.sign[x], base, [h[v] for v in src.net], [x], src.capacity)
                fams[x] = fam
        self.families[n] = fams

    def family(self, n: int, x: int) -> Family:
        return self.families[n][x]

    def suggest_radius(self, n: int, index: int) -> int:
        """Rough radius at which a net could hold ``index``.

        Each extra net point needs about three more layers of corona at
        level 0 (one at higher levels with a relaxed separation).
        """
        lv = self.hier[n]
        need = max(index.bit_length(), 1)
        have = min((len(f.net) for f in self.families[n].values()), default=0)
        step = LEVEL0_NET_SEPARATION if n == 0 else 1
        return lv.r + step * max(need - have, 1)

    def _pick(self, n: int, x: int, value: Tuple[int, int]) -> Tuple[Dict[int, int], int]:
        fam = self.families[n][x]
        idx = pair_index(*value)
        if idx >= fam.capacity:
            raise CapacityError(n, x, idx, fam.capacity, self.suggest_radius(n, idx))
        return fam.coloring(idx), idx

    def build_phi(self, top: Optional[int] = None) -> PhiResult:
        """Assemble the ambient colouring from level ``top`` down."""
        top = len(self.hier) - 1 if top is None else top
        if not 0 <= top < len(self.hier):
            raise PaletteError("top level %r not built" % top)
        values: Dict[int, Dict[int, Tuple[int, int]]] = {}
        indices: Dict[int, Dict[int, int]] = {}
        values[top] = {x: (self.chi[top][x], 0) for x in self.hier[top].order}
        for n in range(top - 1, -1, -1):
            up = self.hier[n + 1]
            cur: Dict[int, Tuple[int, int]] = {}
            indices[n + 1] = {}
            for x in up.order:
                psi, idx = self._pick(n + 1, x, values[n + 1][x])
                indices[n + 1][x] = idx
                for u in up.cluster[x]:
                    cur[u] = (psi[u], self.chi[n][u])
            values[n] = cur
        colors: Dict[int, int] = {}
        indices[0] = {}
        for x in self.hier[0].order:
            psi, idx = self._pick(0, x, values[0][x])
            indices[0][x] = idx
            for u in self.hier[0].cluster[x]:
                colors[u] = psi[u]
        return PhiResult(Coloring(colors, self.graph.degree_bound), values, indices, top)
