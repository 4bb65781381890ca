"""Nested coarsening X_0 ⊃ X_1 ⊃ ... of a finite graph.

Level ``n`` is built inside the previous level ``(X_{n-1}, d_{n-1})``
(level ``-1`` is the ambient graph):

1. a greedy maximal separated set ``Y_n``, scanned by distance to the
   basepoint in the ambient metric and then by vertex id;
2. a sign split of ``Y_n`` into plus and minus points by a volume test;
3. plus centres thinned greedily at distance ``> 2 r s``;
4. minus centres kept when farther than ``r (2 s + 1)`` from every plus centre;
5. a zone for every point of ``X_{n-1}`` (plus or minus);
6. clusters: a point joins the nearest centres of its zone's sign (closed
   cluster) and the least of them in level order (cluster);
7. level edges between centres whose closed clusters touch;
8. a BFS-ordering of every cluster.

Clusters of levels further apart are obtained by composition.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from .constants import ParameterSchedule, big_pow, eta_from_exponent
from .graph import Graph, GraphError, MetricView, VertexSet, bfs_distances, induced_level_metric

PLUS = 1
MINUS = -1
INF = float("inf")

SPLIT_POLICIES = ("formula", "all-minus", "all-plus")
Y_SEPARATIONS = ("strict", "literal")


class HierarchyError(ValueError):
    pass


@dataclass
class BFSOrdering:
    """Breadth-first total order of one cluster around its centre.

    ``parent[u]`` is the least neighbour of ``u`` in the cluster, which sits
    one step closer to the centre; ``children`` inverts it.
    """

    center: int
    order: List[int]
    rank: Dict[int, int]
    dist: Dict[int, int]
    parent: Dict[int, int]
    children: Dict[int, List[int]]

    def __len__(self) -> int:
        return len(self.order)

    def __contains__(self, v) -> bool:
        return v in self.rank

    def precedes(self, u: int, v: int) -> bool:
        return self.rank[u] < self.rank[v]


def bfs_ordering(metric: MetricView, cluster: Iterable[int], center: int,
                 tiebreak: Optional[Callable[[int], object]] = None) -> BFSOrdering:
    """BFS-ordering of ``cluster`` (star-shaped around ``center``).

    Spheres are appended one at a time.  Inside a sphere, vertices are sorted
    by the rank of their least earlier neighbour, then by ``tiebreak``
    (default: the label).
    """
    members = set(cluster)
    if center not in members:
        raise HierarchyError("centre %r not in its cluster" % center)
    key = tiebreak or (lambda v: v)
    order = [center]
    rank = {center: 0}
    dist = {center: 0}
    parent: Dict[int, int] = {}
    frontier = [center]
    depth = 0
    while frontier:
        depth += 1
        best: Dict[int, int] = {}
        for u in frontier:
            for w in metric.neighbors(u):
                if w in members and w not in rank:
                    if w not in best or rank[u] < rank[best[w]]:
                        best[w] = u
        nxt = sorted(best, key=lambda w: (rank[best[w]], key(w)))
        for w in nxt:
            rank[w] = len(order)
            order.append(w)
            dist[w] = depth
            parent[w] = best[w]
        frontier = nxt
    if len(order) != len(members):
        missing = sorted(members - set(rank))
        raise HierarchyError("cluster of %r is not connected around its centre (e.g. %r)" % (center, missing[:3]))
    kids: Dict[int, List[int]] = {v: [] for v in order}
    for w in order[1:]:
        kids[parent[w]].append(w)
    return BFSOrdering(center, order, rank, dist, parent, kids)


def children(ordering: BFSOrdering, v: int) -> VertexSet:
    return VertexSet(ordering.children[v])


@dataclass
class LevelState:
    n: int
    r: int
    s: int
    members: VertexSet
    order: List[int]
    rank: Dict[int, int]
    sign: Dict[int, int]
    y: VertexSet
    y_sign: Dict[int, int]
    zone: Dict[int, int]
    dist_plus: Dict[int, float]
    dist_minus: Dict[int, float]
    cluster_of: Dict[int, int]
    closed_cluster: Dict[int, VertexSet]
    cluster: Dict[int, VertexSet]
    owners: Dict[int, FrozenSet[int]]
    edges: List[Tuple[int, int]]
    metric: MetricView
    bfs: Dict[int, BFSOrdering]
    split_policy: str = "formula"
    split_notes: Dict[int, str] = field(default_factory=dict)

    @property
    def r_minus(self) -> int:
        return self.r

    @property
    def r_plus(self) -> int:
        return self.r * self.s

    @property
    def R_minus(self) -> int:
        return 4 * self.r - 1

    @property
    def R_plus(self) -> int:
        return self.r * (2 * self.s + 3)

    def radius(self, x: int) -> int:
        """``r_n^+`` or ``r_n^-`` according to the sign of centre ``x``."""
        return self.r_plus if self.sign[x] == PLUS else self.r_minus

    def big_radius(self, x: int) -> int:
        return self.R_plus if self.sign[x] == PLUS else self.R_minus

    def plus(self) -> VertexSet:
        return VertexSet(x for x in self.members if self.sign[x] == PLUS)

    def minus(self) -> VertexSet:
        return VertexSet(x for x in self.members if self.sign[x] == MINUS)

    def degree(self) -> int:
        return self.metric.graph.degree_bound

    def __contains__(self, x) -> bool:
        return x in self.members


def _nearest_sources(metric: MetricView, sources: Sequence[int]) -> Tuple[Dict[int, int], Dict[int, FrozenSet[int]]]:
    """Distance to ``sources`` and the set of nearest sources, per label."""
    dist: Dict[int, int] = {}
    near: Dict[int, set] = {}
    queue = deque()
    for x in sources:
        dist[x] = 0
        near[x] = {x}
        queue.append(x)
    while queue:
        u = queue.popleft()
        for w in metric.neighbors(u):
            if w not in dist:
                dist[w] = dist[u] + 1
                near[w] = set(near[u])
                queue.append(w)
            elif dist[w] == dist[u] + 1:
                near[w] |= near[u]
    return dist, {v: frozenset(s) for v, s in near.items()}


class Hierarchy:
    """All levels built over one ambient graph.

    ``split`` is a policy name for every level or a per-level list.
    ``eta_override`` maps a level to a fixed threshold value (or a callable
    of the disk size) replacing the degree-based threshold.
    ``y_separation="strict"`` builds the first net ``(2 r_n + 1)``-separated;
    ``"literal"`` uses ``2 r_n``.
    """

    def __init__(self, graph: Graph, schedule: ParameterSchedule, levels: Optional[int] = None,
                 basepoint: Optional[int] = None, split: Union[str, Sequence[str]] = "formula",
                 eta_override: Optional[Dict[int, object]] = None, y_separation: str = "strict"):
        self.graph = graph
        self.schedule = schedule
        self.basepoint = graph.basepoint if basepoint is None else basepoint
        self.ambient = MetricView(graph)
        self.base_dist = bfs_distances(graph, self.basepoint)
        self.eta_override = dict(eta_override or {})
        if y_separation not in Y_SEPARATIONS:
            raise HierarchyError("unknown net separation %r" % y_separation)
        self.y_separation = y_separation
        count = len(schedule) if levels is None else levels
        if count > len(schedule):
            raise HierarchyError("schedule has only %d levels" % len(schedule))
        policies = [split] * count if isinstance(split, str) else list(split)
        if len(policies) < count or any(p not in SPLIT_POLICIES for p in policies):
            raise HierarchyError("split policy must be one of %s" % (SPLIT_POLICIES,))
        self.levels: List[LevelState] = []
        for n in range(count):
            self.levels.append(self._build(n, policies[n]))

    # -- access -----------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.levels)

    def __getitem__(self, n: int) -> LevelState:
        return self.levels[n]

    def metric(self, n: int) -> MetricView:
        """``d_n``; ``n = -1`` is the ambient metric."""
        return self.ambient if n == -1 else self.levels[n].metric

    def members(self, n: int) -> VertexSet:
        return VertexSet(self.graph.vertices()) if n == -1 else self.levels[n].members

    def level_key(self, v: int) -> Tuple[int, int]:
        return (self.base_dist[v], v)

    def degree(self, n: int) -> int:
        return self.graph.degree_bound if n == -1 else self.levels[n].degree()

    # -- the threshold --------------------------------------------------------------

    def eta_exponent(self, n: int, a: int) -> int:
        """Floor exponent of the degree-based threshold at level ``n``."""
        if n == 0:
            d = self.graph.degree_bound
            return (a - d ** 11 - 1) // d ** 3
        prev = self.levels[n - 1]
        d1 = self.degree(n - 1)
        d2 = self.degree(n - 2)
        offset = big_pow(d1, 11, "deg X_%d ^ 11" % (n - 1)) + 1
        divisor = big_pow(d2, prev.r ** 2 * prev.s, "threshold divisor at level %d" % n)
        return (a - offset) // divisor

    def eta(self, n: int, a: int) -> Union[int, Fraction]:
        if n in self.eta_override:
            ov = self.eta_override[n]
            return ov(a) if callable(ov) else ov
        return eta_from_exponent(self.eta_exponent(n, a))

    def _is_plus(self, n: int, y: int, prev: MetricView, r: int, s: int) -> bool:
        small = len(prev.distances_from(y, r * s))
        if n not in self.eta_override:
            e = self.eta_exponent(n, small)
            if e < 0:
                return False
            big = len(prev.distances_from(y, r * s * s))
            return (6 + big) ** 2 <= (1 << e)
        big = len(prev.distances_from(y, r * s * s))
        return self.eta(n, small) >= (6 + big) ** 2

    # -- construction -----------------------------------------------------------------

    def _build(self, n: int, policy: str) -> LevelState:
        rec = self.schedule.level(n)
        r, s = rec.r, rec.s
        prev = self.metric(n - 1)
        prev_members = list(prev.labels())
        key = self.level_key
        priority = sorted(prev_members, key=key)

        # (1) first net
        sep = 2 * r + 1 if self.y_separation == "strict" else 2 * r
        blocked = set()
        y_list = []
        for v in priority:
            if v in blocked:
                continue
            y_list.append(v)
            blocked.update(prev.distances_from(v, sep - 1))

        # (2) sign split
        notes = {}
        y_sign = {}
        for y in y_list:
            if policy == "all-minus":
                y_sign[y] = MINUS
            elif policy == "all-plus":
                y_sign[y] = PLUS
            else:
                y_sign[y] = PLUS if self._is_plus(n, y, prev, r, s) else MINUS
        if policy != "formula":
            notes[-1] = "split forced: %s" % policy

        # (3) plus centres
        plus = []
        covered = set()
        for y in y_list:
            if y_sign[y] != PLUS or y in covered:
                continue
            plus.append(y)
            covered.update(prev.distances_from(y, 2 * r * s))
        # (4) minus centres
        near_plus = set()
        if plus:
            near_plus = set(prev.penumbra(plus, r * (2 * s + 1)))
        minus = [y for y in y_list if y_sign[y] == MINUS and y not in near_plus]

        members = sorted(plus + minus, key=key)
        rank = {x: i for i, x in enumerate(members)}
        sign = {x: PLUS for x in plus}
        sign.update({x: MINUS for x in minus})

        # (5) zones and (6) clusters
        dp, near_p = _nearest_sources(prev, plus) if plus else ({}, {})
        dm, near_m = _nearest_sources(prev, minus) if minus else ({}, {})
        zone, cluster_of, owners = {}, {}, {}
        closed = {x: [] for x in members}
        dist_plus, dist_minus = {}, {}
        for z in prev_members:
            a = dp.get(z, INF)
            b = dm.get(z, INF)
            dist_plus[z], dist_minus[z] = a, b
            zz = PLUS if a - 2 * r * s <= b - r else MINUS
            zone[z] = zz
            own = near_p[z] if zz == PLUS else near_m[z]
            owners[z] = own
            cluster_of[z] = min(own, key=rank.__getitem__)
            for x in own:
                closed[x].append(z)
        clusters = {x: [] for x in members}
        for z, x in cluster_of.items():
            clusters[x].append(z)

        # (7) level edges
        edge_set = set()
        for z in prev_members:
            own = sorted(owners[z])
            for i, x in enumerate(own):
                for y in own[i + 1:]:
                    edge_set.add((min(x, y), max(x, y)))
            for w in prev.neighbors(z):
                if w < z:
                    continue
                for x in owners[z]:
                    for y in owners[w]:
                        if x != y:
                            edge_set.add((min(x, y), max(x, y)))
        edges = sorted(edge_set)
        try:
            metric = induced_level_metric(self.graph, members, edges)
        except GraphError as exc:
            raise HierarchyError("level %d graph is disconnected: %s" % (n, exc)) from exc

        # (8) BFS-orderings
        tie = (lambda v: v) if n == 0 else self.levels[n - 1].rank.__getitem__
        bfs = {x: bfs_ordering(prev, clusters[x], x, tie) for x in members}

        return LevelState(
            n=n, r=r, s=s, members=VertexSet(members), order=members, rank=rank, sign=sign,
            y=VertexSet(y_list), y_sign=y_sign, zone=zone, dist_plus=dist_plus, dist_minus=dist_minus,
            cluster_of=cluster_of, closed_cluster={x: VertexSet(c) for x, c in closed.items()},
            cluster={x: VertexSet(c) for x, c in clusters.items()}, owners=owners, edges=edges,
            metric=metric, bfs=bfs, split_policy=policy, split_notes=notes,
        )

    # -- composed clusters --------------------------------------------------------------

    def compose(self, n: int, m: int, x: int, closed: bool = False) -> VertexSet:
        """``C_{n,m}(x)`` (or its closed version) for ``-1 <= m < n``."""
        if not -1 <= m < n:
            raise HierarchyError("need -1 <= m < n")
        if x not in self.levels[n].members:
            raise HierarchyError("%r is not a level-%d centre" % (x, n))
        cur = {x}
        for k in range(n, m, -1):
            lv = self.levels[k]
            table = lv.closed_cluster if closed else lv.cluster
            nxt = set()
            for u in cur:
                nxt.update(table[u])
            cur = nxt
        return VertexSet(cur)

    def ambient_cluster(self, n: int, x: int, closed: bool = False) -> VertexSet:
        return self.compose(n, -1, x, closed)

    def projection(self, n: int, v: int) -> int:
        """Level-``n`` centre whose composed cluster contains ambient ``v``."""
        u = v
        for k in range(n + 1):
            u = self.levels[k].cluster_of[u]
        return u

    def to_dict(self) -> dict:
        out = {"basepoint": self.basepoint, "y_separation": self.y_separation, "levels": []}
        for lv in self.levels:
            out["levels"].append({
                "n": lv.n,
                "r": lv.r,
                "s": lv.s,
                "split": lv.split_policy,
                "members": list(lv.order),
                "sign": {str(x): lv.sign[x] for x in lv.order},
                "y": list(lv.y),
                "zone": {str(z): v for z, v in sorted(lv.zone.items())},
                "cluster_of": {str(z): v for z, v in sorted(lv.cluster_of.items())},
                "closed_cluster": {str(x): list(lv.closed_cluster[x]) for x in lv.order},
                "edges": [list(e) for e in lv.edges],
                "bfs": {str(x): lv.bfs[x].order for x in lv.order},
            })
        return out
