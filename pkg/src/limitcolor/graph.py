"""Simple graphs, the path metric, and separated nets.

Vertices are dense integers ``0..V-1``.  A graph may carry a *frontier*:
the vertices whose degree has been clipped by cutting a finite patch out of
a larger ambient graph.  Statements about infinite graphs are only checked
away from the frontier (see :func:`bulk`).
"""

from __future__ import annotations

from collections import deque
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple


class GraphError(ValueError):
    """Raised for malformed or disconnected graphs.

    ``components`` lists the connected components when disconnection was the
    problem, so callers can report them.
    """

    def __init__(self, message: str, components: Optional[List[List[int]]] = None):
        super().__init__(message)
        self.components = components or []


class VertexSet(tuple):
    """Sorted, duplicate-free tuple of vertex labels with O(1) membership."""

    def __new__(cls, items: Iterable[int] = ()):
        obj = super().__new__(cls, sorted(set(items)))
        obj._members = frozenset(obj)
        return obj

    def __contains__(self, v) -> bool:
        return v in self._members

    def as_set(self) -> frozenset:
        return self._members

    def __repr__(self) -> str:
        return "VertexSet(%s)" % list(self)


class Graph:
    """Immutable simple undirected connected graph on ``0..V-1``."""

    __slots__ = ("_adj", "basepoint", "frontier", "degree_bound", "name")

    def __init__(
        self,
        n_vertices: int,
        edges: Iterable[Tuple[int, int]],
        basepoint: int = 0,
        frontier: Iterable[int] = (),
        name: str = "",
        require_connected: bool = True,
    ):
        if n_vertices < 1:
            raise GraphError("a graph needs at least one vertex")
        nbrs: List[set] = [set() for _ in range(n_vertices)]
        for u, v in edges:
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise GraphError("edge (%d, %d) leaves the vertex range" % (u, v))
            if u == v:
                raise GraphError("self-loop at %d" % u)
            if v in nbrs[u]:
                raise GraphError("duplicate edge (%d, %d)" % (u, v))
            nbrs[u].add(v)
            nbrs[v].add(u)
        self._adj = tuple(tuple(sorted(s)) for s in nbrs)
        if not 0 <= basepoint < n_vertices:
            raise GraphError("basepoint %d is not a vertex" % basepoint)
        self.basepoint = basepoint
        self.frontier = frozenset(frontier)
        if any(not 0 <= v < n_vertices for v in self.frontier):
            raise GraphError("frontier vertex out of range")
        self.degree_bound = max(len(a) for a in self._adj)
        self.name = name
        if require_connected:
            comps = connected_components(self)
            if len(comps) > 1:
                raise GraphError("graph is disconnected (%d components)" % len(comps), comps)

    @property
    def n(self) -> int:
        return len(self._adj)

    def __len__(self) -> int:
        return len(self._adj)

    def vertices(self) -> range:
        return range(len(self._adj))

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    @property
    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        return self._adj

    def has_edge(self, u: int, v: int) -> bool:
        a = self._adj[u]
        b = self._adj[v]
        return v in a if len(a) <= len(b) else u in b

    def edges(self) -> List[Tuple[int, int]]:
        return [(u, v) for u, a in enumerate(self._adj) for v in a if u < v]

    def n_edges(self) -> int:
        return sum(len(a) for a in self._adj) // 2

    def with_basepoint(self, p: int) -> "Graph":
        return Graph(self.n, self.edges(), p, self.frontier, self.name, require_connected=False)

    def to_dict(self) -> dict:
        d = {"vertices": self.n, "edges": [list(e) for e in self.edges()], "basepoint": self.basepoint}
        if self.frontier:
            d["frontier"] = sorted(self.frontier)
        if self.name:
            d["name"] = self.name
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "Graph":
        return cls(
            int(d["vertices"]),
            [(int(u), int(v)) for u, v in d["edges"]],
            int(d.get("basepoint", 0)),
            d.get("frontier", ()),
            d.get("name", ""),
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self._adj == other._adj and self.basepoint == other.basepoint

    def __hash__(self) -> int:
        return hash((self._adj, self.basepoint))

    def __repr__(self) -> str:
        label = self.name or "Graph"
        return "<%s V=%d E=%d deg=%d>" % (label, self.n, self.n_edges(), self.degree_bound)


def connected_components(g: Graph, within: Optional[Iterable[int]] = None) -> List[List[int]]:
    allowed = None if within is None else set(within)
    seen = set()
    comps = []
    for s in (g.vertices() if allowed is None else sorted(allowed)):
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.neighbors(u):
                if w not in seen and (allowed is None or w in allowed):
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def induced_subgraph(g: Graph, vertices: Iterable[int], basepoint: Optional[int] = None,
                     require_connected: bool = True) -> Tuple[Graph, List[int]]:
    """Induced subgraph on ``vertices`` relabelled to ``0..k-1``.

    Returns the graph and the list mapping new labels back to old ones.
    """
    members = sorted(set(vertices))
    index = {v: i for i, v in enumerate(members)}
    edges = [(index[u], index[w]) for u in members for w in g.neighbors(u) if w in index and u < w]
    bp = index[basepoint] if basepoint is not None else 0
    return Graph(len(members), edges, bp, require_connected=require_connected), members


# -- distances -------------------------------------------------------------

def bfs_distances(g: Graph, x: int, radius: Optional[int] = None,
                  allowed: Optional[Callable[[int], bool]] = None) -> Dict[int, int]:
    """Distances from ``x``, optionally truncated at ``radius``.

    ``allowed`` restricts the walk to an induced subgraph.
    """
    dist = {x: 0}
    queue = deque([x])
    adj = g.adjacency
    while queue:
        u = queue.popleft()
        du = dist[u]
        if radius is not None and du >= radius:
            continue
        for w in adj[u]:
            if w not in dist and (allowed is None or allowed(w)):
                dist[w] = du + 1
                queue.append(w)
    return dist


def multi_source_distances(g: Graph, sources: Iterable[int], radius: Optional[int] = None) -> Dict[int, int]:
    dist = {}
    queue = deque()
    for s in sources:
        if s not in dist:
            dist[s] = 0
            queue.append(s)
    adj = g.adjacency
    while queue:
        u = queue.popleft()
        du = dist[u]
        if radius is not None and du >= radius:
            continue
        for w in adj[u]:
            if w not in dist:
                dist[w] = du + 1
                queue.append(w)
    return dist


def disk(g: Graph, x: int, r: int) -> VertexSet:
    if r < 0:
        raise ValueError("negative radius")
    return VertexSet(bfs_distances(g, x, r))


def sphere(g: Graph, x: int, r: int) -> VertexSet:
    return VertexSet(v for v, d in bfs_distances(g, x, r).items() if d == r)


def corona(g: Graph, x: int, r: int, s: int) -> VertexSet:
    """Vertices with ``r < d(x, v) <= s``."""
    if r > s:
        raise ValueError("inner radius exceeds outer radius")
    return VertexSet(v for v, d in bfs_distances(g, x, s).items() if d > r)


def closed_penumbra(g: Graph, q: Iterable[int], r: int) -> VertexSet:
    return VertexSet(multi_source_distances(g, q, r))


def eccentricity(g: Graph, x: int) -> int:
    return max(bfs_distances(g, x).values())


def bulk(g: Graph, margin: int) -> VertexSet:
    """Vertices whose ``margin``-disk does not reach the frontier.

    For such a vertex the disk of radius ``margin`` looks exactly as in the
    ambient graph the patch was cut from.
    """
    if not g.frontier:
        return VertexSet(g.vertices())
    if margin <= 0:
        return VertexSet(g.vertices())
    near = multi_source_distances(g, g.frontier, margin - 1)
    return VertexSet(v for v in g.vertices() if v not in near)


def frontier_distance(g: Graph) -> Dict[int, float]:
    if not g.frontier:
        return {v: float("inf") for v in g.vertices()}
    d = multi_source_distances(g, g.frontier)
    return {v: d.get(v, float("inf")) for v in g.vertices()}


# -- metric views ------------------------------------------------------------

class MetricView:
    """Path metric of ``graph`` with vertices named by ``members``.

    The ambient graph uses ``members = None`` (labels are the vertices
    themselves).  A level graph uses a graph on local indices together with
    the ambient label of each local vertex.
    """

    def __init__(self, graph: Graph, members: Optional[Sequence[int]] = None):
        self.graph = graph
        if members is None:
            self.members = None
            self._index = None
        else:
            if len(members) != graph.n:
                raise ValueError("members must name every vertex")
            self.members = tuple(members)
            self._index = {v: i for i, v in enumerate(self.members)}
            if len(self._index) != len(self.members):
                raise ValueError("duplicate member labels")

    def labels(self) -> Sequence[int]:
        return self.graph.vertices() if self.members is None else self.members

    def __contains__(self, v) -> bool:
        return (0 <= v < self.graph.n) if self._index is None else v in self._index

    def __len__(self) -> int:
        return self.graph.n

    def local(self, v: int) -> int:
        return v if self._index is None else self._index[v]

    def label(self, i: int) -> int:
        return i if self.members is None else self.members[i]

    def neighbors(self, v: int) -> List[int]:
        return [self.label(w) for w in self.graph.neighbors(self.local(v))]

    def degree(self, v: int) -> int:
        return self.graph.degree(self.local(v))

    def distances_from(self, v: int, radius: Optional[int] = None) -> Dict[int, int]:
        d = bfs_distances(self.graph, self.local(v), radius)
        if self.members is None:
            return d
        return {self.members[i]: k for i, k in d.items()}

    def dist(self, u: int, v: int) -> int:
        if u == v:
            return 0
        target = self.local(v)
        for w, k in bfs_distances(self.graph, self.local(u)).items():
            if w == target:
                return k
        raise GraphError("vertices are in different components")

    def ball(self, v: int, r: int) -> VertexSet:
        return VertexSet(self.distances_from(v, r))

    def penumbra(self, q: Iterable[int], r: int) -> VertexSet:
        d = multi_source_distances(self.graph, [self.local(v) for v in q], r)
        return VertexSet(self.label(i) for i in d)

    def __repr__(self) -> str:
        return "MetricView(V=%d)" % self.graph.n


def as_metric(m) -> MetricView:
    return m if isinstance(m, MetricView) else MetricView(m)


def maximal_separated_set(m, k: int, priority: Optional[Iterable[int]] = None,
                          candidates: Optional[Iterable[int]] = None) -> VertexSet:
    """Greedy maximal ``k``-separated subset.

    Vertices are scanned in ``priority`` order (default: by label) and kept
    when every previously kept vertex is at distance at least ``k``.  With
    ``candidates`` only those vertices are eligible; the result is then
    maximal among them.
    """
    if k < 1:
        raise ValueError("separation must be at least 1")
    m = as_metric(m)
    order = list(priority) if priority is not None else sorted(m.labels())
    eligible = None if candidates is None else set(candidates)
    blocked = set()
    chosen = []
    for v in order:
        if v in blocked or (eligible is not None and v not in eligible):
            continue
        chosen.append(v)
        blocked.update(m.distances_from(v, k - 1))
    return VertexSet(chosen)


def is_separated(m, a: Iterable[int], k: int) -> bool:
    m = as_metric(m)
    members = set(a)
    if k <= 1:
        return True
    for v in members:
        for w in m.distances_from(v, k - 1):
            if w != v and w in members:
                return False
    return True


def separation_witness(m, a: Iterable[int], k: int) -> Optional[Tuple[int, int, int]]:
    """First pair of ``a`` closer than ``k``, as ``(u, v, d)``."""
    m = as_metric(m)
    members = set(a)
    for v in sorted(members):
        for w, d in sorted(m.distances_from(v, k - 1).items()):
            if w != v and w in members:
                return (v, w, d)
    return None


def relative_density_constant(m, a: Iterable[int]) -> int:
    m = as_metric(m)
    sources = [m.local(v) for v in a]
    if not sources:
        raise ValueError("empty net")
    d = multi_source_distances(m.graph, sources)
    if len(d) < m.graph.n:
        raise GraphError("net does not reach every component")
    return max(d.values())


def induced_level_metric(g: Graph, subset: Iterable[int], edges: Iterable[Tuple[int, int]]) -> MetricView:
    """Metric of the graph ``(subset, edges)``; labels stay ambient."""
    members = sorted(set(subset))
    index = {v: i for i, v in enumerate(members)}
    local_edges = set()
    for u, v in edges:
        if u not in index or v not in index:
            raise GraphError("edge (%d, %d) leaves the subset" % (u, v))
        if u != v:
            a, b = index[u], index[v]
            local_edges.add((min(a, b), max(a, b)))
    try:
        lg = Graph(len(members), sorted(local_edges), 0)
    except GraphError as exc:
        comps = [[members[i] for i in c] for c in exc.components]
        raise GraphError(str(exc), comps) from None
    return MetricView(lg, members)


def iter_pairs_within(m, vertices: Iterable[int], radius: int) -> Iterator[Tuple[int, int, int]]:
    """Pairs ``u < v`` from ``vertices`` with ``d(u, v) <= radius``."""
    m = as_metric(m)
    vs = set(vertices)
    for u in sorted(vs):
        for w, d in m.distances_from(u, radius).items():
            if w in vs and u < w:
                yield u, w, d
