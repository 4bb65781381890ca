"""Pointed colored isomorphism search and automorphism enumeration.

The search maps vertices in BFS order from the basepoint.  Each vertex's
image must be a neighbour of its BFS parent's image, and candidates are
pruned by a colour-refinement class computed jointly on both sides (it
starts from distance to the basepoint, degree and colour).  Isomorphisms
of connected graphs are isometries, so this pruning is exact.
"""

from __future__ import annotations

from collections import Counter, deque
from typing import Callable, Dict, Hashable, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .graph import Graph, bfs_distances, induced_subgraph


class SearchTooLarge(RuntimeError):
    pass


class Coloring:
    """Total map from a vertex set to colours ``0..palette_bound-1``."""

    __slots__ = ("colors", "palette_bound")

    def __init__(self, colors: Mapping[int, int], palette_bound: Optional[int] = None):
        self.colors = dict(colors)
        for v, c in self.colors.items():
            if not isinstance(c, int) or c < 0:
                raise ValueError("colour of %r must be a natural number, got %r" % (v, c))
        top = max(self.colors.values(), default=-1) + 1
        if palette_bound is None:
            palette_bound = top
        if top > palette_bound:
            raise ValueError("colour %d outside palette of size %d" % (top - 1, palette_bound))
        self.palette_bound = palette_bound

    @classmethod
    def from_sequence(cls, seq: Sequence[int], palette_bound: Optional[int] = None) -> "Coloring":
        return cls(dict(enumerate(seq)), palette_bound)

    @property
    def domain(self):
        from .graph import VertexSet
        return VertexSet(self.colors)

    def __getitem__(self, v: int) -> int:
        return self.colors[v]

    def get(self, v: int, default=None):
        return self.colors.get(v, default)

    def __contains__(self, v) -> bool:
        return v in self.colors

    def __len__(self) -> int:
        return len(self.colors)

    def items(self):
        return self.colors.items()

    def restrict(self, vertices: Iterable[int]) -> "Coloring":
        return Coloring({v: self.colors[v] for v in vertices}, self.palette_bound)

    def used(self) -> int:
        return len(set(self.colors.values()))

    def __eq__(self, other) -> bool:
        return isinstance(other, Coloring) and self.colors == other.colors

    def __repr__(self) -> str:
        return "Coloring(|dom|=%d, palette=%d)" % (len(self.colors), self.palette_bound)


class PointedPattern:
    """A connected graph with a basepoint and optional vertex labels.

    ``colors`` holds one hashable label per local vertex (plain colours, or
    tuples when the caller wants to match several attributes at once).
    ``names`` maps local vertices back to the caller's labels.  Each entry
    of ``relations`` is an extra symmetric edge set on local vertices that an
    isomorphism must preserve in both directions.
    """

    __slots__ = ("graph", "basepoint", "colors", "names", "relations")

    def __init__(self, graph: Graph, basepoint: int, colors: Optional[Sequence[Hashable]] = None,
                 names: Optional[Sequence[int]] = None, relations: Sequence[Iterable[Tuple[int, int]]] = ()):
        if not 0 <= basepoint < graph.n:
            raise ValueError("basepoint is not a vertex of the pattern")
        if colors is not None and len(colors) != graph.n:
            raise ValueError("colouring must cover the pattern")
        self.graph = graph
        self.basepoint = basepoint
        self.colors = None if colors is None else tuple(colors)
        self.names = tuple(names) if names is not None else tuple(range(graph.n))
        rels = []
        for rel in relations:
            adj = [set() for _ in range(graph.n)]
            for u, v in rel:
                adj[u].add(v)
                adj[v].add(u)
            rels.append(tuple(frozenset(s) for s in adj))
        self.relations = tuple(rels)

    @classmethod
    def from_vertices(cls, g: Graph, vertices: Iterable[int], basepoint: int,
                      label: Optional[Callable[[int], Hashable]] = None,
                      relations: Sequence[Iterable[Tuple[int, int]]] = ()) -> "PointedPattern":
        """Induced pattern on ``vertices`` with ambient names kept.

        ``relations`` are given in ambient labels; pairs leaving the vertex
        set are dropped.
        """
        sub, members = induced_subgraph(g, vertices, basepoint)
        index = {v: i for i, v in enumerate(members)}
        colors = None if label is None else [label(v) for v in members]
        rels = [[(index[u], index[v]) for u, v in rel if u in index and v in index] for rel in relations]
        return cls(sub, index[basepoint], colors, members, rels)

    @classmethod
    def disk(cls, g: Graph, x: int, r: int, coloring=None) -> "PointedPattern":
        ball = bfs_distances(g, x, r)
        label = None
        if coloring is not None:
            label = coloring.__getitem__
        return cls.from_vertices(g, ball, x, label)

    def __len__(self) -> int:
        return self.graph.n

    def __repr__(self) -> str:
        return "PointedPattern(V=%d, base=%r)" % (self.graph.n, self.names[self.basepoint])


def _refine(patterns: Sequence[PointedPattern]) -> List[List[int]]:
    """Joint colour refinement; returns a class id per local vertex per pattern."""
    labels = []
    for pat in patterns:
        dist = bfs_distances(pat.graph, pat.basepoint)
        if len(dist) != pat.graph.n:
            raise ValueError("pattern graph must be connected")
        lab = []
        for v in pat.graph.vertices():
            rel_deg = tuple(len(r[v]) for r in pat.relations)
            col = None if pat.colors is None else pat.colors[v]
            lab.append((dist[v], pat.graph.degree(v), rel_deg, col))
        labels.append(lab)
    classes = _compress(labels)
    n_classes = len({c for cl in classes for c in cl})
    while True:
        nxt = []
        for pat, cl in zip(patterns, classes):
            row = []
            for v in pat.graph.vertices():
                around = tuple(sorted(cl[w] for w in pat.graph.neighbors(v)))
                rels = tuple(tuple(sorted(cl[w] for w in r[v])) for r in pat.relations)
                row.append((cl[v], around, rels))
            nxt.append(row)
        nxt = _compress(nxt)
        count = len({c for cl in nxt for c in cl})
        classes = nxt
        if count == n_classes:
            return classes
        n_classes = count


def _compress(rows: List[List[Hashable]]) -> List[List[int]]:
    ids: Dict[Hashable, int] = {}
    return [[ids.setdefault(k, len(ids)) for k in row] for row in rows]


def _bfs_order(g: Graph, root: int) -> Tuple[List[int], List[int]]:
    order = [root]
    parent = [-1] * g.n
    seen = {root}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if w not in seen:
                seen.add(w)
                parent[w] = u
                order.append(w)
                queue.append(w)
    return order, parent


def iter_pointed_isomorphisms(a: PointedPattern, b: PointedPattern, limit: Optional[int] = None,
                              node_budget: Optional[int] = None) -> Iterator[Dict[int, int]]:
    """Yield every pointed isomorphism ``a -> b`` as a dict on names.

    Colours (when present on either side) and extra relations must match.
    ``node_budget`` bounds the number of search nodes; exceeding it raises
    :class:`SearchTooLarge`.
    """
    ga, gb = a.graph, b.graph
    if ga.n != gb.n or ga.n_edges() != gb.n_edges() or len(a.relations) != len(b.relations):
        return
    if (a.colors is None) != (b.colors is None):
        return
    ca, cb = _refine([a, b])
    if ca[a.basepoint] != cb[b.basepoint] or Counter(ca) != Counter(cb):
        return
    order, parent = _bfs_order(ga, a.basepoint)
    pos = {v: i for i, v in enumerate(order)}
    # earlier neighbours of each vertex, in ga and in each relation
    earlier = [[w for w in ga.neighbors(v) if pos[w] < pos[v]] for v in order]
    rel_earlier = [[[w for w in rel[v] if pos[w] < pos[v]] for v in order] for rel in a.relations]
    adj_b = [frozenset(gb.neighbors(v)) for v in gb.vertices()]

    n = ga.n
    f = [-1] * n
    used = [False] * n
    found = 0
    nodes = 0

    def candidates(i: int) -> List[int]:
        v = order[i]
        if i == 0:
            return [b.basepoint]
        pool = gb.neighbors(f[parent[v]])
        out = [c for c in reversed(pool) if not used[c] and cb[c] == ca[v]]
        # try the same-named vertex first so identical patterns give the identity
        same = [c for c in out if b.names[c] == a.names[v]]
        if same:
            out.remove(same[0])
            out.append(same[0])
        return out

    def consistent(i: int, c: int) -> bool:
        v = order[i]
        prev = earlier[i]
        nb = adj_b[c]
        for w in prev:
            if f[w] not in nb:
                return False
        if sum(1 for y in nb if used[y]) != len(prev):
            return False
        for k, rel in enumerate(b.relations):
            rprev = rel_earlier[k][i]
            rc = rel[c]
            for w in rprev:
                if f[w] not in rc:
                    return False
            if sum(1 for y in rc if used[y]) != len(rprev):
                return False
        return True

    stack = [candidates(0)]
    while stack:
        i = len(stack) - 1
        cands = stack[-1]
        if f[order[i]] >= 0:
            used[f[order[i]]] = False
            f[order[i]] = -1
        placed = False
        while cands:
            c = cands.pop()
            nodes += 1
            if node_budget is not None and nodes > node_budget:
                raise SearchTooLarge("isomorphism search exceeded %d nodes" % node_budget)
            if consistent(i, c):
                f[order[i]] = c
                used[c] = True
                placed = True
                break
        if not placed:
            stack.pop()
            continue
        if i + 1 == n:
            yield {a.names[v]: b.names[f[v]] for v in range(n)}
            found += 1
            if limit is not None and found >= limit:
                return
            continue
        stack.append(candidates(i + 1))


def find_pointed_isomorphism(a: PointedPattern, b: PointedPattern,
                             accept: Optional[Callable[[Dict[int, int]], bool]] = None,
                             node_budget: Optional[int] = None) -> Optional[Dict[int, int]]:
    """First pointed isomorphism ``a -> b`` (passing ``accept`` if given)."""
    for f in iter_pointed_isomorphisms(a, b, node_budget=node_budget):
        if accept is None or accept(f):
            return f
    return None


def is_isometry(g: Graph, f: Mapping[int, int], h: Optional[Graph] = None) -> bool:
    """Check that ``f`` preserves path distances (within ``g`` and ``h``)."""
    h = g if h is None else h
    dom = list(f)
    for u in dom:
        du = bfs_distances(g, u)
        dv = bfs_distances(h, f[u])
        for w in dom:
            if du.get(w) != dv.get(f[w]):
                return False
    return True


def _color_seq(g: Graph, c) -> Optional[List[int]]:
    if c is None:
        return None
    if isinstance(c, Coloring):
        return [c[v] for v in g.vertices()]
    return list(c)


def automorphisms(g: Graph, c=None, cap: int = 64) -> List[Dict[int, int]]:
    """All colour-preserving automorphisms of a small graph."""
    if g.n > cap:
        raise SearchTooLarge("graph too large for exhaustive automorphism search (%d > %d)" % (g.n, cap))
    colors = _color_seq(g, c)
    root = 0
    base = PointedPattern(g, root, colors)
    ecc = [max(bfs_distances(g, v).values()) for v in g.vertices()]

    def key(v):
        return (g.degree(v), None if colors is None else colors[v], ecc[v])

    out = []
    for v in g.vertices():
        if key(v) != key(root):
            continue
        target = PointedPattern(g, v, colors)
        out.extend(iter_pointed_isomorphisms(base, target))
    out.sort(key=lambda f: [f[i] for i in range(g.n)])
    return out


def is_aperiodic(g: Graph, c=None, cap: int = 64) -> bool:
    colors = _color_seq(g, c)
    base = PointedPattern(g, 0, colors)
    ecc = [max(bfs_distances(g, v).values()) for v in g.vertices()]
    if g.n > cap:
        raise SearchTooLarge("graph too large for exhaustive automorphism search (%d > %d)" % (g.n, cap))
    for v in g.vertices():
        if v == 0 or g.degree(v) != g.degree(0) or ecc[v] != ecc[0]:
            continue
        if colors is not None and colors[v] != colors[0]:
            continue
        if find_pointed_isomorphism(base, PointedPattern(g, v, colors)) is not None:
            return False
    # the only automorphisms fix vertex 0; look for a non-identity one
    for f in iter_pointed_isomorphisms(base, base):
        if any(f[u] != u for u in f):
            return False
    return True
