"""Graph generators for test corpora.

Every generator returns a connected :class:`Graph` whose basepoint is a
natural centre.  Finite cuts of infinite graphs (grids, tree balls, Cayley
balls) record their clipped vertices as the frontier.
"""

from __future__ import annotations

import random
from collections import deque
from itertools import combinations
from typing import Dict, List, Tuple

from ..graph import Graph, GraphError


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)], 0, name="C%d" % n)


def path(n: int) -> Graph:
    if n < 1:
        raise GraphError("a path needs at least one vertex")
    return Graph(n, [(i, i + 1) for i in range(n - 1)], (n - 1) // 2, name="P%d" % n)


def complete(n: int) -> Graph:
    if n < 1:
        raise GraphError("K_n needs n >= 1")
    return Graph(n, list(combinations(range(n), 2)), 0, name="K%d" % n)


def complete_bipartite(a: int, b: int) -> Graph:
    if a < 1 or b < 1:
        raise GraphError("both sides must be nonempty")
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)], 0, name="K%d,%d" % (a, b))


def star(k: int) -> Graph:
    return complete_bipartite(1, k)


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner, 0, name="Petersen")


def grid(w: int, h: int) -> Graph:
    """``w`` by ``h`` patch of the square lattice; vertex ``r * w + c``."""
    if w < 1 or h < 1:
        raise GraphError("grid sides must be positive")
    edges = []
    for r in range(h):
        for c in range(w):
            v = r * w + c
            if c + 1 < w:
                edges.append((v, v + 1))
            if r + 1 < h:
                edges.append((v, v + w))
    border = [r * w + c for r in range(h) for c in range(w) if r in (0, h - 1) or c in (0, w - 1)]
    return Graph(w * h, edges, (h // 2) * w + w // 2, border, name="grid%dx%d" % (w, h))


def torus(w: int, h: int) -> Graph:
    if w < 3 or h < 3:
        raise GraphError("torus sides must be at least 3")
    edges = set()
    for r in range(h):
        for c in range(w):
            v = r * w + c
            for u in (r * w + (c + 1) % w, ((r + 1) % h) * w + c):
                edges.add((min(u, v), max(u, v)))
    return Graph(w * h, sorted(edges), 0, name="torus%dx%d" % (w, h))


def tree(arity: int, depth: int) -> Graph:
    """Rooted tree where every non-leaf has ``arity`` children."""
    if arity < 1 or depth < 0:
        raise GraphError("invalid tree parameters")
    edges = []
    level = [0]
    n = 1
    for _ in range(depth):
        nxt = []
        for v in level:
            for _ in range(arity):
                edges.append((v, n))
                nxt.append(n)
                n += 1
        level = nxt
    frontier = level if depth > 0 else []
    return Graph(n, edges, 0, frontier, name="tree%dx%d" % (arity, depth))


def tree_ball(degree: int, radius: int) -> Graph:
    """Ball of the given radius around a vertex of the ``degree``-regular tree."""
    if degree < 2 or radius < 0:
        raise GraphError("invalid tree ball parameters")
    edges = []
    level = [0]
    n = 1
    for depth in range(radius):
        nxt = []
        for v in level:
            for _ in range(degree if depth == 0 else degree - 1):
                edges.append((v, n))
                nxt.append(n)
                n += 1
        level = nxt
    frontier = level if radius > 0 else []
    return Graph(n, edges, 0, frontier, name="T%d(r=%d)" % (degree, radius))


_GROUP_GENERATORS = {
    "Z": [(1,), (-1,)],
    "Z2": [(1, 0), (-1, 0), (0, 1), (0, -1)],
}


def _reduce_free(word: Tuple[int, ...], g: int) -> Tuple[int, ...]:
    # letters 1, -1, 2, -2 for a, a^-1, b, b^-1
    if word and word[-1] == -g:
        return word[:-1]
    return word + (g,)


def cayley_ball(group: str, radius: int) -> Graph:
    """Ball of the given radius around the identity in a Cayley graph.

    ``group`` is one of ``"Z"``, ``"Z2"`` (standard generators) or ``"F2"``
    (free group on two generators).
    """
    key = group.replace("²", "2").replace("₂", "2").upper()
    if radius < 0:
        raise GraphError("negative radius")
    index: Dict[tuple, int] = {}
    elements: List[tuple] = []
    if key == "F2":
        start = ()
        gens = [1, -1, 2, -2]
        mul = _reduce_free
    elif key in _GROUP_GENERATORS:
        dim = len(_GROUP_GENERATORS[key][0])
        start = (0,) * dim
        gens = _GROUP_GENERATORS[key]
        mul = lambda w, s: tuple(a + b for a, b in zip(w, s))
    else:
        raise GraphError("unknown group preset %r" % group)
    index[start] = 0
    elements.append(start)
    dist = {start: 0}
    queue = deque([start])
    edges = set()
    while queue:
        w = queue.popleft()
        for s in gens:
            u = mul(w, s)
            if u not in dist:
                if dist[w] == radius:
                    continue
                dist[u] = dist[w] + 1
                index[u] = len(elements)
                elements.append(u)
                queue.append(u)
            a, b = index[w], index[u]
            edges.add((min(a, b), max(a, b)))
    frontier = [index[w] for w in elements if dist[w] == radius] if radius > 0 else []
    return Graph(len(elements), sorted(edges), 0, frontier, name="Cay(%s,%d)" % (key, radius))


def random_bounded_degree(n: int, max_degree: int, seed: int = 0, extra: float = 0.5) -> Graph:
    """Seeded random connected graph with degrees at most ``max_degree``.

    A random tree is grown first (each vertex attaches to an earlier one
    with spare capacity), then about ``extra * n`` further edges are tried.
    """
    if n < 1 or max_degree < 1 or (max_degree == 1 and n > 2):
        raise GraphError("cannot build a connected graph with these parameters")
    rng = random.Random(seed)
    deg = [0] * n
    edges = set()
    for v in range(1, n):
        open_ = [u for u in range(v) if deg[u] < max_degree]
        u = rng.choice(open_)
        edges.add((u, v))
        deg[u] += 1
        deg[v] += 1
    for _ in range(int(extra * n)):
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v or deg[u] >= max_degree or deg[v] >= max_degree:
            continue
        e = (min(u, v), max(u, v))
        if e in edges:
            continue
        edges.add(e)
        deg[u] += 1
        deg[v] += 1
    return Graph(n, sorted(edges), 0, name="rand(n=%d,deg<=%d,seed=%d)" % (n, max_degree, seed))


def generate(kind: str, **params) -> Graph:
    """Dispatch by generator name; see the module functions for parameters."""
    kind = kind.lower().replace("-", "_")
    table = {
        "cycle": lambda p: cycle(int(p["n"])),
        "path": lambda p: path(int(p["n"])),
        "complete": lambda p: complete(int(p["n"])),
        "complete_bipartite": lambda p: complete_bipartite(int(p["a"]), int(p["b"])),
        "petersen": lambda p: petersen(),
        "grid": lambda p: grid(int(p["w"]), int(p["h"])),
        "torus": lambda p: torus(int(p["w"]), int(p["h"])),
        "tree": lambda p: tree(int(p["arity"]), int(p["depth"])),
        "tree_ball": lambda p: tree_ball(int(p["degree"]), int(p["radius"])),
        "cayley_ball": lambda p: cayley_ball(str(p["group"]), int(p["radius"])),
        "random_bounded": lambda p: random_bounded_degree(int(p["n"]), int(p["max_degree"]), int(p.get("seed", 0))),
    }
    if kind not in table:
        raise GraphError("unknown generator %r" % kind)
    try:
        return table[kind](params)
    except KeyError as exc:
        raise GraphError("generator %r needs parameter %s" % (kind, exc)) from None
