"""Distinguishing numbers of small graphs and a constructive candidate colouring."""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from ..graph import Graph, MetricView, bfs_distances
from ..hierarchy import MINUS, bfs_ordering
from ..iso import Coloring, automorphisms
from ..palette import MARKER_LENGTH, adapted_psi0_level0


def _nontrivial(g: Graph, cap: int) -> List[Dict[int, int]]:
    return [f for f in automorphisms(g, None, cap) if any(f[v] != v for v in g.vertices())]


def _distinguishing_coloring(g: Graph, k: int, moves: List[Dict[int, int]]) -> Optional[List[int]]:
    """A colouring by ``k`` colours killing every automorphism in ``moves``, if any.

    Colours are introduced in increasing order so colour permutations are
    not revisited.  An automorphism dies once some coloured vertex and its
    coloured image disagree; a branch is cut when a live automorphism is
    fully checked on the coloured part and maps it into itself.
    """
    dist = bfs_distances(g, 0)
    order = sorted(g.vertices(), key=lambda v: (dist.get(v, g.n), v))
    pos = {v: i for i, v in enumerate(order)}
    # the step at which each automorphism becomes checkable on a vertex
    checks: List[List[Tuple[int, int]]] = [[] for _ in order]
    for a, f in enumerate(moves):
        for v in order:
            w = f[v]
            if v != w:
                checks[max(pos[v], pos[w])].append((a, v))
    colors: Dict[int, int] = {}
    alive = [True] * len(moves)

    def rec(i: int, used: int) -> bool:
        if i == len(order):
            return not any(alive)
        v = order[i]
        for c in range(min(used + 1, k)):
            colors[v] = c
            killed = []
            for a, u in checks[i]:
                if alive[a] and colors[u] != colors[moves[a][u]]:
                    alive[a] = False
                    killed.append(a)
            if rec(i + 1, max(used, c + 1)):
                return True
            for a in killed:
                alive[a] = True
        del colors[v]
        return False

    if rec(0, 0):
        return [colors[v] for v in g.vertices()]
    return None


def distinguishing_number(g: Graph, cap: int = 64) -> int:
    """Least number of colours admitting a colouring with no non-trivial
    colour-preserving automorphism."""
    moves = _nontrivial(g, cap)
    if not moves:
        return 1
    for k in range(2, g.n + 1):
        if _distinguishing_coloring(g, k, moves) is not None:
            return k
    return g.n


def distinguishing_coloring(g: Graph, k: Optional[int] = None, cap: int = 64) -> Optional[Coloring]:
    moves = _nontrivial(g, cap)
    k = distinguishing_number(g, cap) if k is None else k
    seq = [0] * g.n if not moves else _distinguishing_coloring(g, k, moves)
    return None if seq is None else Coloring.from_sequence(seq, k)


def line_graph(g: Graph) -> Graph:
    """Vertices are the edges of ``g``; two are adjacent when they share an endpoint."""
    edges = g.edges()
    if not edges:
        raise ValueError("line graph of an edgeless graph is empty")
    index = {e: i for i, e in enumerate(edges)}
    at: Dict[int, List[int]] = {v: [] for v in g.vertices()}
    for e in edges:
        at[e[0]].append(index[e])
        at[e[1]].append(index[e])
    out = set()
    for ids in at.values():
        for i in range(len(ids)):
            for j in range(i + 1, len(ids)):
                a, b = ids[i], ids[j]
                out.add((min(a, b), max(a, b)))
    return Graph(len(edges), sorted(out), 0, name="line(%s)" % (g.name or "graph"))


def distinguishing_index(g: Graph, cap: int = 64) -> int:
    """Distinguishing number of the line graph (edge colourings of ``g``)."""
    lg = line_graph(g)
    if lg.n > 1 and lg.degree_bound > 2 * (g.degree_bound - 1):
        raise AssertionError("line graph degree exceeds 2 (deg X - 1)")
    return distinguishing_number(lg, cap)


def bfs_candidate_coloring(g: Graph, root: Optional[int] = None) -> Tuple[Coloring, dict]:
    """Marker plus children-injective colouring of the whole graph by ``deg X`` colours.

    The marker is a geodesic of length 5 from the root when one exists,
    otherwise the longest available one (reported in the info dict).
    Whether the result is aperiodic has to be checked separately.
    """
    root = g.basepoint if root is None else root
    metric = MetricView(g)
    ordering = bfs_ordering(metric, g.vertices(), root)
    depth = max(ordering.dist.values())
    length = min(MARKER_LENGTH, depth)
    tau = _longest_geodesic(g, root, length)
    positions = [k for k in (0, 1, 2, 5) if k < len(tau)]
    zeros = [tau[k] for k in positions]
    if len(tau) == MARKER_LENGTH + 1:
        colors = adapted_psi0_level0(g, ordering, MINUS, tau=tau)
    else:
        colors = _children_colors(ordering, set(zeros), max(g.degree_bound, 2))
    info = {"root": root, "marker": tau, "truncated": len(tau) < MARKER_LENGTH + 1}
    return Coloring(colors, max(g.degree_bound, 2)), info


def _longest_geodesic(g: Graph, root: int, length: int) -> List[int]:
    from ..palette import marker_geodesic

    return marker_geodesic(g, g.vertices(), root, length) if length > 0 else [root]


def _children_colors(ordering, zeros, degree: int) -> Dict[int, int]:
    colors = {v: 0 for v in zeros}
    colors[ordering.center] = 0
    for u in ordering.order:
        c = 1
        for w in ordering.children[u]:
            if w in zeros:
                continue
            colors[w] = min(c, degree - 1)
            c += 1
    return colors
