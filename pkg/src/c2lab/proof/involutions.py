"""Swaps around a 2-valent vertex and around the control vertex."""

from __future__ import annotations

from collections.abc import Iterable, Mapping

from ..graph import Graph
from .boundary import BoundaryConfig, EdgeBipartition, LemmaViolation, _bits

__all__ = ["control_swap", "control_vertex", "control_data", "two_valent_swap"]


def two_valent_swap(h: Graph, b: EdgeBipartition, c: int) -> EdgeBipartition:
    """Exchange the parts of the two edges at the 2-valent vertex ``c``."""
    inc = h.incident[c]
    if h.degrees[c] != 2 or len(inc) != 2:
        raise ValueError(f"vertex {c} is not 2-valent")
    e1, e2 = inc
    in_tree = [(b.tree >> e) & 1 for e in inc]
    if in_tree[0] == in_tree[1]:
        raise LemmaViolation("swap", f"both edges at {c} lie in the same part")
    flip = (1 << e1) | (1 << e2)
    return EdgeBipartition.from_masks(h, b.tree ^ flip, b.forest ^ flip)


def _tree_components(adj: Mapping[int, Iterable[int]], y: int) -> list[set]:
    """Components of the tree minus ``y``, one per neighbour of ``y``."""
    comps = []
    for start in adj[y]:
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for z in adj[x]:
                if z != y and z not in seen:
                    seen.add(z)
                    stack.append(z)
        comps.append(seen)
    return comps


def _control_ok(adj, p1: frozenset, x, y) -> bool:
    deg = len(adj[y])
    if not ((y in p1 and deg == 2) or (y not in p1 and deg == 3)):
        return False
    comps = _tree_components(adj, y)
    counts = [len(c & p1) for c in comps]
    if sorted(counts) != ([1, 2] if y in p1 else [1, 1, 2]):
        return False
    return x == y or any(x in c and k == 1 for c, k in zip(comps, counts))


def control_vertex(tree: Mapping[int, Iterable[int]], p1: Iterable[int], x) -> int:
    """The unique control vertex of a tree (given as adjacency lists) with
    respect to the four marked vertices ``p1`` and the outsider ``x``.

    Every vertex is scanned; anything but exactly one hit is an error.
    """
    adj = {k: set(v) for k, v in tree.items()}
    p1 = frozenset(p1)
    if x not in p1 or len(p1) != 4:
        raise ValueError("p1 must have four vertices including the outsider")
    for y, nb in adj.items():
        if len(nb) > (2 if y in p1 else 3):
            raise ValueError(f"vertex {y} has degree {len(nb)} in the tree, above the allowed bound")
    hits = [y for y in adj if _control_ok(adj, p1, x, y)]
    if len(hits) != 1:
        raise LemmaViolation("controlV", f"{len(hits)} control vertices {sorted(hits)}")
    return hits[0]


def control_data(cfg: BoundaryConfig, tau: EdgeBipartition):
    """``(p1, outsider, tree adjacency of the p1 side, side of p1)`` for a
    bipartition in one of the trio-plus-one sets."""
    marked = {x: cfg.marked[x] for x in "abcdef"}
    sides = {s: {x for x, v in marked.items() if tau.side[v] == s} for s in (0, 1)}
    big = 0 if len(sides[0]) == 4 else 1
    letters = sides[big]
    if len(letters) != 4:
        raise ValueError("bipartition does not split the marked vertices 4 + 2")
    if set("abc") <= letters:
        (out,) = letters - set("abc")
    elif set("def") <= letters:
        (out,) = letters - set("def")
    else:
        raise ValueError("the four-part is not a trio plus one")
    h = cfg.H
    adj: dict[int, set] = {x: set() for x, s in enumerate(tau.side) if s == big}
    for e in _bits(tau.forest):
        u, v = h.edges[e]
        if tau.side[u] == big:
            adj[u].add(v)
            adj[v].add(u)
    p1 = frozenset(marked[x] for x in letters)
    return p1, marked[out], adj, big


def control_swap(cfg: BoundaryConfig, tau: EdgeBipartition) -> EdgeBipartition:
    """Exchange the tree edge at the control vertex with the matching forest
    edge at it."""
    h = cfg.H
    p1, x, adj, big = control_data(cfg, tau)
    y = control_vertex(adj, p1, x)
    tree_at_y = [e for e in h.incident[y] if (tau.tree >> e) & 1]
    if len(tree_at_y) != 1:
        raise LemmaViolation("A vert swap", f"control vertex {y} has {len(tree_at_y)} tree edges")
    eps = tree_at_y[0]
    u, v = h.edges[eps]
    z = v if u == y else u
    comps = _tree_components(adj, y)
    if tau.side[z] != big:
        target = [c for c in comps if len(c & p1) == 2]
    else:
        target = [c for c in comps if z in c]
    if len(target) != 1:
        raise LemmaViolation("A vert swap", f"no unique component to reconnect at {y}")
    eta = next(e for e in h.incident[y]
               if (tau.forest >> e) & 1 and (set(h.edges[e]) - {y}) & target[0])
    flip = (1 << eps) | (1 << eta)
    return EdgeBipartition.from_masks(h, tau.tree ^ flip, tau.forest ^ flip)
