"""Compatible cycles, cycle swaps and the swap graphs built from them."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field

from ..graph import Graph
from .boundary import BoundaryConfig, EdgeBipartition, LemmaViolation, _bits, union_members

__all__ = [
    "CompatibleCycle",
    "SwapGraph",
    "build_swap_graph",
    "compatible_cycles",
    "crossing_edges",
    "cycle_swap",
    "ell_identity",
]


@dataclass(frozen=True)
class CompatibleCycle:
    edges: tuple[int, ...]
    vertices: tuple[int, ...]
    tree_edge: int


def _adjacency(h: Graph, mask: int) -> dict[int, list[tuple[int, int]]]:
    adj: dict[int, list[tuple[int, int]]] = {x: [] for x in range(h.n)}
    for e in _bits(mask):
        u, v = h.edges[e]
        adj[u].append((v, e))
        adj[v].append((u, e))
    return adj


def _path(adj, src: int, dst: int) -> tuple[list[int], list[int]] | None:
    """Vertices and edges of the path from src to dst in a forest."""
    prev = {src: (None, None)}
    stack = [src]
    while stack:
        x = stack.pop()
        if x == dst:
            break
        for y, e in adj[x]:
            if y not in prev:
                prev[y] = (x, e)
                stack.append(y)
    if dst not in prev:
        return None
    verts, edges = [dst], []
    x = dst
    while prev[x][0] is not None:
        x, e = prev[x]
        verts.append(x)
        edges.append(e)
    return verts[::-1], edges[::-1]


def internal_tree_edges(h: Graph, b: EdgeBipartition) -> list[int]:
    return [e for e in _bits(b.tree) if b.side[h.edges[e][0]] == b.side[h.edges[e][1]]]


def compatible_cycles(h: Graph, b: EdgeBipartition) -> list[CompatibleCycle]:
    """Compatible cycles of a valid edge partition.

    Each tree-part edge closing a cycle with the 2-forest yields the unique
    cycle of forest-plus-edge; the result is checked against the definition
    and its size against the count of tree-part edges internal to a class.
    """
    fadj = _adjacency(h, b.forest)
    out = []
    for f in _bits(b.tree):
        u, v = h.edges[f]
        found = _path(fadj, u, v)
        if found is None:
            continue
        verts, path = found
        edges = tuple(path + [f])
        if len({b.side[x] for x in verts}) != 1 or sum((b.tree >> e) & 1 for e in edges) != 1:
            raise LemmaViolation("count compatible", f"cycle {edges} is not compatible")
        out.append(CompatibleCycle(edges, tuple(verts), f))
    expected = len(internal_tree_edges(h, b))
    if len(out) != expected:
        raise LemmaViolation("count compatible",
                             f"{len(out)} cycles found but {expected} internal tree edges")
    return out


def ell_identity(h: Graph, b: EdgeBipartition) -> tuple[int, int, int]:
    """Check the degree identity for both vertex classes; returns
    ``(e1, e2, ell)``."""
    classes = b.vertex_classes
    ell = sum(1 for u, v in h.edges if b.side[u] != b.side[v])
    e = [0, 0]
    for f in internal_tree_edges(h, b):
        e[b.side[h.edges[f][0]]] += 1
    for i, vi in enumerate(classes):
        lhs = sum(h.degrees[x] for x in vi) - 2 * (len(vi) - 1) - 2 * e[i]
        if lhs != ell:
            raise LemmaViolation("odd and odd", f"class {i}: degree identity gives {lhs}, ell = {ell}")
    if h.n - 1 != e[0] + e[1] + ell:
        raise LemmaViolation("odd and odd", "tree edge count mismatch")
    return e[0], e[1], ell


def _tree_split(h: Graph, b: EdgeBipartition, f: int) -> list[int]:
    """Side (0 or 1) of each vertex in the spanning tree minus ``f``."""
    adj = _adjacency(h, b.tree & ~(1 << f))
    side = [1] * h.n
    start = h.edges[f][0]
    side[start] = 0
    stack = [start]
    while stack:
        x = stack.pop()
        for y, _ in adj[x]:
            if side[y]:
                side[y] = 0
                stack.append(y)
    return side


def crossing_edges(h: Graph, b: EdgeBipartition, c: CompatibleCycle) -> list[int]:
    """Edges of ``c`` joining the two halves of the tree split at ``c.tree_edge``."""
    split = _tree_split(h, b, c.tree_edge)
    return [e for e in c.edges if split[h.edges[e][0]] != split[h.edges[e][1]]]


def cycle_swap(h: Graph, b: EdgeBipartition, c: CompatibleCycle, f_prime: int) -> EdgeBipartition:
    """Move ``c.tree_edge`` into the 2-forest and ``f_prime`` into the tree."""
    f = c.tree_edge
    if f_prime == f or f_prime not in crossing_edges(h, b, c):
        raise ValueError(f"edge {f_prime} does not cross the split at {f}")
    flip = (1 << f) | (1 << f_prime)
    out = EdgeBipartition.from_masks(h, b.tree ^ flip, b.forest ^ flip)
    if out.side != b.side:
        raise LemmaViolation("cycle swap", "vertex partition changed")
    return out


@dataclass
class SwapGraph:
    vertices: list[EdgeBipartition]
    terms: list[str]
    adjacency: dict[int, set[int]] = field(default_factory=dict)
    swaps: dict[int, int] = field(default_factory=dict)

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    @property
    def order(self) -> int:
        return len(self.vertices)

    def odd_degree_violations(self) -> list[int]:
        return [i for i in range(self.order) if self.degree(i) % 2 == 0]


def build_swap_graph(cfg: BoundaryConfig, terms: Iterable[str], strict: bool = True) -> SwapGraph:
    """Swap graph on the union of the sets named by ``terms``.

    Edges are all cycle-swap relations.  With ``strict`` an even-degree
    vertex, an asymmetric edge, a swap leaving the union or two swaps giving
    the same neighbour raise :class:`LemmaViolation`.
    """
    h = cfg.H
    members = union_members(cfg, terms)
    verts = [b for b, _ in members]
    index = {b.tree: i for i, b in enumerate(verts)}
    g = SwapGraph(verts, [t for _, t in members])
    for i, b in enumerate(verts):
        nbrs: set[int] = set()
        n_swaps = 0
        for c in compatible_cycles(h, b):
            crossing = crossing_edges(h, b, c)
            if len(crossing) < 2 or len(crossing) % 2:
                raise LemmaViolation("cycle swap", f"{len(crossing)} crossing edges on cycle {c.edges}")
            for fp in crossing:
                if fp == c.tree_edge:
                    continue
                other = cycle_swap(h, b, c, fp)
                back = next(d for d in compatible_cycles(h, other) if d.tree_edge == fp)
                if cycle_swap(h, other, back, c.tree_edge).tree != b.tree:
                    raise LemmaViolation("do cycle swap", f"swap back from tree {other.tree:#x} fails")
                j = index.get(other.tree)
                if j is None:
                    raise LemmaViolation("do cycle swap", f"swap leaves the union from tree {b.tree:#x}")
                nbrs.add(j)
                n_swaps += 1
        if n_swaps != len(nbrs):
            raise LemmaViolation("do cycle swap", f"repeated neighbour at tree {b.tree:#x}")
        g.adjacency[i] = nbrs
        g.swaps[i] = n_swaps
    for i, nbrs in g.adjacency.items():
        for j in nbrs:
            if i not in g.adjacency[j]:
                raise LemmaViolation("do cycle swap", f"swap {i}->{j} is not reversible")
    if strict:
        bad = g.odd_degree_violations()
        if bad:
            b = verts[bad[0]]
            raise LemmaViolation("do cycle swap",
                                 f"vertex of even degree {g.degree(bad[0])}: tree edges "
                                 f"{b.tree_edges()}, forest edges {b.forest_edges()}, sides {b.side}")
        if g.order % 2:
            raise LemmaViolation("do cycle swap", f"swap graph has odd order {g.order}")
    return g
