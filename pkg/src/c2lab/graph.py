"""Graph representation, completion/decompletion and small generators.

Vertices are ``0..n-1``.  Edges are stored as ``(tail, head)`` pairs with
``tail <= head`` and the edge list is kept in the canonical order
(lexicographic by endpoints, ties broken by insertion rank).  That order is
the edge indexing used everywhere else in the package: edge ``i`` of a graph
is ``graph.edges[i]`` and polynomial variable ``i``.

Minors produced by :meth:`Graph.delete_edges` and :meth:`Graph.contract_edges`
keep the relative order of the surviving edges instead of re-sorting, so that
edge ``i`` of the minor is always the ``i``-th surviving edge of the parent.
"""

from __future__ import annotations

import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

__all__ = [
    "Graph",
    "GraphError",
    "SignedIncidence",
    "circulant",
    "common_neighbors",
    "complete",
    "decomplete",
    "incidence_matrix",
    "random_regular",
]


class GraphError(ValueError):
    """Raised for invalid graph input or an impossible graph operation."""


@dataclass(frozen=True, eq=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]
    labels: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise GraphError("vertex count must be nonnegative")
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) out of range for {self.n} vertices")
        if self.labels is not None and len(self.labels) != self.n:
            raise GraphError("labels must have one entry per vertex")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], labels=None,
                   canonical: bool = True, allow_loops: bool = False) -> "Graph":
        """Build a graph, orienting each edge low -> high.

        With ``canonical=True`` the edge list is sorted into the canonical
        order; otherwise the given order is kept.
        """
        oriented = []
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v and not allow_loops:
                raise GraphError(f"self-loop at vertex {u}")
            oriented.append((min(u, v), max(u, v)))
        if canonical:
            oriented = [e for e, _ in sorted((e, i) for i, e in enumerate(oriented))]
        return cls(n, tuple(oriented), None if labels is None else tuple(labels))

    @property
    def m(self) -> int:
        return len(self.edges)

    def label(self, v: int):
        return v if self.labels is None else self.labels[v]

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(deg)

    @cached_property
    def incident(self) -> tuple[tuple[int, ...], ...]:
        """Edge indices incident to each vertex (a loop is listed once)."""
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(self.edges):
            inc[u].append(i)
            if v != u:
                inc[v].append(i)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def adjacency(self) -> tuple[frozenset, ...]:
        adj: list[set] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            if u != v:
                adj[u].add(v)
                adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    def neighbors(self, v: int) -> frozenset:
        return self.adjacency[v]

    @property
    def loops(self) -> tuple[int, ...]:
        return tuple(i for i, (u, v) in enumerate(self.edges) if u == v)

    def is_simple(self) -> bool:
        return not self.loops and len(set(self.edges)) == len(self.edges)

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in self.adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == self.n

    def is_regular(self, k: int) -> bool:
        return all(d == k for d in self.degrees)

    def edge_index(self, u: int, v: int) -> int:
        """Index of the first edge joining ``u`` and ``v``."""
        key = (min(u, v), max(u, v))
        for i, e in enumerate(self.edges):
            if e == key:
                return i
        raise GraphError(f"no edge between {u} and {v}")

    def delete_vertices(self, vs: Iterable[int]) -> "Graph":
        drop = set(vs)
        for v in drop:
            if not 0 <= v < self.n:
                raise GraphError(f"vertex {v} out of range")
        keep = [x for x in range(self.n) if x not in drop]
        new = {x: i for i, x in enumerate(keep)}
        edges = [(new[u], new[v]) for u, v in self.edges if u in new and v in new]
        labels = [self.label(x) for x in keep]
        return Graph.from_edges(len(keep), edges, labels, allow_loops=True)

    def delete_edges(self, idx: Iterable[int]) -> "Graph":
        drop = set(idx)
        edges = [e for i, e in enumerate(self.edges) if i not in drop]
        return Graph(self.n, tuple(edges), self.labels)

    def contract_edges(self, idx: Iterable[int]) -> "Graph":
        """Contract the given edges; parallel edges and loops are kept.

        Vertices merged together take the smallest index of their class and
        the result is renumbered densely.
        """
        drop = set(idx)
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i in drop:
            u, v = self.edges[i]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
        roots = sorted({find(x) for x in range(self.n)})
        new = {r: i for i, r in enumerate(roots)}
        edges = []
        for i, (u, v) in enumerate(self.edges):
            if i in drop:
                continue
            a, b = new[find(u)], new[find(v)]
            edges.append((min(a, b), max(a, b)))
        labels = [self.label(r) for r in roots]
        return Graph(len(roots), tuple(edges), tuple(labels))


@dataclass(frozen=True)
class SignedIncidence:
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    entries: np.ndarray


def incidence_matrix(g: Graph, removed_vertex: int | None = None) -> SignedIncidence:
    """Signed vertex-edge incidence matrix with one vertex row removed.

    Column ``i`` has ``+1`` at the tail and ``-1`` at the head of edge ``i``;
    loop columns are zero.  The removed row defaults to the highest index.
    """
    if not g.is_connected():
        raise GraphError("incidence matrix requires a connected graph")
    if g.n == 0:
        raise GraphError("empty graph")
    if removed_vertex is None:
        removed_vertex = g.n - 1
    if not 0 <= removed_vertex < g.n:
        raise GraphError(f"vertex {removed_vertex} out of range")
    rows = tuple(x for x in range(g.n) if x != removed_vertex)
    pos = {x: r for r, x in enumerate(rows)}
    mat = np.zeros((len(rows), g.m), dtype=np.int64)
    for i, (u, v) in enumerate(g.edges):
        if u == v:
            continue
        if u in pos:
            mat[pos[u], i] += 1
        if v in pos:
            mat[pos[v], i] -= 1
    return SignedIncidence(rows, tuple(range(g.m)), mat)


def decomplete(k: Graph, v: int) -> Graph:
    """``K - v``; surviving vertices keep their labels."""
    if not 0 <= v < k.n:
        raise GraphError(f"vertex {v} out of range")
    return k.delete_vertices([v])


def complete(g: Graph, simple: bool = True, degree: int = 4) -> Graph:
    """Add one vertex joined to each vertex ``degree - deg(x)`` times."""
    deficit = [degree - d for d in g.degrees]
    if any(d < 0 for d in deficit):
        raise GraphError(f"vertex degree exceeds {degree}")
    total = sum(deficit)
    if total != degree:
        raise GraphError(f"degree deficiency is {total}, expected {degree}")
    if simple and any(d > 1 for d in deficit):
        raise GraphError("completion would create a multi-edge")
    z = g.n
    edges = list(g.edges)
    for x, d in enumerate(deficit):
        edges.extend([(x, z)] * d)
    labels = None
    if g.labels is not None:
        labels = list(g.labels) + ["inf"]
    return Graph.from_edges(g.n + 1, edges, labels)


def common_neighbors(k: Graph, v: int, w: int) -> frozenset:
    if v == w:
        raise GraphError("common_neighbors needs two distinct vertices")
    return k.neighbors(v) & k.neighbors(w)


def circulant(n: int, steps: Sequence[int] = (1, 2)) -> Graph:
    """Circulant graph ``C_n(steps)``: ``i ~ i +- s (mod n)``."""
    if n < 5:
        raise GraphError("circulant needs n >= 5")
    pairs = set()
    for i in range(n):
        for s in steps:
            j = (i + s) % n
            if i != j:
                pairs.add((min(i, j), max(i, j)))
    return Graph.from_edges(n, sorted(pairs))


def random_regular(n: int, degree: int = 4, seed: int = 0, max_tries: int = 100_000) -> Graph:
    """Uniform-pairing configuration model, rejecting loops, multi-edges and
    disconnected outcomes.  The result depends only on ``(n, degree, seed)``.
    """
    if (n * degree) % 2:
        raise GraphError("n * degree must be even")
    if n <= degree or n < 5:
        raise GraphError(f"need n >= 5 and n > degree, got n={n}")
    rng = random.Random(seed)
    stubs = [x for x in range(n) for _ in range(degree)]
    for _ in range(max_tries):
        rng.shuffle(stubs)
        pairs = set()
        ok = True
        for a, b in zip(stubs[::2], stubs[1::2]):
            e = (min(a, b), max(a, b))
            if a == b or e in pairs:
                ok = False
                break
            pairs.add(e)
        if not ok:
            continue
        g = Graph.from_edges(n, sorted(pairs))
        if g.is_connected():
            return g
    raise GraphError(f"random_regular: no simple connected pairing after {max_tries} tries")
