"""Kirchhoff, spanning forest and Dodgson polynomials.

Two independent routes are implemented: combinatorial enumeration of spanning
trees and forests (mod-2 polynomials as sets of complement monomials), and
determinants of the expanded Laplacian

    M = [[Lambda, E^T], [-E, 0]]

where ``Lambda`` is the diagonal of edge variables and ``E`` the signed
incidence matrix with the last vertex row removed.  Polynomial variable ``i``
is edge ``i`` of the graph throughout; deleted edges simply never occur.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import FpMatrix, Gf2Poly, dense_from_monomials, det_fp, det_int_batch, moebius
from .graph import Graph, GraphError, incidence_matrix

__all__ = [
    "DodgsonSpec",
    "VertexPartition",
    "dodgson_eval",
    "dodgson_forest_expansion",
    "dodgson_matrix",
    "dodgson_poly_mod2",
    "dodgson_tensor",
    "expanded_laplacian",
    "expanded_laplacian_eval",
    "forest_masks",
    "kirchhoff_poly",
    "kirchhoff_tensor",
    "set_partitions",
    "spanning_2forests",
    "spanning_forest_poly",
    "spanning_trees",
]


@dataclass(frozen=True)
class VertexPartition:
    parts: tuple[frozenset, ...]

    def __post_init__(self):
        parts = tuple(frozenset(p) for p in self.parts)
        if any(not p for p in parts):
            raise ValueError("partition parts must be nonempty")
        seen: set = set()
        for p in parts:
            if seen & p:
                raise ValueError("partition parts overlap")
            seen |= p
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts: Iterable[int]) -> "VertexPartition":
        return cls(tuple(frozenset(p) for p in parts))

    def __len__(self):
        return len(self.parts)

    @property
    def support(self) -> frozenset:
        return frozenset().union(*self.parts)

    def canonical(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(tuple(sorted(p)) for p in self.parts))

    def __eq__(self, other):
        return isinstance(other, VertexPartition) and self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())


@dataclass(frozen=True)
class DodgsonSpec:
    I: frozenset
    J: frozenset
    K: frozenset = frozenset()

    def __post_init__(self):
        for name in "IJK":
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if len(self.I) != len(self.J):
            raise ValueError(f"|I| = {len(self.I)} differs from |J| = {len(self.J)}")

    @property
    def removed(self) -> frozenset:
        return self.I | self.J | self.K


# --------------------------------------------------------------------------
# enumeration
# --------------------------------------------------------------------------

def forest_masks(g: Graph, parts: Sequence[Iterable[int]], allowed: int | None = None) -> Iterator[int]:
    """Spanning forests of ``g`` whose trees correspond one-to-one to ``parts``.

    Each part must lie inside a single tree, different parts in different
    trees, and every tree must contain a part.  Only edges in the ``allowed``
    mask are used; loops never are.  Yields forest edge masks in a
    deterministic order (include-before-exclude over the edge order).
    No parts at all means spanning trees.
    """
    n = g.n
    if not parts and n:
        parts = [[0]]
    part_of = [-1] * n
    plist = [sorted(set(p)) for p in parts]
    for pid, p in enumerate(plist):
        for x in p:
            if part_of[x] != -1:
                raise ValueError("partition parts overlap")
            part_of[x] = pid
    k = len(plist)
    if k == 0 or n == 0:
        return
    full = (1 << g.m) - 1 if allowed is None else allowed
    cand = [i for i, (u, v) in enumerate(g.edges) if u != v and (full >> i) & 1]
    ends = [g.edges[i] for i in cand]
    need = n - k
    if need < 0 or len(cand) < need:
        return

    parent = list(range(n))
    size = [1] * n
    label = part_of[:]  # part id carried by each root

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    def feasible(pos: int) -> bool:
        # can chosen edges plus cand[pos:] still produce a valid forest?
        par = [find(x) for x in range(n)]
        roots = list(range(n))

        def f2(x):
            while roots[x] != x:
                roots[x] = roots[roots[x]]
                x = roots[x]
            return x

        for j in range(pos, len(cand)):
            u, v = ends[j]
            a, b = f2(par[u]), f2(par[v])
            if a != b:
                roots[a] = b
        has_part = {}
        for x in range(n):
            r = f2(par[x])
            has_part[r] = has_part.get(r, False) or part_of[x] != -1
        if not all(has_part.values()):
            return False
        for p in plist:
            if len({f2(par[x]) for x in p}) > 1:
                return False
        return True

    def parts_joined() -> bool:
        return all(len({find(x) for x in p}) == 1 for p in plist)

    chosen = 0

    def rec(pos: int, count: int) -> Iterator[int]:
        nonlocal chosen
        if count == need:
            if parts_joined():
                yield chosen
            return
        if len(cand) - pos < need - count:
            return
        u, v = ends[pos]
        ru, rv = find(u), find(v)
        if ru != rv and not (label[ru] != -1 and label[rv] != -1 and label[ru] != label[rv]):
            if size[ru] < size[rv]:
                ru, rv = rv, ru
            parent[rv] = ru
            size[ru] += size[rv]
            old = label[ru]
            if old == -1:
                label[ru] = label[rv]
            chosen |= 1 << cand[pos]
            yield from rec(pos + 1, count + 1)
            chosen &= ~(1 << cand[pos])
            label[ru] = old
            size[ru] -= size[rv]
            parent[rv] = rv
        if feasible(pos + 1):
            yield from rec(pos + 1, count)

    if feasible(0):
        yield from rec(0, 0)


def _as_set(mask: int) -> frozenset:
    return frozenset(i for i in range(mask.bit_length()) if (mask >> i) & 1)


def spanning_trees(g: Graph) -> Iterator[frozenset]:
    """Every spanning tree once, as a set of edge indices."""
    if g.n == 0:
        return iter(())
    return (_as_set(mask) for mask in forest_masks(g, [[0]]))


def spanning_2forests(g: Graph, p: VertexPartition) -> Iterator[frozenset]:
    if len(p) != 2:
        raise ValueError("spanning_2forests needs a partition with exactly two parts")
    return (_as_set(mask) for mask in forest_masks(g, p.parts))


@lru_cache(maxsize=512)
def _kirchhoff_cached(g: Graph) -> Gf2Poly:
    if g.n == 0:
        return Gf2Poly()
    full = (1 << g.m) - 1
    return Gf2Poly(full ^ mask for mask in forest_masks(g, [[0]]))


def kirchhoff_poly(g: Graph) -> Gf2Poly:
    """Kirchhoff polynomial mod 2: complements of spanning trees."""
    return _kirchhoff_cached(g)


def spanning_forest_poly(g: Graph, p: VertexPartition | Sequence[Iterable[int]],
                         deleted: Iterable[int] = ()) -> Gf2Poly:
    """Spanning forest polynomial of ``g`` minus the ``deleted`` edges, mod 2.

    Monomials are complements within the surviving edges, indexed by the
    edge indices of ``g``.
    """
    parts = p.parts if isinstance(p, VertexPartition) else VertexPartition.of(*p).parts
    allowed = (1 << g.m) - 1
    for e in deleted:
        allowed &= ~(1 << e)
    return Gf2Poly(allowed ^ mask for mask in forest_masks(g, parts, allowed))


def kirchhoff_tensor(g: Graph) -> np.ndarray:
    """Integer coefficient tensor of the Kirchhoff polynomial (all 0/1)."""
    return kirchhoff_poly(g).to_dense(g.m)


# --------------------------------------------------------------------------
# expanded Laplacian and Dodgson polynomials
# --------------------------------------------------------------------------

@lru_cache(maxsize=512)
def _laplacian_skeleton(g: Graph) -> np.ndarray:
    e = incidence_matrix(g).entries
    m, r = g.m, g.n - 1
    mat = np.zeros((m + r, m + r), dtype=np.int64)
    mat[:m, m:] = e.T
    mat[m:, :m] = -e
    mat.setflags(write=False)
    return mat


def _values(g: Graph, assignment: Sequence[int] | Mapping[int, int], skip: frozenset = frozenset()) -> list[int]:
    out = []
    for i in range(g.m):
        if i in skip:
            out.append(0)
            continue
        try:
            out.append(int(assignment[i]))
        except (KeyError, IndexError):
            raise ValueError(f"assignment has no value for edge {i}") from None
    return out


def expanded_laplacian(g: Graph, values: Sequence[int]) -> np.ndarray:
    mat = _laplacian_skeleton(g).copy()
    idx = np.arange(g.m)
    mat[idx, idx] = values
    return mat


def expanded_laplacian_eval(g: Graph, assignment, p: int) -> FpMatrix:
    """The expanded Laplacian with edge variables set from ``assignment``, mod ``p``."""
    return FpMatrix(p, expanded_laplacian(g, _values(g, assignment)))


def dodgson_matrix(g: Graph, spec: DodgsonSpec, values: Sequence[int]) -> np.ndarray:
    vals = [0 if i in spec.K else v for i, v in enumerate(values)]
    mat = expanded_laplacian(g, vals)
    keep_r = [i for i in range(mat.shape[0]) if i not in spec.I]
    keep_c = [i for i in range(mat.shape[1]) if i not in spec.J]
    return mat[np.ix_(keep_r, keep_c)]


def dodgson_eval(g: Graph, spec: DodgsonSpec, assignment, p: int) -> int:
    """Dodgson polynomial evaluated mod ``p`` (defined up to sign)."""
    vals = _values(g, assignment, skip=spec.removed)
    return det_fp(FpMatrix(p, dodgson_matrix(g, spec, vals)))


def _free_edges(g: Graph, spec: DodgsonSpec) -> list[int]:
    return [i for i in range(g.m) if i not in spec.removed]


def dodgson_tensor(g: Graph, spec: DodgsonSpec, chunk: int = 2048) -> tuple[list[int], np.ndarray]:
    """Integer coefficients of a Dodgson polynomial by interpolation.

    Returns ``(free_edges, coeffs)`` where axis ``i`` of ``coeffs`` is
    variable ``free_edges[i]``.  The determinant is evaluated at every point
    of ``{0,1}^N`` and Moebius-inverted; the polynomial is multilinear since
    each variable sits on one diagonal entry.
    """
    free = _free_edges(g, spec)
    nfree = len(free)
    base = dodgson_matrix(g, spec, [0] * g.m)
    rows = [i for i in range(g.m + g.n - 1) if i not in spec.I]
    cols = [i for i in range(g.m + g.n - 1) if i not in spec.J]
    rpos = {x: i for i, x in enumerate(rows)}
    cpos = {x: i for i, x in enumerate(cols)}
    diag_r = np.array([rpos[e] for e in free], dtype=np.int64)
    diag_c = np.array([cpos[e] for e in free], dtype=np.int64)
    total = 1 << nfree
    # row t of `points` is the 0/1 point with C-order index t
    shifts = np.arange(nfree - 1, -1, -1, dtype=np.int64)
    values = np.empty(total, dtype=np.int64)
    for start in range(0, total, chunk):
        t = np.arange(start, min(total, start + chunk), dtype=np.int64)
        pts = (t[:, None] >> shifts[None, :]) & 1
        batch = np.broadcast_to(base, (len(t),) + base.shape).copy()
        batch[:, diag_r, diag_c] = pts
        values[start:start + len(t)] = det_int_batch(batch)
    return free, moebius(values.reshape((2,) * nfree) if nfree else values.reshape(()))


def dodgson_poly_mod2(g: Graph, spec: DodgsonSpec) -> Gf2Poly:
    """Dodgson polynomial reduced mod 2, via the determinant route."""
    free, coeffs = dodgson_tensor(g, spec)
    monos = []
    for idx in zip(*np.nonzero(coeffs % 2)):
        monos.append(sum(1 << free[a] for a, bit in enumerate(idx) if bit))
    if coeffs.ndim == 0 and coeffs % 2:
        monos.append(0)
    return Gf2Poly(monos)


# --------------------------------------------------------------------------
# Dodgson -> spanning forest expansion
# --------------------------------------------------------------------------

def set_partitions(items: Sequence) -> Iterator[list[list]]:
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def _is_spanning_tree(n: int, edges: Iterable[tuple[int, int]]) -> bool:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    count = 0
    for u, v in edges:
        a, b = find(u), find(v)
        if a == b:
            return False
        parent[a] = b
        count += 1
    return count == n - 1


def dodgson_forest_expansion(g: Graph, spec: DodgsonSpec) -> list[VertexPartition]:
    """Set partitions ``P`` with ``Psi^{I,J}_{G,K} = sum_P Phi^P_{G minus (I|J|K)}`` mod 2.

    ``P`` ranges over partitions of the endpoints of ``(I|J|K) - (I&J)``; a
    partition is kept when it has compatible forests and every one of them
    becomes a spanning tree both after adding ``(J|K) - I`` and after adding
    ``(I|K) - J`` (contraction in the two minors).  Partitions without any
    compatible forest contribute nothing and are dropped.
    """
    marked_edges = spec.removed - (spec.I & spec.J)
    verts = sorted({x for e in marked_edges for x in g.edges[e]})
    allowed = (1 << g.m) - 1
    for e in spec.removed:
        allowed &= ~(1 << e)
    add1 = [g.edges[e] for e in sorted((spec.J | spec.K) - spec.I)]
    add2 = [g.edges[e] for e in sorted((spec.I | spec.K) - spec.J)]
    out = []
    for parts in set_partitions(verts):
        forests = list(forest_masks(g, parts, allowed))
        if not forests:
            continue
        ok = True
        for mask in forests:
            fedges = [g.edges[i] for i in range(g.m) if (mask >> i) & 1]
            if not (_is_spanning_tree(g.n, fedges + add1) and _is_spanning_tree(g.n, fedges + add2)):
                ok = False
                break
        if ok:
            out.append(VertexPartition.of(*parts))
    return sorted(out, key=VertexPartition.canonical)


def three_valent_edges(g: Graph, u: int) -> tuple[int, int, int]:
    inc = g.incident[u]
    if len(inc) != 3 or g.degrees[u] != 3:
        raise GraphError(f"vertex {u} is not 3-valent")
    return tuple(inc)  # type: ignore[return-value]


def first_three_valent(g: Graph) -> int:
    for x, d in enumerate(g.degrees):
        if d == 3 and len(g.neighbors(x)) == 3:
            return x
    raise GraphError("graph has no 3-valent vertex with three distinct neighbours")


def dense_from_gf2(poly: Gf2Poly, variables: Sequence[int]) -> np.ndarray:
    """Dense 0/1 tensor of ``poly`` over the listed variables (in that order)."""
    pos = {e: i for i, e in enumerate(variables)}
    coeffs = {}
    for mono in poly.monomials:
        new = 0
        for e in range(mono.bit_length()):
            if (mono >> e) & 1:
                new |= 1 << pos[e]
        coeffs[new] = 1
    return dense_from_monomials(coeffs, len(variables))


def all_points(m: int, p: int) -> Iterator[tuple[int, ...]]:
    return itertools.product(range(p), repeat=m)
