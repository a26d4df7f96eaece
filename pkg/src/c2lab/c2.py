"""The c2 invariant by three independent routes.

* ``definition``: count zeros of the Kirchhoff polynomial (built from the
  spanning tree enumeration) over ``F_p^|E|`` and divide by ``p^2``.
* ``dodgson``: minus the zero count of the product of the two Dodgson
  polynomials ``Psi^{ik,jk}`` and ``Psi^{i,j}_k`` (built from determinants),
  over the ``|E| - 3`` remaining variables.
* ``bipartition`` (``p = 2`` only): parity of the number of ways to split the
  edges of ``G - u`` into a spanning tree and a spanning 2-forest separating
  ``v1`` from ``{v2, v3}``, for a 3-valent ``u`` with neighbours ``v1, v2, v3``.
"""

from __future__ import annotations

import json
import time
from collections.abc import Sequence
from dataclasses import asdict, dataclass, field

import numpy as np

from .algebra import DEFAULT_BUDGET, BudgetExceeded, count_points, count_zeros, det_fp_batch
from .graph import Graph, GraphError, decomplete
from .kirchhoff import (
    DodgsonSpec,
    _is_spanning_tree,
    dodgson_tensor,
    expanded_laplacian,
    first_three_valent,
    forest_masks,
    kirchhoff_tensor,
    three_valent_edges,
)

__all__ = [
    "METHODS",
    "BudgetExceeded",
    "C2Error",
    "C2Report",
    "CompletionReport",
    "bipartition_count",
    "c2_bipartition_p2",
    "c2_definition",
    "c2_dodgson",
    "compute",
    "point_count",
    "verify_completion_invariance",
]

METHODS = ("definition", "dodgson", "bipartition")


class C2Error(RuntimeError):
    """An engine produced an impossible result or its hypotheses fail."""


@dataclass
class C2Report:
    graph: str
    n: int
    p: int
    method: str
    raw_count: int
    c2: int
    millis: float = 0.0

    def to_json(self) -> str:
        return json.dumps(asdict(self))


def _check_prime(p: int) -> None:
    if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"{p} is not prime")


def point_count(g: Graph, p: int, budget: int = DEFAULT_BUDGET, jobs: int = 1,
                route: str = "polynomial") -> int:
    """Number of zeros of the Kirchhoff polynomial in ``F_p^|E|``.

    ``route="polynomial"`` evaluates the tree-enumeration polynomial on all
    points (two variables solved in closed form); ``route="determinant"`` takes the determinant of the
    expanded Laplacian at every point (slow, kept as a cross-check).
    """
    _check_prime(p)
    if not g.is_connected():
        raise GraphError("point_count requires a connected graph")
    if route == "polynomial":
        return count_zeros(kirchhoff_tensor(g), p, budget=budget, jobs=jobs)
    if route != "determinant":
        raise ValueError(f"unknown route {route!r}")
    total = p ** g.m
    if total > budget:
        raise BudgetExceeded(total, budget)
    base = expanded_laplacian(g, [0] * g.m)
    diag = np.arange(g.m)
    zeros = 0
    chunk = 4096
    weights = p ** np.arange(g.m - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, chunk):
        t = np.arange(start, min(total, start + chunk), dtype=np.int64)
        pts = (t[:, None] // weights[None, :]) % p
        batch = np.broadcast_to(base, (len(t),) + base.shape).copy()
        batch[:, diag, diag] = pts
        zeros += int(np.count_nonzero(det_fp_batch(batch, p) == 0))
    return zeros


def _definition(g: Graph, p: int, budget: int, jobs: int) -> tuple[int, int]:
    if g.n < 3:
        raise GraphError("c2 needs a connected graph with at least 3 vertices")
    raw = point_count(g, p, budget=budget, jobs=jobs)
    if raw % (p * p):
        raise C2Error(f"point count {raw} not divisible by p^2 = {p * p}")
    return raw, (raw // (p * p)) % p


def c2_definition(g: Graph, p: int, budget: int = DEFAULT_BUDGET, jobs: int = 1) -> int:
    return _definition(g, p, budget, jobs)[1]


def default_triple(g: Graph) -> tuple[int, int, int]:
    return three_valent_edges(g, first_three_valent(g))


def _dodgson(g: Graph, p: int, triple: Sequence[int] | None, budget: int, jobs: int) -> tuple[int, int]:
    _check_prime(p)
    if 2 + g.m > 2 * g.n:
        raise C2Error(f"Dodgson route needs 2 + |E| <= 2|V|, got 2 + {g.m} > {2 * g.n}")
    i, j, k = default_triple(g) if triple is None else triple
    if len({i, j, k}) != 3:
        raise ValueError("i, j, k must be distinct edges")
    first = DodgsonSpec({i, k}, {j, k})
    second = DodgsonSpec({i}, {j}, {k})
    free1, a = dodgson_tensor(g, first)
    free2, b = dodgson_tensor(g, second)
    assert free1 == free2
    raw = count_points([a, b], p, budget=budget, jobs=jobs)
    return raw, (-raw) % p


def c2_dodgson(g: Graph, p: int, triple: Sequence[int] | None = None,
               budget: int = DEFAULT_BUDGET, jobs: int = 1) -> int:
    """c2 as ``-[Psi^{ik,jk} Psi^{i,j}_k]_p``; default triple = the edges at
    the first 3-valent vertex."""
    return _dodgson(g, p, triple, budget, jobs)[1]


def bipartition_count(g: Graph, u: int | None = None, v1: int | None = None) -> int:
    """Number of (spanning tree, 2-forest) edge splits of ``G - u``, the
    2-forest separating ``v1`` from the other two neighbours of ``u``."""
    if u is None:
        u = first_three_valent(g)
    nbrs = sorted(g.neighbors(u))
    if g.degrees[u] != 3 or len(nbrs) != 3:
        raise GraphError(f"vertex {u} is not 3-valent with distinct neighbours")
    if v1 is None:
        v1 = nbrs[0]
    if v1 not in nbrs:
        raise GraphError(f"{v1} is not a neighbour of {u}")
    h = g.delete_vertices([u])
    idx = {x: i for i, x in enumerate(x for x in range(g.n) if x != u)}
    rest = [idx[x] for x in nbrs if x != v1]
    full = (1 << h.m) - 1
    count = 0
    for mask in forest_masks(h, [[idx[v1]], rest]):
        tree = full ^ mask
        if _is_spanning_tree(h.n, [h.edges[e] for e in range(h.m) if (tree >> e) & 1]):
            count += 1
    return count


def c2_bipartition_p2(g: Graph, u: int | None = None, v1: int | None = None) -> int:
    return bipartition_count(g, u, v1) % 2


def compute(g: Graph, p: int, method: str, graph_id: str = "", n: int | None = None,
            budget: int = DEFAULT_BUDGET, jobs: int = 1, triple=None) -> C2Report:
    """Run one engine and wrap the result as a report."""
    t0 = time.perf_counter()
    if method == "definition":
        raw, c2 = _definition(g, p, budget, jobs)
    elif method == "dodgson":
        raw, c2 = _dodgson(g, p, triple, budget, jobs)
    elif method == "bipartition":
        if p != 2:
            raise ValueError("the bipartition method exists only for p = 2")
        raw = bipartition_count(g)
        c2 = raw % 2
    else:
        raise ValueError(f"unknown method {method!r}")
    millis = (time.perf_counter() - t0) * 1000.0
    return C2Report(graph_id, g.n if n is None else n, p, method, raw, c2, round(millis, 3))


@dataclass
class CompletionReport:
    p: int
    values: dict[str, list[int]] = field(default_factory=dict)
    all_equal: bool = True
    counterexample: tuple[int, int] | None = None

    def flat(self) -> list[int]:
        return [v for vals in self.values.values() for v in vals]


def check_completed(k: Graph) -> None:
    if not (k.is_simple() and k.is_regular(4) and k.is_connected()):
        raise GraphError("expected a connected 4-regular simple graph")


def verify_completion_invariance(k: Graph, p: int = 2, methods: Sequence[str] = ("definition",),
                                 budget: int = DEFAULT_BUDGET, jobs: int = 1) -> CompletionReport:
    """c2 of every decompletion ``K - v`` and whether they all agree."""
    check_completed(k)
    rep = CompletionReport(p)
    for method in methods:
        rep.values[method] = [compute(decomplete(k, v), p, method, budget=budget, jobs=jobs).c2
                              for v in range(k.n)]
    vals = rep.flat()
    for method, row in rep.values.items():
        for v, c in enumerate(row):
            if c != vals[0]:
                rep.all_equal = False
                if rep.counterexample is None:
                    rep.counterexample = (0, v)
    return rep
