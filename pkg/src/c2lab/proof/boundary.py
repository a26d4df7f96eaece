"""Boundary configurations around an edge ``vw`` of a 4-regular graph, and the
edge bipartitions of ``H = K - {v, w}`` counted by ``r_P``, ``s_P``, ``t_P``.

Marked vertices are named by letters.  ``a, b, c`` are the neighbours of
``w`` (other than ``v``) and ``d, e, f`` those of ``v``; in the one-common-
neighbour case ``c`` is the common neighbour, in the two-common-neighbour case
``b`` and ``c`` are.  Label partitions are written as strings such as
``"ab|cdef"``.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from functools import lru_cache

from ..graph import Graph, GraphError, common_neighbors

__all__ = [
    "EXPANSION_TERMS",
    "BoundaryConfig",
    "EdgeBipartition",
    "LemmaViolation",
    "bipartition_set",
    "c2_from_bipartitions",
    "classify_case",
    "count",
    "expansion_check",
    "parse_terms",
    "valid_bipartitions",
]


class LemmaViolation(AssertionError):
    """A combinatorial guarantee failed on a concrete instance."""

    def __init__(self, lemma: str, detail: str):
        super().__init__(f"{lemma}: {detail}")
        self.lemma = lemma
        self.detail = detail


EXPANSION_TERMS = {
    "R": ("abdef|c", "acdef|b", "a|bcdef", "ab|cdef", "ac|bdef", "adef|bc",
          "abcde|f", "abcdf|e", "abcef|d", "abcf|de", "abce|df", "abcd|ef"),
    "S": ("abd|ce", "abe|cd", "ab|cde", "ade|bc", "ac|bde", "abc|de"),
    "T": ("a|bcd", "abc|d"),
}

C2_TERMS = {
    ("R", "v"): ("ab|c", "ac|b", "bc|a"),
    ("R", "w"): ("de|f", "df|e", "ef|d"),
    ("S", "v"): ("ab|c",),
    ("S", "w"): ("de|c",),
    ("T", "v"): ("a|bc",),
    ("T", "w"): ("d|bc",),
}


def parse_terms(term: str) -> tuple[str, str]:
    left, right = term.split("|")
    return left, right


@dataclass(frozen=True)
class BoundaryConfig:
    case: str
    K: Graph
    v: int
    w: int
    H: Graph
    marked: dict = field(default_factory=dict, hash=False, compare=False)
    to_k: tuple[int, ...] = ()

    def vertices(self, letters: Iterable[str]) -> frozenset:
        return frozenset(self.marked[x] for x in letters)

    def label_partition(self, term: str) -> tuple[frozenset, frozenset]:
        left, right = parse_terms(term)
        return self.vertices(left), self.vertices(right)


def classify_case(k: Graph, v: int, w: int) -> BoundaryConfig:
    """R, S or T by the number (0, 1, 2) of common neighbours of the
    adjacent pair ``v, w``; ``ISO`` when there are three."""
    if w not in k.neighbors(v):
        raise GraphError(f"vertices {v} and {w} are not adjacent")
    common = sorted(common_neighbors(k, v, w))
    only_w = sorted(k.neighbors(w) - {v} - set(common))
    only_v = sorted(k.neighbors(v) - {w} - set(common))
    keep = [x for x in range(k.n) if x not in (v, w)]
    pos = {x: i for i, x in enumerate(keep)}
    h = k.delete_vertices([v, w])
    if len(common) == 0:
        case, names = "R", dict(zip("abc", only_w)) | dict(zip("def", only_v))
    elif len(common) == 1:
        case, names = "S", dict(zip("ab", only_w)) | {"c": common[0]} | dict(zip("de", only_v))
    elif len(common) == 2:
        case, names = "T", {"a": only_w[0], "b": common[0], "c": common[1], "d": only_v[0]}
    else:
        case, names = "ISO", {}
    marked = {x: pos[y] for x, y in names.items()}
    cfg = BoundaryConfig(case, k, v, w, h, marked, tuple(keep))
    _check_degrees(cfg)
    return cfg


def _check_degrees(cfg: BoundaryConfig) -> None:
    deg = cfg.H.degrees
    want = {"R": dict.fromkeys("abcdef", 3),
            "S": {"a": 3, "b": 3, "c": 2, "d": 3, "e": 3},
            "T": {"a": 3, "b": 2, "c": 2, "d": 3}}.get(cfg.case, {})
    for letter, d in want.items():
        if deg[cfg.marked[letter]] != d:
            raise GraphError(f"{cfg.case}-case vertex {letter} has degree "
                             f"{deg[cfg.marked[letter]]} in H, expected {d}")


# --------------------------------------------------------------------------
# edge bipartitions
# --------------------------------------------------------------------------

def _components(n: int, edges: Iterable[tuple[int, int]]) -> tuple[list[int], bool]:
    """Component id per vertex (ids in order of first vertex) and whether
    the edges were acyclic."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    acyclic = True
    for u, v in edges:
        a, b = find(u), find(v)
        if a == b:
            acyclic = False
        else:
            parent[max(a, b)] = min(a, b)
    ids: dict[int, int] = {}
    return [ids.setdefault(find(x), len(ids)) for x in range(n)], acyclic


@dataclass(frozen=True)
class EdgeBipartition:
    """A spanning tree / spanning 2-forest split of the edges of ``H``.

    ``side[x]`` is 0 or 1 according to the 2-forest tree holding vertex
    ``x``; the tree holding vertex 0 is side 0.
    """

    tree: int
    forest: int
    side: tuple[int, ...]

    @classmethod
    def from_tree(cls, h: Graph, tree: int) -> "EdgeBipartition":
        forest = ((1 << h.m) - 1) ^ tree
        return cls.from_masks(h, tree, forest)

    @classmethod
    def from_masks(cls, h: Graph, tree: int, forest: int) -> "EdgeBipartition":
        """Validated construction; raises :class:`LemmaViolation` otherwise."""
        if tree & forest or (tree | forest) != (1 << h.m) - 1:
            raise LemmaViolation("valid_partition", "parts do not partition the edges")
        tcomp, tacyc = _components(h.n, edge_list(h, tree))
        if not tacyc or max(tcomp, default=0) != 0:
            raise LemmaViolation("valid_partition", f"tree part {sorted(_bits(tree))} is not a spanning tree")
        fcomp, facyc = _components(h.n, edge_list(h, forest))
        if not facyc or max(fcomp, default=0) != 1:
            raise LemmaViolation("valid_partition", f"forest part {sorted(_bits(forest))} is not a 2-forest")
        return cls(tree, forest, tuple(fcomp))

    @property
    def vertex_classes(self) -> tuple[frozenset, frozenset]:
        v1 = frozenset(x for x, s in enumerate(self.side) if s == 0)
        v2 = frozenset(x for x, s in enumerate(self.side) if s == 1)
        return v1, v2

    def compatible(self, p1: Iterable[int], p2: Iterable[int]) -> bool:
        s1 = {self.side[x] for x in p1}
        s2 = {self.side[x] for x in p2}
        return len(s1) == 1 and len(s2) == 1 and s1 != s2

    def tree_edges(self) -> list[int]:
        return list(_bits(self.tree))

    def forest_edges(self) -> list[int]:
        return list(_bits(self.forest))


def _bits(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def edge_list(h: Graph, mask: int) -> list[tuple[int, int]]:
    return [h.edges[i] for i in _bits(mask)]


@lru_cache(maxsize=256)
def valid_bipartitions(h: Graph) -> tuple[EdgeBipartition, ...]:
    """Every valid edge partition of ``h``, found by running over spanning
    trees and keeping those whose complement is a 2-forest."""
    from ..kirchhoff import forest_masks

    out = []
    full = (1 << h.m) - 1
    for tree in forest_masks(h, [[0]]):
        fcomp, acyclic = _components(h.n, edge_list(h, full ^ tree))
        if acyclic and max(fcomp) == 1:
            out.append(EdgeBipartition(tree, full ^ tree, tuple(fcomp)))
    return tuple(out)


def bipartition_set(h: Graph, p: tuple[Iterable[int], Iterable[int]]) -> Iterator[EdgeBipartition]:
    """Valid edge partitions whose 2-forest separates ``p[0]`` from ``p[1]``."""
    p1, p2 = frozenset(p[0]), frozenset(p[1])
    if p1 & p2:
        raise ValueError("partition parts overlap")
    return (b for b in valid_bipartitions(h) if b.compatible(p1, p2))


def count(cfg: BoundaryConfig, term: str) -> int:
    """``r_P``, ``s_P`` or ``t_P`` for the label partition ``term``."""
    return sum(1 for _ in bipartition_set(cfg.H, cfg.label_partition(term)))


def union_members(cfg: BoundaryConfig, terms: Iterable[str]) -> list[tuple[EdgeBipartition, str]]:
    """Members of the union of the sets named by ``terms``, each with the
    term it belongs to (the sets are disjoint)."""
    parts = [(t, cfg.label_partition(t)) for t in terms]
    out = []
    for b in valid_bipartitions(cfg.H):
        hits = [t for t, (p1, p2) in parts if b.compatible(p1, p2)]
        if len(hits) > 1:
            raise LemmaViolation("union", f"bipartition in several sets {hits}")
        if hits:
            out.append((b, hits[0]))
    return out


def c2_from_bipartitions(cfg: BoundaryConfig, side: str) -> int:
    """Parity of the bipartition counts giving ``c2`` of ``K - v`` (side
    ``"v"``) or ``K - w`` (side ``"w"``) at ``p = 2``."""
    if cfg.case not in ("R", "S", "T"):
        raise ValueError(f"no bipartition formula for case {cfg.case}")
    return sum(count(cfg, t) for t in C2_TERMS[cfg.case, side]) % 2


def expansion_check(cfg: BoundaryConfig) -> int:
    """Parity of the right-hand side of the expansion of
    ``c2(K-v) - c2(K-w)`` into label-partition counts."""
    return sum(count(cfg, t) for t in EXPANSION_TERMS[cfg.case]) % 2
