"""Lemma suites over concrete ``(K, v, w)`` instances.

Each suite returns how many instances it checked and a list of violation
messages.  :func:`verify_pair` runs every suite that applies to the case and
turns the results into :class:`LemmaRecord` rows; a :class:`LemmaViolation`
escaping a suite is counted, never swallowed silently.
"""

from __future__ import annotations

import json
import time
from collections.abc import Callable
from dataclasses import asdict, dataclass
from functools import lru_cache

from ..c2 import c2_definition
from ..graph import Graph, decomplete
from .boundary import (
    C2_TERMS,
    EXPANSION_TERMS,
    BoundaryConfig,
    EdgeBipartition,
    LemmaViolation,
    c2_from_bipartitions,
    classify_case,
    count,
    expansion_check,
    union_members,
    valid_bipartitions,
)
from .cycles import build_swap_graph, compatible_cycles, ell_identity
from .involutions import control_data, control_swap, control_vertex, two_valent_swap

__all__ = [
    "A_VERT_TERMS",
    "B_VERT_TERMS",
    "CYCLE_TERMS",
    "LemmaRecord",
    "T_SWAP_B_TERMS",
    "T_SWAP_C_TERMS",
    "adjacent_pairs",
    "verify_graph",
    "verify_pair",
]

B_VERT_TERMS = ("abc|de", "ab|cde")
A_VERT_TERMS = ("ab|cdef", "ac|bdef", "adef|bc", "abcd|ef", "abce|df", "abcf|de")
CYCLE_TERMS = {
    "R": ("abdef|c", "acdef|b", "a|bcdef", "abcde|f", "abcdf|e", "abcef|d"),
    "S": ("abd|ce", "abe|cd", "ac|bde", "bc|ade"),
    "T": ("a|bcd", "abc|d"),
}
T_SWAP_B_TERMS = ("a|bcd", "ab|cd")
T_SWAP_C_TERMS = ("abc|d", "ab|cd")


@dataclass
class LemmaRecord:
    graph: str
    case: str
    lemma: str
    instances_checked: int
    violations: int
    millis: float
    asserted: bool = True

    def to_json(self) -> str:
        return json.dumps(asdict(self))


@lru_cache(maxsize=4096)
def _c2_minus(k: Graph, v: int) -> int:
    return c2_definition(decomplete(k, v), 2)


def _members(cfg: BoundaryConfig, terms, corrupt: EdgeBipartition | None = None):
    out = union_members(cfg, terms)
    if corrupt is not None and out:
        out[0] = (corrupt, out[0][1])
    return out


def _involution(cfg: BoundaryConfig, terms, swap: Callable, lemma: str, corrupt=None):
    members = _members(cfg, terms, corrupt)
    trees = {b.tree for b, _ in members}
    bad = []
    for b, _ in members:
        try:
            img = swap(b)
            if img.tree == b.tree:
                bad.append(f"{lemma}: fixed point at tree {b.tree:#x}")
            elif img.tree not in trees:
                bad.append(f"{lemma}: image of {b.tree:#x} leaves the union")
            elif swap(img).tree != b.tree:
                bad.append(f"{lemma}: not an involution at {b.tree:#x}")
        except LemmaViolation as exc:
            bad.append(str(exc))
    parity = sum(count(cfg, t) for t in terms) % 2
    if parity != len(members) % 2 or parity:
        bad.append(f"{lemma}: term sum parity {parity}, union size {len(members)}")
    return len(members), bad


def suite_b_vert_swap(cfg, corrupt=None):
    c = cfg.marked["c"]
    return _involution(cfg, B_VERT_TERMS, lambda b: two_valent_swap(cfg.H, b, c), "B vert swap", corrupt)


def suite_t_even_swap(cfg, corrupt=None):
    n1, bad1 = _involution(cfg, T_SWAP_B_TERMS, lambda b: two_valent_swap(cfg.H, b, cfg.marked["b"]),
                           "T swap around b", corrupt)
    n2, bad2 = _involution(cfg, T_SWAP_C_TERMS, lambda b: two_valent_swap(cfg.H, b, cfg.marked["c"]),
                           "T swap around c")
    bad = bad1 + bad2
    if _c2_minus(cfg.K, cfg.v) != _c2_minus(cfg.K, cfg.w):
        bad.append("T case: c2(K-v) != c2(K-w)")
    return n1 + n2, bad


def suite_control_vertex(cfg, corrupt=None):
    members = _members(cfg, A_VERT_TERMS, corrupt)
    bad = []
    for b, _ in members:
        try:
            p1, x, adj, _ = control_data(cfg, b)
            control_vertex(adj, p1, x)
        except (LemmaViolation, ValueError) as exc:
            bad.append(str(exc))
    return len(members), bad


def suite_a_vert_swap(cfg, corrupt=None):
    def swap(b):
        img = control_swap(cfg, b)
        p1, x, adj, _ = control_data(cfg, b)
        q1, y, adj2, _ = control_data(cfg, img)
        if control_vertex(adj, p1, x) != control_vertex(adj2, q1, y):
            raise LemmaViolation("A vert swap", f"control vertex moved at {b.tree:#x}")
        return img
    return _involution(cfg, A_VERT_TERMS, swap, "A vert swap", corrupt)


def suite_compatible_cycles(cfg, corrupt=None):
    """Count agreement and the degree identity on every valid partition."""
    bips = list(valid_bipartitions(cfg.H))
    if corrupt is not None:
        bips[0] = corrupt
    bad = []
    for b in bips:
        try:
            EdgeBipartition.from_masks(cfg.H, b.tree, b.forest)
            cycles = compatible_cycles(cfg.H, b)
            e1, e2, _ = ell_identity(cfg.H, b)
            if len(cycles) != e1 + e2:
                bad.append(f"cycle count {len(cycles)} != e1 + e2 = {e1 + e2}")
        except LemmaViolation as exc:
            bad.append(str(exc))
    return len(bips), bad


def suite_odd_cycles(cfg, corrupt=None):
    h = cfg.H
    members = _members(cfg, CYCLE_TERMS[cfg.case], corrupt)
    bad = []
    if h.n % 2 == 0:
        bad.append(f"H has an even number {h.n} of vertices")
    for b, _ in members:
        try:
            for vi in b.vertex_classes:
                if sum(h.degrees[x] for x in vi) % 2 == 0:
                    bad.append(f"even degree sum on a class at {b.tree:#x}")
            if len(compatible_cycles(h, b)) % 2 == 0:
                bad.append(f"even number of compatible cycles at {b.tree:#x}")
        except LemmaViolation as exc:
            bad.append(str(exc))
    return len(members), bad


def suite_swap_graph(cfg, corrupt=None, strict=True):
    """Swap graph on the case's union; without ``strict`` the even-degree
    vertices are counted rather than raised."""
    terms = CYCLE_TERMS[cfg.case]
    try:
        xg = build_swap_graph(cfg, terms, strict=strict)
    except LemmaViolation as exc:
        return 0, [str(exc)]
    bad = [f"even degree {xg.degree(i)} at tree {xg.vertices[i].tree:#x}"
           for i in xg.odd_degree_violations()]
    direct = sum(count(cfg, t) for t in terms)
    if direct != xg.order:
        bad.append(f"swap graph order {xg.order} != direct count {direct}")
    if direct % 2:
        bad.append(f"term sum {direct} is odd")
    return xg.order, bad


def suite_c2_bipartitions(cfg, corrupt=None):
    bad = []
    for side, vertex in (("v", cfg.v), ("w", cfg.w)):
        want = _c2_minus(cfg.K, vertex)
        if c2_from_bipartitions(cfg, side) != want:
            bad.append(f"side {side}: bipartition parity differs from c2 = {want}")
        if cfg.case == "R":
            for t in C2_TERMS["R", side]:
                if count(cfg, t) % 2 != want:
                    bad.append(f"term {t} parity differs from c2 = {want}")
    return 2, bad


def suite_expansion(cfg, corrupt=None):
    lhs = (_c2_minus(cfg.K, cfg.v) - _c2_minus(cfg.K, cfg.w)) % 2
    rhs = expansion_check(cfg)
    bad = [] if lhs == rhs else [f"expansion RHS parity {rhs} != LHS {lhs}"]
    return len(EXPANSION_TERMS[cfg.case]), bad


def _empirical_swap_graph(cfg, corrupt=None):
    return suite_swap_graph(cfg, corrupt, strict=False)


def _suites(cfg: BoundaryConfig, odd: bool):
    """(lemma name, suite, asserted) triples that apply to this case."""
    out = [("c2_bipartitions", suite_c2_bipartitions, True),
           ("expansion", suite_expansion, True),
           ("compatible_cycles", suite_compatible_cycles, True)]
    if cfg.case == "S":
        out.append(("b_vert_swap", suite_b_vert_swap, True))
    if cfg.case == "R":
        out.append(("control_vertex", suite_control_vertex, True))
        out.append(("a_vert_swap", suite_a_vert_swap, True))
    if cfg.case == "T":
        out.append(("t_even_swap", suite_t_even_swap, True))
    if odd:
        out.append(("odd_cycles", suite_odd_cycles, True))
        out.append(("swap_graph", suite_swap_graph, True))
    else:
        out.append(("swap_graph_empirical", _empirical_swap_graph, False))
    return out


def _corrupted(cfg: BoundaryConfig) -> EdgeBipartition:
    """A bipartition with one forest edge moved into the tree part."""
    b = valid_bipartitions(cfg.H)[0]
    e = b.forest & -b.forest
    return EdgeBipartition(b.tree | e, b.forest & ~e, b.side)


def verify_pair(k: Graph, v: int, w: int, graph_id: str = "", inject_fault: bool = False) -> list[LemmaRecord]:
    cfg = classify_case(k, v, w)
    if cfg.case == "ISO":
        return [LemmaRecord(f"{graph_id}:{v}-{w}", "ISO", "isomorphic_decompletions", 1, 0, 0.0)]
    odd = k.n % 2 == 1
    corrupt = _corrupted(cfg) if inject_fault else None
    records = []
    for name, suite, asserted in _suites(cfg, odd):
        t0 = time.perf_counter()
        try:
            checked, bad = suite(cfg, corrupt)
        except LemmaViolation as exc:
            checked, bad = 0, [str(exc)]
        millis = round((time.perf_counter() - t0) * 1000.0, 3)
        records.append(LemmaRecord(f"{graph_id}:{v}-{w}", cfg.case, name, checked, len(bad), millis, asserted))
    return records


def adjacent_pairs(k: Graph) -> list[tuple[int, int]]:
    return [(u, v) for u, v in k.edges]


def verify_graph(k: Graph, graph_id: str = "", inject_fault: bool = False) -> list[LemmaRecord]:
    out = []
    for v, w in adjacent_pairs(k):
        out.extend(verify_pair(k, v, w, graph_id, inject_fault))
    return out
