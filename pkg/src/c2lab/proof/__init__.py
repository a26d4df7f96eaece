"""Instance-level checks of the parity argument: boundary cases, edge
bipartitions, involutions and swap graphs."""

from .boundary import (
    C2_TERMS,
    EXPANSION_TERMS,
    BoundaryConfig,
    EdgeBipartition,
    LemmaViolation,
    bipartition_set,
    c2_from_bipartitions,
    classify_case,
    count,
    expansion_check,
    union_members,
    valid_bipartitions,
)
from .cycles import CompatibleCycle, SwapGraph, build_swap_graph, compatible_cycles, crossing_edges, cycle_swap, ell_identity
from .involutions import control_swap, control_vertex, two_valent_swap
from .verify import LemmaRecord, verify_graph, verify_pair

__all__ = [
    "C2_TERMS",
    "EXPANSION_TERMS",
    "BoundaryConfig",
    "CompatibleCycle",
    "EdgeBipartition",
    "LemmaRecord",
    "LemmaViolation",
    "SwapGraph",
    "bipartition_set",
    "build_swap_graph",
    "c2_from_bipartitions",
    "classify_case",
    "compatible_cycles",
    "control_swap",
    "control_vertex",
    "count",
    "crossing_edges",
    "cycle_swap",
    "ell_identity",
    "expansion_check",
    "two_valent_swap",
    "union_members",
    "valid_bipartitions",
    "verify_graph",
    "verify_pair",
]
