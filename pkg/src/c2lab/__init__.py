"""c2 invariants of Feynman-type graphs over small prime fields, with
instance checks of completion invariance at p = 2."""

from .c2 import (
    METHODS,
    C2Error,
    C2Report,
    c2_bipartition_p2,
    c2_definition,
    c2_dodgson,
    compute,
    verify_completion_invariance,
)
from .graph import Graph, GraphError, circulant, complete, decomplete, random_regular
from .graph6 import Graph6Error, encode_graph6, parse_graph6, read_graph6, write_graph6
from .kirchhoff import DodgsonSpec, VertexPartition, dodgson_poly_mod2, kirchhoff_poly, spanning_forest_poly

__version__ = "0.1.0"

__all__ = [
    "METHODS",
    "C2Error",
    "C2Report",
    "DodgsonSpec",
    "Graph",
    "Graph6Error",
    "GraphError",
    "VertexPartition",
    "c2_bipartition_p2",
    "c2_definition",
    "c2_dodgson",
    "circulant",
    "complete",
    "compute",
    "decomplete",
    "dodgson_poly_mod2",
    "encode_graph6",
    "kirchhoff_poly",
    "parse_graph6",
    "random_regular",
    "read_graph6",
    "spanning_forest_poly",
    "verify_completion_invariance",
    "write_graph6",
]
