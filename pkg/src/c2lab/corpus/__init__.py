"""Bundled graph6 corpus: K5, the circulants C_n(1,2) for n = 6..12 and
twenty seeded random 4-regular graphs on 7 and on 9 vertices."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..graph import Graph
from ..graph6 import read_graph6

__all__ = ["CIRCULANT_SIZES", "RANDOM_SIZES", "RANDOM_COUNT", "files", "load", "load_all", "path"]

CIRCULANT_SIZES = range(6, 13)
RANDOM_SIZES = (7, 9)
RANDOM_COUNT = 20


def names() -> list[str]:
    return (["K5"] + [f"C{n}-12" for n in CIRCULANT_SIZES]
            + [f"random{n}" for n in RANDOM_SIZES])


def path(name: str) -> Path:
    return Path(str(resources.files(__name__).joinpath(f"{name}.g6")))


def files() -> list[Path]:
    return [path(x) for x in names()]


def load(name: str) -> list[Graph]:
    return list(read_graph6(path(name)))


def load_all() -> list[tuple[str, Graph]]:
    """``(id, graph)`` for every bundled graph, ids as used by the CLI."""
    from ..cli import graph_ids

    out = []
    for name in names():
        graphs = load(name)
        out.extend(zip(graph_ids(name, len(graphs)), graphs))
    return out
