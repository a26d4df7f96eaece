"""graph6 reading and writing (simple undirected graphs only)."""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from pathlib import Path

from .graph import Graph, GraphError

__all__ = ["Graph6Error", "encode_graph6", "parse_graph6", "read_graph6", "write_graph6"]

HEADER = ">>graph6<<"


class Graph6Error(GraphError):
    def __init__(self, message: str, offset: int, lineno: int | None = None):
        where = f"graph6 byte {offset}" if lineno is None else f"line {lineno}, graph6 byte {offset}"
        super().__init__(f"{where}: {message}")
        self.reason = message
        self.offset = offset
        self.lineno = lineno


def parse_graph6(text: str) -> Graph:
    line = text.strip()
    base = 0
    if line.startswith(HEADER):
        line = line[len(HEADER):]
        base = len(HEADER)
    if not line:
        raise Graph6Error("empty input", base)

    def val(i):
        if i >= len(line):
            raise Graph6Error("truncated size field", base + i)
        c = ord(line[i])
        if not 63 <= c <= 126:
            raise Graph6Error(f"character {line[i]!r} outside 63..126", base + i)
        return c - 63

    first = val(0)
    if first < 63:
        n, pos = first, 1
    elif val(1) < 63:
        n = (val(1) << 12) | (val(2) << 6) | val(3)
        pos = 4
        if n < 63:
            raise Graph6Error("non-minimal size encoding", base)
    else:
        raise Graph6Error("size above 258047 not supported", base)

    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = line[pos:]
    if len(body) != nbytes:
        raise Graph6Error(f"expected {nbytes} data bytes, found {len(body)}",
                          base + pos + min(len(body), nbytes))
    bits = []
    for k in range(nbytes):
        x = val(pos + k)
        bits.extend((x >> (5 - s)) & 1 for s in range(6))
    if any(bits[nbits:]):
        raise Graph6Error("nonzero padding bits", base + pos + nbytes - 1)
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return Graph.from_edges(n, edges)


def encode_graph6(g: Graph) -> str:
    if not g.is_simple():
        raise GraphError("graph6 encodes simple graphs only")
    n = g.n
    if n < 63:
        out = [chr(n + 63)]
    elif n <= 258047:
        out = ["~"] + [chr(((n >> s) & 63) + 63) for s in (12, 6, 0)]
    else:
        raise GraphError("graph too large for graph6")
    present = set(g.edges)
    bits = [1 if (i, j) in present else 0 for j in range(1, n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    for k in range(0, len(bits), 6):
        x = 0
        for b in bits[k:k + 6]:
            x = (x << 1) | b
        out.append(chr(x + 63))
    return "".join(out)


def read_graph6(path: str | Path) -> Iterator[Graph]:
    """Yield the graphs of a graph6 file, skipping blank lines."""
    with open(path, encoding="ascii") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                yield parse_graph6(line)
            except Graph6Error as exc:
                raise Graph6Error(exc.reason, exc.offset, lineno) from None


def write_graph6(graphs: Iterable[Graph], path: str | Path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        for g in graphs:
            fh.write(encode_graph6(g) + "\n")
