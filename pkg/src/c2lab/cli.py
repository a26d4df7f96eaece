"""``c2lab`` command line: c2, verify, gen, expand.

Exit codes: 0 everything passed, 1 violations or engine errors, 2 bad usage
or unreadable input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .algebra import DEFAULT_BUDGET, BudgetExceeded
from .c2 import METHODS, C2Error, compute, verify_completion_invariance
from .graph import Graph, GraphError, circulant, decomplete, random_regular
from .graph6 import encode_graph6, read_graph6
from .kirchhoff import DodgsonSpec, dodgson_forest_expansion, dodgson_poly_mod2

log = logging.getLogger("c2lab")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
BUDGET_ENV = "C2LAB_BUDGET"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: list[Path] = field(default_factory=list)
    primes: list[int] = field(default_factory=lambda: [2])
    methods: list[str] = field(default_factory=lambda: list(METHODS))
    budget: int = DEFAULT_BUDGET
    seed: int = 0
    out: Path | None = None
    jobs: int = 1
    lemmas: bool = False
    csv: bool = False
    inject_fault: bool = False

    def __post_init__(self):
        if self.budget <= 0:
            raise UsageError("budget must be positive")
        if self.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        for p in self.primes:
            if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
                raise UsageError(f"{p} is not prime")


# ----------------------------------------------------------------- parsing

def parse_primes(text: str) -> list[int]:
    try:
        out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad prime list {text!r}") from None
    if not out:
        raise UsageError("no primes given")
    return out


def parse_methods(text: str) -> list[str]:
    if text == "all":
        return list(METHODS)
    out = [x.strip() for x in text.split(",") if x.strip()]
    bad = [x for x in out if x not in METHODS]
    if bad or not out:
        raise UsageError(f"unknown method(s) {bad}; choose from {', '.join(METHODS)} or all")
    return out


def resolve_budget(flag: int | None) -> int:
    """Flag beats environment beats the built-in default."""
    if flag is not None:
        return flag
    env = os.environ.get(BUDGET_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{BUDGET_ENV}={env!r} is not an integer") from None
    return DEFAULT_BUDGET


def graph_ids(stem: str, count: int) -> list[str]:
    return [stem] if count == 1 else [f"{stem}.{i}" for i in range(count)]


def load_inputs(paths: Iterable[Path]) -> list[tuple[str, Graph]]:
    out = []
    for p in paths:
        try:
            graphs = list(read_graph6(p))
        except (OSError, UnicodeDecodeError) as exc:
            raise UsageError(f"{p}: {exc}") from None
        except GraphError as exc:
            raise UsageError(f"{p}: {exc}") from None
        out.extend(zip(graph_ids(Path(p).stem, len(graphs)), graphs))
    return out


def is_completed(k: Graph) -> bool:
    return k.is_simple() and k.is_connected() and k.is_regular(4)


# ----------------------------------------------------------------- work items

def _c2_item(item) -> tuple[list[dict], list[str]]:
    gid, k, cfg = item
    if is_completed(k):
        targets = [(f"{gid}-v{v}", decomplete(k, v)) for v in range(k.n)]
    else:
        targets = [(gid, k)]
    records, errors = [], []
    for name, g in targets:
        for p in cfg.primes:
            for method in cfg.methods:
                if method == "bipartition" and p != 2:
                    continue
                try:
                    rep = compute(g, p, method, graph_id=name, n=k.n, budget=cfg.budget)
                except (BudgetExceeded, C2Error, GraphError) as exc:
                    errors.append(f"{name} p={p} {method}: {exc}")
                    continue
                records.append(json.loads(rep.to_json()))
    return records, errors


def _verify_item(item) -> tuple[list[dict], list[str]]:
    from .proof.verify import verify_graph

    gid, k, cfg = item
    if not is_completed(k):
        return [], [f"warning: {gid} is not a connected 4-regular simple graph, skipped"]
    records, errors = [], []
    methods = cfg.methods
    for p in cfg.primes:
        ms = [m for m in methods if m != "bipartition" or p == 2]
        try:
            rep = verify_completion_invariance(k, p, ms, budget=cfg.budget)
        except (BudgetExceeded, C2Error, GraphError) as exc:
            errors.append(f"{gid} p={p}: {exc}")
            continue
        records.append({
            "graph": gid, "n": k.n, "p": p, "lemma": "completion_invariance",
            "values": rep.values, "all_equal": rep.all_equal,
            "violations": 0 if rep.all_equal else 1,
            "asserted": k.n % 2 == 1 and p == 2,
        })
    if cfg.lemmas:
        for r in verify_graph(k, gid, inject_fault=cfg.inject_fault):
            records.append(json.loads(r.to_json()))
    return records, errors


def _run_pool(fn: Callable, items: list, jobs: int):
    """Results in input order whatever the number of workers."""
    if jobs <= 1 or len(items) <= 1:
        yield from map(fn, items)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(fn, items)


# ----------------------------------------------------------------- output

C2_COLUMNS = ["graph", "n", "p", "method", "raw_count", "c2", "millis"]
VERIFY_COLUMNS = ["graph", "case", "lemma", "instances_checked", "violations", "asserted", "millis"]


class Writer:
    """Single sink for JSONL or CSV records; flushes after every record."""

    def __init__(self, out: Path | None, as_csv: bool, columns: Sequence[str]):
        self.fh = open(out, "w", encoding="utf-8", newline="") if out else sys.stdout
        self.csv = csv.DictWriter(self.fh, fieldnames=list(columns), extrasaction="ignore",
                                  lineterminator="\n") if as_csv else None
        if self.csv:
            self.csv.writeheader()

    def write(self, rec: dict) -> None:
        if self.csv:
            row = dict(rec)
            if "values" in row:
                row.setdefault("case", "")
                row["instances_checked"] = sum(len(v) for v in row["values"].values())
            self.csv.writerow(row)
        else:
            self.fh.write(json.dumps(rec) + "\n")
        self.fh.flush()

    def close(self) -> None:
        if self.fh is not sys.stdout:
            self.fh.close()


def _emit(cfg: RunConfig, fn: Callable, columns, count_violations: bool) -> int:
    items = [(gid, k, cfg) for gid, k in load_inputs(cfg.inputs)]
    w = Writer(cfg.out, cfg.csv, columns)
    failed = False
    try:
        for records, errors in _run_pool(fn, items, cfg.jobs):
            for rec in records:
                w.write(rec)
                if count_violations and rec.get("asserted", True) and rec.get("violations", 0):
                    failed = True
            for msg in errors:
                print(msg, file=sys.stderr)
                if not msg.startswith("warning:"):
                    failed = True
    finally:
        w.close()
    return EXIT_FAIL if failed else EXIT_OK


def cmd_c2(cfg: RunConfig) -> int:
    return _emit(cfg, _c2_item, C2_COLUMNS, count_violations=False)


def cmd_verify(cfg: RunConfig) -> int:
    return _emit(cfg, _verify_item, VERIFY_COLUMNS, count_violations=True)


def cmd_gen(family: str, n: int, count: int, seed: int, out: Path | None) -> int:
    if family == "circulant":
        graphs = [circulant(n)]
    else:
        graphs = [random_regular(n, 4, seed=seed + i) for i in range(count)]
    text = "".join(encode_graph6(g) + "\n" for g in graphs)
    if out:
        Path(out).write_text(text, encoding="ascii")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _edge_set(text: str) -> set[int]:
    try:
        return {int(x) for x in text.split(",") if x.strip()}
    except ValueError:
        raise UsageError(f"bad edge list {text!r}") from None


def cmd_expand(path: Path, index: int, vertex: int | None, spec: DodgsonSpec) -> int:
    graphs = [g for _, g in load_inputs([path])]
    if not 0 <= index < len(graphs):
        raise UsageError(f"{path} has {len(graphs)} graphs, no index {index}")
    g = graphs[index]
    if vertex is not None:
        g = decomplete(g, vertex)
    buf = io.StringIO()
    buf.write(f"# edges: {' '.join(f'{i}={u}-{v}' for i, (u, v) in enumerate(g.edges))}\n")
    buf.write(f"# I={sorted(spec.I)} J={sorted(spec.J)} K={sorted(spec.K)}\n")
    buf.write("# forest partitions (mod 2)\n")
    for part in dodgson_forest_expansion(g, spec):
        buf.write(" | ".join(",".join(map(str, p)) for p in part.canonical()) + "\n")
    buf.write("# polynomial (mod 2), one monomial per line\n")
    buf.write(dodgson_poly_mod2(g, spec).dump() + "\n")
    sys.stdout.write(buf.getvalue())
    return EXIT_OK


# ----------------------------------------------------------------- entry

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="c2lab", description="c2 invariants and completion checks")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, default_p="2", default_method="all"):
        sp.add_argument("inputs", nargs="+", type=Path, help="graph6 files")
        sp.add_argument("--p", default=default_p, help="comma-separated primes")
        sp.add_argument("--method", default=default_method,
                        help="comma list of definition,dodgson,bipartition or 'all'")
        sp.add_argument("--budget", type=int, default=None,
                        help=f"max points per count (env {BUDGET_ENV}, default {DEFAULT_BUDGET})")
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--csv", action="store_true", help="CSV summary instead of JSONL")
        sp.add_argument("--out", type=Path, default=None)

    common(sub.add_parser("c2", help="c2 of every decompletion"))
    v = sub.add_parser("verify", help="completion invariance and lemma suites")
    common(v, default_method="definition")
    v.add_argument("--lemmas", action="store_true", help="run every lemma suite on adjacent pairs")
    v.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)

    g = sub.add_parser("gen", help="generate 4-regular graphs as graph6")
    g.add_argument("family", choices=["circulant", "random"])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", type=Path, default=None)

    e = sub.add_parser("expand", help="Dodgson polynomial and its forest expansion mod 2")
    e.add_argument("input", type=Path)
    e.add_argument("--index", type=int, default=0, help="graph number in the file")
    e.add_argument("--vertex", type=int, default=None, help="decomplete at this vertex first")
    e.add_argument("--I", dest="I", default="", help="removed rows, comma-separated edges")
    e.add_argument("--J", dest="J", default="", help="removed columns")
    e.add_argument("--K", dest="K", default="", help="edges set to zero")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "gen":
            if args.count < 1:
                raise UsageError("--count must be at least 1")
            return cmd_gen(args.family, args.n, args.count, args.seed, args.out)
        if args.command == "expand":
            spec = DodgsonSpec(_edge_set(args.I), _edge_set(args.J), _edge_set(args.K))
            return cmd_expand(args.input, args.index, args.vertex, spec)
        cfg = RunConfig(
            command=args.command, inputs=list(args.inputs), primes=parse_primes(args.p),
            methods=parse_methods(args.method), budget=resolve_budget(args.budget),
            seed=args.seed, out=args.out, jobs=args.jobs, csv=args.csv,
            lemmas=getattr(args, "lemmas", False), inject_fault=getattr(args, "inject_fault", False),
        )
        if "bipartition" in cfg.methods and args.method != "all" and any(p != 2 for p in cfg.primes):
            raise UsageError("the bipartition method exists only for p = 2")
        return cmd_c2(cfg) if args.command == "c2" else cmd_verify(cfg)
    except (UsageError, GraphError, ValueError) as exc:
        print(f"c2lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
