"""Command-line front end: ``boltzdag --mode exact --n 100 --format edgelist``.

Graphs go to standard output.  With ``--count > 1`` graphs are separated
by a blank line (edgelist, matrix) or follow each other (dot, one JSON
object per line).  ``--stats`` adds one JSON line ``{"stats": {...}}`` after
each graph.  Exit status is 2 for invalid flags and 1 for a numeric failure
such as ``z >= rho_w``.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from ._validation import check_edge_weight, check_source_weight, check_vertex_weight
from .boltzmann import sample_dag_peeling, sample_dag_root_layering
from .exact import sample_exact_leapfrog, sample_exact_rejection
from .exceptions import ConvergenceError, DomainError, SamplerError
from .ggf import tune_z
from .graph import LabelledDag, sources
from .randomness import RandomSource

FORMATS = ("edgelist", "dot", "matrix", "json")
FREE = ("root-layering", "peeling")
EXACT = ("rejection", "leapfrog")


@dataclass
class CliConfig:
    mode: str = "exact"
    algorithm: str = "leapfrog"
    n: int | None = None
    z: float | None = None
    expected_n: int | None = None
    print_z: bool = False
    w: float = 1.0
    u: float = 1.0
    count: int = 1
    seed: int = 0
    format: str = "edgelist"
    stats: bool = False
    wall_time: bool = False


# -- formats -----------------------------------------------------------------

def serialize(g: LabelledDag, fmt: str) -> str:
    """Text form of ``g``; every format except ``matrix`` on the empty graph ends in a newline."""
    n = g.num_vertices
    edges = g.edges
    if fmt == "edgelist":
        return "".join([f"{n} {len(edges)}\n"] + [f"{u} {v}\n" for u, v in edges])
    if fmt == "dot":
        lines = ["digraph G {"]
        lines += [f"  {v};" for v in range(1, n + 1)]
        lines += [f"  {u} -> {v};" for u, v in edges]
        return "\n".join(lines) + "\n}\n"
    if fmt == "matrix":
        a = g.adjacency_matrix()
        return "".join("".join("1" if x else "0" for x in row) + "\n" for row in a)
    if fmt == "json":
        return json.dumps({"n": n, "edges": [list(e) for e in edges],
                           "sources": sorted(sources(g))}, separators=(",", ":")) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def parse(text: str, fmt: str) -> LabelledDag:
    """Inverse of :func:`serialize` for edgelist, matrix and json."""
    if fmt == "edgelist":
        lines = text.split("\n")
        n, m = map(int, lines[0].split())
        edges = [tuple(map(int, line.split())) for line in lines[1:1 + m]]
        return LabelledDag(n, edges)
    if fmt == "matrix":
        rows = [line for line in text.split("\n") if line]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix is not square")
        return LabelledDag(n, [(i + 1, j + 1) for i, r in enumerate(rows)
                               for j, c in enumerate(r) if c == "1"])
    if fmt == "json":
        obj = json.loads(text)
        return LabelledDag(obj["n"], [tuple(e) for e in obj["edges"]])
    raise ValueError(f"no parser for format {fmt!r}")


# -- argument handling ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="boltzdag", description="Random labelled DAGs.")
    p.add_argument("--mode", choices=("free", "exact"), default="exact")
    p.add_argument("--algorithm", choices=FREE + EXACT,
                   help="default: leapfrog in exact mode, peeling in free mode")
    p.add_argument("--n", type=int, help="vertex count (exact mode)")
    p.add_argument("--z", type=float, help="vertex weight (free mode)")
    p.add_argument("--expected-n", type=int, help="tune z to this expected size (free mode)")
    p.add_argument("--print-z", action="store_true", help="report the z in use on stderr")
    p.add_argument("--w", type=float, default=1.0, help="edge weight (default 1)")
    p.add_argument("--u", type=float, default=1.0, help="source weight, peeling only (default 1)")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=FORMATS, default="edgelist")
    p.add_argument("--stats", action="store_true", help="one JSON stats line per graph")
    p.add_argument("--wall-time", action="store_true",
                   help="include wall time in stats (makes output non-reproducible)")
    return p


def _config(ns, parser) -> CliConfig:
    cfg = CliConfig(**{k: v for k, v in vars(ns).items() if v is not None})
    if ns.algorithm is None:
        cfg.algorithm = "leapfrog" if cfg.mode == "exact" else "peeling"
    if cfg.count < 1:
        parser.error("--count must be at least 1")
    if not 0 <= cfg.seed < 2**64:
        parser.error("--seed must be a non-negative 64-bit integer")
    try:
        check_edge_weight(cfg.w)
        check_source_weight(cfg.u)
    except DomainError as exc:
        parser.error(str(exc))
    if cfg.mode == "exact":
        if cfg.algorithm not in EXACT:
            parser.error(f"--algorithm {cfg.algorithm} is not an exact-size sampler")
        if cfg.n is None or cfg.n < 1:
            parser.error("exact mode needs --n >= 1")
        if cfg.z is not None or cfg.expected_n is not None:
            parser.error("--z and --expected-n apply to free mode only")
        if cfg.u != 1.0:
            parser.error("--u applies to free mode only")
    else:
        if cfg.algorithm not in FREE:
            parser.error(f"--algorithm {cfg.algorithm} is not a free sampler")
        if (cfg.z is None) == (cfg.expected_n is None):
            parser.error("free mode needs exactly one of --z and --expected-n")
        if cfg.expected_n is not None and cfg.expected_n < 1:
            parser.error("--expected-n must be at least 1")
        if cfg.n is not None:
            parser.error("--n applies to exact mode only")
        if cfg.algorithm == "root-layering" and cfg.u != 1.0:
            parser.error("--u is only supported by the peeling algorithm")
    return cfg


def _separator(fmt: str, index: int) -> str:
    return "\n" if index and fmt in ("edgelist", "matrix") else ""


def run(cfg: CliConfig, out, err=None) -> int:
    """Generate ``cfg.count`` graphs into ``out``; returns the exit status."""
    err = sys.stderr if err is None else err
    src = RandomSource(cfg.seed)
    try:
        if cfg.mode == "free":
            z = tune_z(cfg.expected_n, cfg.w) if cfg.z is None else check_vertex_weight(cfg.z, cfg.w)
            if cfg.print_z:
                print(f"z = {z!r}", file=err)
            if cfg.algorithm == "peeling":
                draw = lambda: sample_dag_peeling(z, cfg.w, cfg.u, src)
            else:
                draw = lambda: sample_dag_root_layering(z, cfg.w, src)
        else:
            fn = sample_exact_leapfrog if cfg.algorithm == "leapfrog" else sample_exact_rejection
            draw = lambda: fn(cfg.n, cfg.w, src)
        for i in range(cfg.count):
            g, report = draw()
            out.write(_separator(cfg.format, i))
            out.write(serialize(g, cfg.format))
            if cfg.stats:
                out.write(json.dumps({"stats": report.as_record(cfg.wall_time)},
                                     separators=(",", ":")) + "\n")
    except (DomainError, ConvergenceError, SamplerError) as exc:
        print(f"boltzdag: error: {exc}", file=err)
        return 1
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        cfg = _config(ns, parser)
    except SystemExit as exc:
        return int(exc.code or 0)
    return run(cfg, sys.stdout)


if __name__ == "__main__":
    sys.exit(main())
