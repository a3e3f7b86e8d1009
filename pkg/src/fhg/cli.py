"""Command-line front end: ``fhg solve | check | gen | decompose``.

Exit codes: 0 success, 1 failed cross-check, 2 unreadable input or bad
parameters, 3 method/objective mismatch, 4 size cap exceeded. Timing goes to
stderr so stdout is byte-identical between runs.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from .core import DomainError, ParseError, SizeCapError, UnsupportedMethodError, format_rational, welfare
from .dispatch import METHODS, OBJECTIVES, applicable_methods, solve
from .instances import (
    FORMATS,
    PartitionInstance,
    gen_bounded_block_graph,
    gen_egal_hardness,
    gen_partial_ktree,
    gen_random_block_graph,
    gen_random_graph,
    gen_small_cover_graph,
    read_graph,
    serialize_graph,
    serialize_report,
)
from .oracle import DEFAULT_CAP
from .treedecomp import make_nice, read_pace, write_pace, heuristic_decomposition, width
from .vc_solver import DEFAULT_TAU_CAP

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_METHOD, EXIT_CAP = 0, 1, 2, 3, 4


def _weights(text: str | None):
    if text is None:
        return None
    try:
        lo, hi = (int(x) for x in text.split(","))
    except ValueError:
        raise DomainError(f"--weights expects 'lo,hi', got {text!r}") from None
    if lo > hi or (lo == 0 and hi == 0):
        raise DomainError("--weights needs lo <= hi and a nonzero value in range")
    return lo, hi


def _load(args):
    g = read_graph(args.input, args.format)
    ntd = None
    if getattr(args, "td", None):
        td, n = read_pace(Path(args.td).read_text())
        if n != g.n:
            raise DomainError(f"decomposition is for {n} vertices, graph has {g.n}")
        ntd = make_nice(td, g)
    return g, ntd


def cmd_solve(args) -> int:
    g, ntd = _load(args)
    t0 = time.perf_counter()
    report = solve(g, args.objective, args.method, ntd=ntd, oracle_cap=args.oracle_cap,
                   tau_cap=args.tau_cap, jobs=args.jobs)
    elapsed = time.perf_counter() - t0
    sys.stdout.write(serialize_report(report, args.output_format, approx=args.approx))
    print(f"wall time: {elapsed:.3f} s", file=sys.stderr)
    return EXIT_OK


def cmd_check(args) -> int:
    status = EXIT_OK
    for path in args.input:
        args_one = argparse.Namespace(**{**vars(args), "input": path})
        g, ntd = _load(args_one)
        methods = applicable_methods(g, args.objective, oracle_cap=args.oracle_cap, tau_cap=args.tau_cap)
        rows = []
        for m in methods:
            r = solve(g, args.objective, m, ntd=ntd, oracle_cap=args.oracle_cap, tau_cap=args.tau_cap,
                      jobs=args.jobs)
            recomputed = welfare(g, r.partition, args.objective)
            rows.append((m, r.value, recomputed))
        values = {v for _, v, _ in rows} | {v for _, _, v in rows}
        agree = len(values) <= 1
        print(f"{path}: {args.objective}, n={g.n}, {'agree' if agree else 'MISMATCH'}")
        for m, v, rec in rows:
            note = "" if v == rec else f"  (partition scores {format_rational(rec)})"
            print(f"  {m:<12} {format_rational(v)}{note}")
        if not agree:
            status = EXIT_MISMATCH
    return status


def cmd_gen(args) -> int:
    kind = args.kind
    td = None
    meta = None
    if kind == "blockgraph":
        if args.n is not None:
            g = gen_bounded_block_graph(args.seed, args.n, args.max_degree, args.max_clique)
        else:
            g = gen_random_block_graph(args.seed, args.blocks, args.max_clique, args.attach_prob)
    elif kind == "ktree":
        g, td = gen_partial_ktree(args.seed, args.n or 10, args.k, args.keep_prob, _weights(args.weights))
    elif kind == "gnp":
        g = gen_random_graph(args.seed, args.n or 8, args.p, _weights(args.weights))
    elif kind == "smallcover":
        g = gen_small_cover_graph(args.seed, args.n or 10, args.tau, args.p, _weights(args.weights))
    else:  # hardness
        if not args.A:
            raise DomainError("gen hardness needs --A a1,a2,...")
        if not args.output:
            raise DomainError("gen hardness needs --output (the threshold goes to a sidecar file)")
        try:
            items = [int(x) for x in args.A.split(",")]
        except ValueError:
            raise DomainError(f"--A expects integers, got {args.A!r}") from None
        hi = gen_egal_hardness(PartitionInstance(items))
        g = hi.graph
        meta = hi.meta()
    text = serialize_graph(g, args.output_format)
    if args.output:
        out = Path(args.output)
        out.write_text(text)
        if meta is not None:
            out.with_name(out.stem + ".meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
        if td is not None and args.td_output:
            Path(args.td_output).write_text(write_pace(td, g.n))
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_decompose(args) -> int:
    g = read_graph(args.input, args.format)
    td = heuristic_decomposition(g, args.strategy)
    text = write_pace(td, g.n)
    if args.output:
        Path(args.output).write_text(text)
        print(f"width {width(td)}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _jobs_default() -> int:
    try:
        return max(1, int(os.environ.get("FHG_JOBS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fhg", description="Exact welfare maximization in fractional hedonic games.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, multi=False):
        if multi:
            sp.add_argument("--input", "-i", action="append", required=True, help="graph file (repeatable)")
        else:
            sp.add_argument("--input", "-i", required=True, help="graph file")
        sp.add_argument("--format", choices=FORMATS, default=None, help="input format (default: by extension)")
        sp.add_argument("--objective", choices=OBJECTIVES, default="utilitarian")
        sp.add_argument("--td", help="PACE .td decomposition to use for the treewidth method")
        sp.add_argument("--oracle-cap", type=int, default=DEFAULT_CAP, help="largest n for brute force")
        sp.add_argument("--tau-cap", type=int, default=DEFAULT_TAU_CAP, help="largest vertex cover for vertexcover")
        sp.add_argument("--jobs", type=int, default=_jobs_default(), help="brute-force worker threads (env FHG_JOBS)")
        sp.add_argument("--seed", type=int, default=0, help="accepted for symmetry; solvers are deterministic")

    s = sub.add_parser("solve", help="solve one instance")
    common(s)
    s.add_argument("--method", choices=METHODS, default="auto")
    s.add_argument("--output-format", choices=("text", "json"), default="text")
    s.add_argument("--approx", action="store_true", help="also print a decimal approximation")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("check", help="run every applicable method and compare")
    common(c, multi=True)
    c.set_defaults(func=cmd_check)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("kind", choices=("blockgraph", "ktree", "gnp", "smallcover", "hardness"))
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--n", type=int, default=None, help="vertex count")
    g.add_argument("--blocks", type=int, default=5)
    g.add_argument("--max-clique", type=int, default=4)
    g.add_argument("--attach-prob", type=float, default=0.3)
    g.add_argument("--max-degree", type=int, default=8)
    g.add_argument("--k", type=int, default=2)
    g.add_argument("--keep-prob", type=float, default=0.7)
    g.add_argument("--p", type=float, default=0.4)
    g.add_argument("--tau", type=int, default=3)
    g.add_argument("--weights", help="integer weight range 'lo,hi' (default: unweighted)")
    g.add_argument("--A", help="Partition items for the hardness instance, e.g. 1,1")
    g.add_argument("--output", "-o")
    g.add_argument("--td-output", help="ktree only: write the natural decomposition here")
    g.add_argument("--output-format", choices=FORMATS, default="edge_list")
    g.set_defaults(func=cmd_gen)

    d = sub.add_parser("decompose", help="heuristic tree decomposition in PACE format")
    d.add_argument("--input", "-i", required=True)
    d.add_argument("--format", choices=FORMATS, default=None)
    d.add_argument("--strategy", choices=("min_fill", "min_degree"), default="min_fill")
    d.add_argument("--output", "-o")
    d.set_defaults(func=cmd_decompose)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except UnsupportedMethodError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_METHOD
    except SizeCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
