"""Command line entry point ``ccp``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import bench
from .bounds import bound_and_warmstart
from .graph import InstanceFormatError, format_instance, parse_instance
from .milp import ModelConfig, build_model, export_lp, point_values
from .oracle import enumerate_optima
from .pipeline import RunOptions, run
from .prep import preprocess_mop
from .separation import IntegerPoint, separate_connectivity, separate_paths
from .solution import Problem, format_solution, objective, parse_solution


def _read_graph(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_instance(text)


def _num(x):
    if x is None:
        return None
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if x.is_integer():
            return int(x)
    return x


def cmd_solve(args) -> int:
    g = _read_graph(args.input)
    opts = RunOptions(
        problem=args.problem,
        prep=args.prep,
        warmstart=not args.no_warmstart,
        qbar=args.qbar,
        symmetry=args.symmetry,
        edge_cut=args.edge_cut == "on",
        time_limit=args.time_limit,
    )
    res = run(g, opts)
    if args.json:
        report = {
            "problem": res.problem.value,
            "status": res.status,
            "value": res.value,
            "lb": _num(res.lb),
            "ub": _num(res.ub),
            "gap": res.gap,
            "nodes_explored": res.nodes_explored,
            "wall_time": res.wall_time,
            "prep_offset": res.prep_offset,
            "slots": [sorted(v + 1 for v in b) for b in res.best.blocks()] if res.best else None,
            "config": {**opts.describe(), "seed": args.seed},
        }
        print(json.dumps(report, indent=2, sort_keys=True))
        return 0
    print(f"status {res.status}")
    print(f"lb {_num(res.lb)} ub {_num(res.ub)} gap {res.gap} nodes {res.nodes_explored} time {res.wall_time:.3f}")
    if res.best is not None:
        sys.stdout.write(format_solution(res.best, res.problem, res.value))
    return 0


def cmd_bounds(args) -> int:
    g = _read_graph(args.input)
    problem = Problem.parse(args.problem)
    b = bound_and_warmstart(g, problem)
    print(f"q_bar {b.q_bar}")
    print(f"warm_start_objective {objective(g, b.warm_start, problem)}")
    print(f"edge_cut_rhs {'-' if b.edge_cut_rhs is None else b.edge_cut_rhs}")
    print(f"provenance {b.provenance}")
    return 0


def cmd_prep(args) -> int:
    g = _read_graph(args.input)
    pr = preprocess_mop(g)
    for i, x in enumerate(pr.extractions, 1):
        block = " ".join(str(v + 1) for v in sorted(x.block))
        cut = " ".join(f"{u + 1}-{v + 1}" for u, v in x.cut)
        print(f"extract {i} block: {block} | cut: {cut} | kept: {x.block_edges}")
    print(f"offset {pr.objective_offset}")
    print(f"remaining {len(pr.kept_nodes)} nodes")
    if args.output and pr.reduced is not None:
        Path(args.output).write_text(format_instance(pr.reduced))
    return 0


def cmd_oracle(args) -> int:
    g = _read_graph(args.input)
    r = enumerate_optima(g, args.problem)
    print(f"optimum {r.optimum}")
    print(f"optima {len(r.optima)}")
    if r.optima:
        sys.stdout.write(format_solution(r.optima[0].canonical(), r.problem, r.optimum))
    return 0


def cmd_separate(args) -> int:
    g = _read_graph(args.input)
    p = parse_solution(Path(args.solution).read_text(), g.n)
    pt = IntegerPoint.derived(g, p)
    cuts = separate_connectivity(g, pt, family=args.family)
    paths = separate_paths(g, pt)
    q = max(p.q, 1)
    vals = point_values(g, p, q, pt.kept)
    rows = [row for c in cuts for row in c.rows(g, q)] + [path.row(q) for path in paths]
    for row in rows:
        print(f"{row.name}: lhs {row.lhs(vals):g} {row.sense} {row.rhs:g}")
    print(f"violations {len(rows)}")
    return 0


def cmd_export(args) -> int:
    g = _read_graph(args.input)
    cfg = ModelConfig(
        Problem.parse(args.problem),
        q=args.q or g.n,
        connectivity=args.connectivity or ("aggregated" if Problem.parse(args.problem).needs_connectivity else "none"),
        symmetry=args.symmetry,
        keep_edge_cuts=args.keep_edge_cuts,
    )
    model = build_model(g, cfg)
    if args.output:
        with open(args.output, "w") as fh:
            export_lp(model, fh)
    else:
        export_lp(model, sys.stdout)
    return 0


def cmd_gen(args) -> int:
    def one(seed):
        if args.kind == "planted":
            return bench.planted_blocks(seed, core=args.core, blocks=args.blocks, palette=args.colors)
        return bench.generate(bench.GenSpec(args.n, args.p, args.colors, args.dist, seed))

    if args.count == 1 and not args.corpus:
        text = format_instance(one(args.seed))
        if args.output:
            Path(args.output).write_text(text)
        else:
            sys.stdout.write(text)
        return 0
    out = args.corpus or args.output
    if not out:
        raise SystemExit("--corpus DIR is required with --count > 1")
    graphs = [(f"{args.kind}-{args.seed + i:05d}", one(args.seed + i)) for i in range(args.count)]
    bench.write_corpus(graphs, out)
    print(f"wrote {len(graphs)} instances to {out}")
    return 0


def cmd_bench(args) -> int:
    configs = bench.parse_configs(Path(args.configs).read_text())
    corpus = bench.load_corpus(args.corpus, bench.SIZE_WINDOW if args.size_window else None)
    rows, summaries = bench.run_bench(corpus, configs, args.time_limit, args.workers, args.no_time)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            bench.write_csv(rows, summaries, fh)
    else:
        bench.write_csv(rows, summaries, sys.stdout)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ccp", description="Colorful connected partitioning solvers")
    sub = ap.add_subparsers(dest="command", required=True)
    problems = [p.value for p in Problem]

    s = sub.add_parser("solve", help="solve an instance exactly")
    s.add_argument("--problem", required=True, choices=problems)
    s.add_argument("--input", required=True, help="instance file, or - for stdin")
    s.add_argument("--prep", action="store_true", help="cut off colorful blocks first (mop)")
    s.add_argument("--no-warmstart", action="store_true")
    s.add_argument("--qbar", default="auto", help="auto, trivial or an integer slot cap")
    s.add_argument("--symmetry", default="index", choices=["none", "cardinality", "index"])
    s.add_argument("--edge-cut", default="off", choices=["on", "off"])
    s.add_argument("--time-limit", type=float)
    s.add_argument("--seed", type=int, default=0, help="recorded in the report; the search is deterministic")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bounds", help="slot bound, warm start and edge-cut rhs")
    b.add_argument("--problem", required=True, choices=problems)
    b.add_argument("--input", required=True)
    b.set_defaults(func=cmd_bounds)

    p = sub.add_parser("prep", help="print the block extraction log")
    p.add_argument("--input", required=True)
    p.add_argument("--output", help="write the reduced instance here")
    p.set_defaults(func=cmd_prep)

    o = sub.add_parser("oracle", help="brute-force optimum (n <= 12)")
    o.add_argument("--problem", required=True, choices=problems)
    o.add_argument("--input", required=True)
    o.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("separate", help="violated lazy rows at an integer solution")
    sp.add_argument("--input", required=True)
    sp.add_argument("--solution", required=True)
    sp.add_argument("--family", default="aggregated", choices=["aggregated", "disaggregated"])
    sp.set_defaults(func=cmd_separate)

    e = sub.add_parser("export", help="write the MILP model in LP format")
    e.add_argument("--problem", required=True, choices=problems)
    e.add_argument("--input", required=True)
    e.add_argument("--q", type=int)
    e.add_argument("--connectivity", default=None, choices=["none", "aggregated", "disaggregated"])
    e.add_argument("--symmetry", default="none", choices=["none", "cardinality", "index"])
    e.add_argument("--keep-edge-cuts", action="store_true")
    e.add_argument("--output")
    e.set_defaults(func=cmd_export)

    gn = sub.add_parser("gen", help="generate random instances")
    gn.add_argument("--kind", default="er", choices=["er", "planted"])
    gn.add_argument("--n", type=int, default=10)
    gn.add_argument("--p", type=float, default=0.5)
    gn.add_argument("--colors", type=int, default=4)
    gn.add_argument("--dist", default="uniform", choices=["uniform", "skewed"])
    gn.add_argument("--core", type=int, default=6)
    gn.add_argument("--blocks", type=int, default=2)
    gn.add_argument("--seed", type=int, default=0)
    gn.add_argument("--count", type=int, default=1)
    gn.add_argument("--corpus", help="directory for --count instances")
    gn.add_argument("--output")
    gn.set_defaults(func=cmd_gen)

    bn = sub.add_parser("bench", help="run configs over a corpus and emit CSV")
    bn.add_argument("--corpus", required=True)
    bn.add_argument("--configs", required=True)
    bn.add_argument("--out")
    bn.add_argument("--workers", type=int, default=1)
    bn.add_argument("--time-limit", type=float)
    bn.add_argument("--no-time", action="store_true", help="zero the time column")
    bn.add_argument("--size-window", action="store_true", help="keep only 10..210 node instances")
    bn.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InstanceFormatError, ValueError, OSError) as exc:
        print(f"ccp: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
