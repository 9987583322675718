"""End-to-end solve: split components, preprocess, bound, warm start, search."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from .bounds import bound_and_warmstart
from .engine import SearchConfig, SolveReport, solve
from .graph import ColoredGraph, induced_subgraph, nodes_of
from .prep import preprocess_mop
from .solution import Partition, Problem, objective


@dataclass
class RunOptions:
    problem: Problem
    prep: bool = False
    warmstart: bool = True
    qbar: str | int = "auto"  # "auto" | "trivial" | int
    symmetry: str = "index"  # "none" | "cardinality" | "index"
    edge_cut: bool = False
    time_limit: float | None = None
    node_limit: int | None = None

    def __post_init__(self):
        self.problem = Problem.parse(self.problem)
        if self.symmetry not in ("none", "cardinality", "index"):
            raise ValueError(f"unknown symmetry mode {self.symmetry!r}")
        if isinstance(self.qbar, str) and self.qbar not in ("auto", "trivial"):
            self.qbar = int(self.qbar)
        if self.prep and self.problem is not Problem.MOP:
            raise ValueError("preprocessing applies to MOP only")

    def describe(self) -> dict:
        return {
            "problem": self.problem.value,
            "prep": self.prep,
            "warmstart": self.warmstart,
            "qbar": self.qbar,
            "symmetry": self.symmetry,
            "edge_cut": self.edge_cut,
            "time_limit": self.time_limit,
        }


@dataclass
class ComponentLog:
    nodes: tuple[int, ...]
    q_bar: int
    warm_value: int | None
    report: SolveReport


@dataclass
class RunResult:
    problem: Problem
    status: str
    best: Partition | None
    lb: float | None
    ub: float | None
    nodes_explored: int
    wall_time: float
    prep_offset: int = 0
    components: list[ComponentLog] = field(default_factory=list)

    @property
    def value(self) -> int | None:
        if self.best is None or self.status == "infeasible-budget":
            return None
        return int(self.lb if self.problem.maximize else self.ub)

    @property
    def gap(self) -> float | None:
        if self.lb is None or self.ub is None or math.isinf(self.ub):
            return None
        if self.status == "optimal" or self.ub == 0:
            return 0.0
        return (self.ub - self.lb) / self.ub


def search_config(opts: RunOptions, g: ColoredGraph, time_limit: float | None) -> tuple[SearchConfig, int | None]:
    """Search configuration for one connected piece, plus the warm-start value."""
    problem = opts.problem
    need_bounds = opts.warmstart or opts.qbar == "auto" or opts.edge_cut
    b = bound_and_warmstart(g, problem) if need_bounds else None
    if opts.qbar == "auto":
        q_bar = b.q_bar
    elif opts.qbar == "trivial":
        q_bar = g.n
    else:
        q_bar = min(int(opts.qbar), g.n)
    rhs = b.edge_cut_rhs if (opts.edge_cut and problem is not Problem.MOP) else None
    warm = b.warm_start if opts.warmstart else None
    cfg = SearchConfig(
        problem,
        q_bar=q_bar,
        use_symmetry_index=opts.symmetry == "index",
        use_symmetry_cardinality=opts.symmetry == "cardinality",
        warm_start=warm,
        edge_count_cut_rhs=rhs,
        time_limit=time_limit,
        node_limit=opts.node_limit,
    )
    warm_value = objective(g, warm, problem) if warm is not None else None
    return cfg, warm_value


def run(g: ColoredGraph, opts: RunOptions) -> RunResult:
    """Solve ``g``; timing covers preprocessing and warm starts."""
    start = time.perf_counter()
    deadline = None if opts.time_limit is None else start + opts.time_limit
    problem = opts.problem
    offset = 0
    blocks: list[set[int]] = []
    work = g.full_mask
    if opts.prep:
        pr = preprocess_mop(g)
        offset = pr.objective_offset
        blocks += [set(b) for b in pr.extracted_blocks]
        work = 0
        for v in pr.kept_nodes:
            work |= 1 << v
    logs: list[ComponentLog] = []
    lb = ub = 0.0
    nodes = 0
    statuses = []
    complete = True
    for comp in g.component_masks(work):
        ids = nodes_of(comp)
        sub = induced_subgraph(g, ids)
        remaining = None if deadline is None else max(0.0, deadline - time.perf_counter())
        cfg, warm_value = search_config(opts, sub, remaining)
        rep = solve(sub, cfg)
        logs.append(ComponentLog(tuple(ids), cfg.q_bar, warm_value, rep))
        nodes += rep.nodes_explored
        statuses.append(rep.status)
        if rep.best is None:
            complete = False
        else:
            blocks += [{ids[v] for v in b} for b in rep.best.blocks()]
        if rep.lb is None or rep.ub is None:
            lb = ub = None
        elif lb is not None:
            lb += rep.lb
            ub += rep.ub
    if problem is Problem.MOP and lb is not None:
        lb += offset
        ub += offset
    if "infeasible-budget" in statuses:
        status = "infeasible-budget"
    elif "timeout" in statuses:
        status = "timeout"
    else:
        status = "optimal"
    best = Partition.from_blocks(sorted(blocks, key=min), g.n).canonical() if complete else None
    return RunResult(problem, status, best, lb, ub, nodes, time.perf_counter() - start, offset, logs)
