"""Exact branch-and-cut search over colorful partitions.

The tree grows one slot at a time. A slot is opened on a seed node and
grown by include/exclude decisions on its frontier, so every slot stays
connected and colorful and each connected colorful partition is reached
once. With index symmetry breaking the seed is the smallest unassigned
node, which puts node i into a slot k <= i. Bounds are evaluated on the
components of the graph of edges that can still end up inside a slot.

MOP optima may be taken with connected slots: splitting a slot into its
connected pieces keeps every kept edge.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import NamedTuple

from .graph import ColoredGraph, nodes_of, popcount
from .milp import ModelConfig, build_model, validate_point
from .separation import IntegerPoint, separate_connectivity
from .solution import InfeasiblePartition, Partition, Problem, check_feasible, objective

CERTIFY_LIMIT = 10


class SearchState(NamedTuple):
    remaining: int  # unassigned nodes outside the open slot
    open_slot: int  # nodes of the slot being grown (0 when none)
    conflict: int  # nodes whose color already occurs in the open slot
    excluded: int  # nodes barred from the open slot
    value: int  # objective of the closed slots
    kept: int  # kept edges inside closed slots
    closed: int  # number of closed slots
    slots: tuple | None  # linked list (mask, parent) of closed slots
    last_size: int  # size of the last closed slot


@dataclass
class SearchConfig:
    problem: Problem
    q_bar: int | None = None
    use_symmetry_index: bool = True
    use_symmetry_cardinality: bool = False
    warm_start: Partition | None = None
    edge_count_cut_rhs: int | None = None
    time_limit: float | None = None
    node_limit: int | None = None

    def __post_init__(self):
        self.problem = Problem.parse(self.problem)
        if self.q_bar is not None and self.q_bar < 1:
            raise ValueError("q_bar must be at least 1")
        if self.use_symmetry_index and self.use_symmetry_cardinality:
            raise ValueError("index and cardinality symmetry breaking are alternatives")


@dataclass
class SolveReport:
    problem: Problem
    status: str  # optimal | timeout | infeasible-budget
    best: Partition | None
    lb: float | None
    ub: float | None
    nodes_explored: int
    wall_time: float
    history: list[tuple[int, float, int, float]] = field(default_factory=list)

    @property
    def value(self) -> int | None:
        if self.best is None:
            return None
        return int(self.lb if self.problem.maximize else self.ub)

    @property
    def gap(self) -> float | None:
        if self.lb is None or self.ub is None or math.isinf(self.ub):
            return None
        if self.status == "optimal" or self.ub == 0:
            return 0.0
        return (self.ub - self.lb) / self.ub


def _neighbors(adj, mask: int) -> int:
    nb = 0
    while mask:
        low = mask & -mask
        mask ^= low
        nb |= adj[low.bit_length() - 1]
    return nb


class BranchAndCut:
    def __init__(self, g: ColoredGraph, cfg: SearchConfig):
        self.g = g
        self.cfg = cfg
        self.problem = cfg.problem
        self.q_bar = g.n if cfg.q_bar is None else cfg.q_bar
        self.adj = g.adj
        self.colors = g.colors
        self.cmasks = g.color_masks
        self.colorbit = [1 << c for c in g.colors]
        self.node_cmask = [g.color_masks[c] for c in g.colors]
        self.maximize = self.problem.maximize
        self.cardinality = cfg.use_symmetry_cardinality
        self.index = cfg.use_symmetry_index

    # ------------------------------------------------------------ bounds

    def root(self) -> SearchState:
        return SearchState(self.g.full_mask, 0, 0, 0, 0, 0, 0, None, self.g.n)

    def _components(self, st: SearchState) -> list[tuple[int, bool]]:
        """Components of the still-possible graph as ``(mask, holds_open_slot)``."""
        adj = self.adj
        R, S = st.remaining, st.open_slot
        comps = []
        if S:
            cand = R & ~st.excluded & ~st.conflict
            comp = S
            frontier = _neighbors(adj, S) & cand
            while frontier:
                comp |= frontier
                frontier = _neighbors(adj, frontier) & R & ~comp
            comps.append((comp, True))
            rest = R & ~comp
        else:
            rest = R
        while rest:
            low = rest & -rest
            comp = low
            frontier = low
            while frontier:
                frontier = _neighbors(adj, frontier) & rest & ~comp
                comp |= frontier
            comps.append((comp, False))
            rest &= ~comp
        return comps

    def _edge_bound(self, st: SearchState, comp: int, with_open: bool) -> int:
        """Upper bound on edges kept inside slots drawn from ``comp``.

        Each node keeps at most one edge per distinct color among the
        neighbors it could still share a slot with.
        """
        adj, colorbit = self.adj, self.colorbit
        R, S = st.remaining, st.open_slot
        cand = R & ~st.excluded & ~st.conflict
        total = 0
        rest = comp
        while rest:
            low = rest & -rest
            rest ^= low
            u = low.bit_length() - 1
            if with_open and low & S:
                nb = adj[u] & (S | cand)
            elif with_open and low & cand:
                nb = adj[u] & (R | S)
            else:
                nb = adj[u] & R
            cb = 0
            while nb:
                lw = nb & -nb
                nb ^= lw
                cb |= colorbit[lw.bit_length() - 1]
            total += popcount(cb & ~colorbit[u])
        return total // 2

    def bound(self, st: SearchState) -> float | None:
        """Optimistic objective of every completion of ``st``; ``None`` if none fits in the slot budget."""
        cmasks = self.cmasks
        need = st.closed
        packed = 0
        edges = 0
        want_edges = self.problem is Problem.MOP or self.cfg.edge_count_cut_rhs is not None
        for comp, with_open in self._components(st):
            counts = [popcount(comp & cm) for cm in cmasks]
            top = max(counts)
            need += top
            if self.problem is not Problem.MCC:
                # one slot per "layer" of repeated colors maximizes pair counts
                layers = 0
                for j in range(1, top + 1):
                    s = sum(1 for c in counts if c >= j)
                    layers += s * (s - 1) // 2
                packed += layers
                if want_edges:
                    edges += min(layers, self._edge_bound(st, comp, with_open))
            elif want_edges:
                edges += self._edge_bound(st, comp, with_open)
        if need > self.q_bar:
            return None
        rhs = self.cfg.edge_count_cut_rhs
        if rhs is not None and st.kept + edges < rhs:
            return None
        if self.problem is Problem.MOP:
            return st.value + edges
        if self.problem is Problem.MEC:
            return st.value + packed
        return need

    # --------------------------------------------------------- branching

    def _close(self, st: SearchState) -> SearchState:
        S = st.open_slot
        size = popcount(S)
        kept = self.g.edges_within(S)
        if self.problem is Problem.MOP:
            gain = kept
        elif self.problem is Problem.MEC:
            gain = size * (size - 1) // 2
        else:
            gain = 1
        return SearchState(
            st.remaining, 0, 0, 0, st.value + gain, st.kept + kept, st.closed + 1, (S, st.slots), size
        )

    def children(self, st: SearchState) -> list[SearchState]:
        R, S = st.remaining, st.open_slot
        if not S:
            if self.index:
                low = R & -R
                seeds = [low.bit_length() - 1]
            else:
                seeds = nodes_of(R)
            return [
                SearchState(R & ~(1 << v), 1 << v, self.node_cmask[v], 0, st.value, st.kept, st.closed, st.slots, st.last_size)
                for v in seeds
            ]
        cand = R & ~st.excluded & ~st.conflict
        frontier = _neighbors(self.adj, S) & cand
        size = popcount(S)
        if frontier == 0 or (self.cardinality and size >= st.last_size):
            return [self._close(st)]
        # branch on the frontier node with the most edges into the slot
        best_u, best_deg = -1, -1
        rest = frontier
        while rest:
            low = rest & -rest
            rest ^= low
            u = low.bit_length() - 1
            d = popcount(self.adj[u] & S)
            if d > best_deg:
                best_u, best_deg = u, d
        bit = 1 << best_u
        exclude = st._replace(excluded=st.excluded | bit)
        include = st._replace(
            remaining=R & ~bit, open_slot=S | bit, conflict=st.conflict | self.node_cmask[best_u]
        )
        return [exclude, include]

    def partition_of(self, st: SearchState) -> Partition:
        blocks = []
        link = st.slots
        while link is not None:
            blocks.append(nodes_of(link[0]))
            link = link[1]
        return Partition.from_blocks(sorted(blocks, key=min), self.g.n).canonical()

    # -------------------------------------------------------------- run

    def _better(self, a: float, b: float | None) -> bool:
        if b is None:
            return True
        return a > b if self.maximize else a < b

    def _prunable(self, bound: float, incumbent: float | None) -> bool:
        if incumbent is None:
            return False
        return bound <= incumbent if self.maximize else bound >= incumbent

    def run(self) -> SolveReport:
        start = time.perf_counter()
        deadline = None if self.cfg.time_limit is None else start + self.cfg.time_limit
        node_limit = self.cfg.node_limit
        g = self.g
        incumbent: float | None = None
        best: Partition | None = None
        history: list[tuple[int, float, int, float]] = []
        running_bound = math.inf if self.maximize else -math.inf

        ws = self.cfg.warm_start
        if ws is not None and ws.num_nonempty <= self.q_bar:
            try:
                incumbent = objective(g, ws, self.problem)
                best = ws.canonical()
            except InfeasiblePartition:
                incumbent = None

        nodes = 0
        root = self.root()
        rb = self.bound(root)
        stack: list[tuple[float, SearchState]] = [] if rb is None else [(rb, root)]
        if rb is not None:
            running_bound = rb
        if best is not None:
            history.append((0, 0.0, int(incumbent), running_bound))
        limited = False
        while stack:
            if (node_limit is not None and nodes >= node_limit) or (
                deadline is not None and nodes & 255 == 0 and time.perf_counter() > deadline
            ):
                limited = True
                break
            bnd, st = stack.pop()
            if self._prunable(bnd, incumbent):
                continue
            nodes += 1
            while True:
                kids = self.children(st)
                if len(kids) == 1 and not kids[0].open_slot and kids[0].remaining:
                    st = kids[0]  # slot closed: continue with the next seed
                    continue
                break
            for kid in kids:
                if not kid.remaining and not kid.open_slot:
                    value = kid.value if self.problem is not Problem.MCC else kid.closed
                    if kid.closed <= self.q_bar and self._better(value, incumbent):
                        incumbent = value
                        best = self.partition_of(kid)
                        self._certify_incumbent(best)
                        open_bound = self._open_bound(stack)
                        running_bound = (
                            min(running_bound, max(open_bound, incumbent))
                            if self.maximize
                            else max(running_bound, min(open_bound, incumbent))
                        )
                        history.append((nodes, time.perf_counter() - start, int(incumbent), running_bound))
                    continue
                b = self.bound(kid)
                if b is None or self._prunable(b, incumbent):
                    continue
                stack.append((b, kid))
        wall = time.perf_counter() - start
        if not limited:
            if best is None:
                return SolveReport(self.problem, "infeasible-budget", None, None, None, nodes, wall, history)
            return SolveReport(self.problem, "optimal", best, incumbent, incumbent, nodes, wall, history)
        open_bound = self._open_bound(stack)
        if self.maximize:
            ub = max(open_bound, incumbent) if incumbent is not None else open_bound
            ub = min(ub, running_bound)
            lb = incumbent
        else:
            lb = min(open_bound, incumbent) if incumbent is not None else open_bound
            lb = max(lb, running_bound)
            ub = incumbent if incumbent is not None else math.inf
        return SolveReport(self.problem, "timeout", best, lb, ub, nodes, wall, history)

    def _open_bound(self, stack) -> float:
        if not stack:
            return -math.inf if self.maximize else math.inf
        vals = [b for b, _ in stack]
        return max(vals) if self.maximize else min(vals)

    def _certify_incumbent(self, p: Partition) -> None:
        if self.problem.needs_connectivity:
            cuts = separate_connectivity(self.g, IntegerPoint.derived(self.g, p))
            if cuts:
                raise AssertionError(f"search produced a disconnected slot: {cuts[0]}")


def solve(g: ColoredGraph, cfg: SearchConfig) -> SolveReport:
    return BranchAndCut(g, cfg).run()


def admissible_bound(
    g: ColoredGraph, problem: Problem | str, state: SearchState | None = None, q_bar: int | None = None
) -> float | None:
    """Optimistic objective over all completions of ``state`` (root when omitted)."""
    engine = BranchAndCut(g, SearchConfig(Problem.parse(problem), q_bar=q_bar))
    return engine.bound(engine.root() if state is None else state)


def certify(g: ColoredGraph, cfg: SearchConfig, report: SolveReport) -> bool:
    """Re-check the reported incumbent independently of the search."""
    p = report.best
    if p is None:
        return False
    problem = cfg.problem
    if p.n != g.n or not check_feasible(g, p, problem.needs_connectivity).ok:
        return False
    if objective(g, p, problem) != report.value:
        return False
    if g.n <= CERTIFY_LIMIT:
        mcfg = ModelConfig(
            problem,
            q=max(p.q, 1),
            connectivity="aggregated" if problem.needs_connectivity else "none",
        )
        if validate_point(build_model(g, mcfg), g, p, mcfg):
            return False
    return True
