"""Partitions, feasibility checks and the three objective functions."""

from __future__ import annotations

import enum
import io
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

from .graph import ColoredGraph, Edge, mask_of


class Problem(str, enum.Enum):
    MOP = "mop"  # max kept edges (= min removed edges)
    MEC = "mec"  # max transitive-closure edges
    MCC = "mcc"  # min number of components

    @property
    def maximize(self) -> bool:
        return self is not Problem.MCC

    @property
    def needs_connectivity(self) -> bool:
        return self is not Problem.MOP

    @classmethod
    def parse(cls, s: "str | Problem") -> "Problem":
        return s if isinstance(s, Problem) else cls(s.lower())


class InfeasiblePartition(ValueError):
    pass


@dataclass(frozen=True)
class Partition:
    """Node-to-slot assignment. ``assignment[v]`` is a 0-based slot index.

    ``q`` is the number of available slots; slots may be empty.
    """

    assignment: tuple[int, ...]
    q: int = 0

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(int(k) for k in self.assignment))
        top = max(self.assignment, default=-1) + 1
        if self.q == 0:
            object.__setattr__(self, "q", top)
        elif self.q < top:
            raise ValueError(f"slot {top - 1} exceeds q={self.q}")
        if any(k < 0 for k in self.assignment):
            raise ValueError("negative slot index")

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], n: int, q: int = 0) -> "Partition":
        assignment = [-1] * n
        for k, block in enumerate(blocks):
            for v in block:
                if assignment[v] != -1:
                    raise ValueError(f"node {v} in two blocks")
                assignment[v] = k
        if -1 in assignment:
            raise ValueError(f"node {assignment.index(-1)} not covered")
        return cls(tuple(assignment), q)

    @property
    def n(self) -> int:
        return len(self.assignment)

    def slots(self) -> list[frozenset[int]]:
        out: list[set[int]] = [set() for _ in range(self.q)]
        for v, k in enumerate(self.assignment):
            out[k].add(v)
        return [frozenset(s) for s in out]

    def blocks(self) -> list[frozenset[int]]:
        """Nonempty slots ordered by smallest node."""
        return sorted((s for s in self.slots() if s), key=min)

    @property
    def num_nonempty(self) -> int:
        return len(set(self.assignment))

    def kept_edges(self, g: ColoredGraph) -> list[Edge]:
        a = self.assignment
        return [(u, v) for u, v in g.edges if a[u] == a[v]]

    def canonical(self) -> "Partition":
        """Relabel slots by first occurrence so node ``i`` sits in a slot ``<= i``."""
        relabel: dict[int, int] = {}
        return Partition(tuple(relabel.setdefault(k, len(relabel)) for k in self.assignment))

    def by_cardinality(self) -> "Partition":
        """Relabel slots by non-increasing size (ties by smallest node)."""
        order = sorted(self.blocks(), key=lambda b: (-len(b), min(b)))
        return Partition.from_blocks(order, self.n, self.q)


@dataclass
class FeasibilityReport:
    colorful: dict[int, bool] = field(default_factory=dict)
    connected: dict[int, bool] = field(default_factory=dict)
    violations: list[tuple[int, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_feasible(g: ColoredGraph, p: Partition, require_connected: bool) -> FeasibilityReport:
    if p.n != g.n:
        raise ValueError(f"partition covers {p.n} nodes, graph has {g.n}")
    rep = FeasibilityReport()
    for k, slot in enumerate(p.slots()):
        if not slot:
            continue
        mask = mask_of(slot)
        rep.colorful[k] = g.is_colorful_mask(mask)
        if not rep.colorful[k]:
            rep.violations.append((k, "color repeated"))
        rep.connected[k] = g.is_connected_mask(mask)
        if require_connected and not rep.connected[k]:
            rep.violations.append((k, "disconnected"))
    return rep


def _require(g: ColoredGraph, p: Partition, connected: bool) -> None:
    rep = check_feasible(g, p, connected)
    if not rep.ok:
        raise InfeasiblePartition(f"infeasible partition: {rep.violations}")


def objective_mop(g: ColoredGraph, p: Partition) -> int:
    """Number of kept edges, i.e. edges inside a slot."""
    _require(g, p, False)
    return len(p.kept_edges(g))


def objective_mec(g: ColoredGraph, p: Partition) -> int:
    _require(g, p, True)
    return sum(len(s) * (len(s) - 1) // 2 for s in p.slots())


def objective_mcc(g: ColoredGraph, p: Partition) -> int:
    _require(g, p, True)
    return p.num_nonempty


def objective(g: ColoredGraph, p: Partition, problem: Problem | str) -> int:
    problem = Problem.parse(problem)
    return {Problem.MOP: objective_mop, Problem.MEC: objective_mec, Problem.MCC: objective_mcc}[
        problem
    ](g, p)


def format_solution(p: Partition, problem: Problem | str | None = None, value: int | None = None) -> str:
    """One ``s <k>: <nodes>`` line per nonempty slot, 1-based, canonical order."""
    lines = []
    for k, block in enumerate(p.blocks(), start=1):
        lines.append(f"s {k}: " + " ".join(str(v + 1) for v in sorted(block)))
    if problem is not None:
        lines.append(f"obj {Problem.parse(problem).value} {value}")
    return "\n".join(lines) + "\n"


def parse_solution(stream: TextIO | str, n: int) -> Partition:
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    blocks: list[list[int]] = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("obj"):
            continue
        head, sep, body = line.partition(":")
        if not sep or not head.startswith("s"):
            raise ValueError(f"line {lineno}: expected 's <k>: <nodes>'")
        blocks.append([int(t) - 1 for t in body.split()])
    return Partition.from_blocks(blocks, n)


def closure_sizes(sizes: Sequence[int]) -> int:
    return sum(s * (s - 1) // 2 for s in sizes)
