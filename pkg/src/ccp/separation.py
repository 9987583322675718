"""Separation of connectivity and path rows at integer points."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .graph import ColoredGraph, Edge, connected_components, mask_of, nodes_of
from .milp import Constraint, connectivity_row, path_row
from .solution import Partition

PATH_BUDGET = 10_000


@dataclass(frozen=True)
class IntegerPoint:
    """A slot assignment together with an explicit kept-edge set."""

    partition: Partition
    kept: frozenset[Edge]

    @classmethod
    def derived(cls, g: ColoredGraph, p: Partition) -> "IntegerPoint":
        return cls(p, frozenset(p.kept_edges(g)))

    @classmethod
    def of(cls, p: Partition, kept: Iterable[Edge]) -> "IntegerPoint":
        return cls(p, frozenset((min(e), max(e)) for e in kept))


@dataclass(frozen=True)
class ViolatedCut:
    u: frozenset[int]
    witnesses: tuple[tuple[int, int, int], ...]  # (i in U, j not in U, slot)
    family: str = "aggregated"

    def rows(self, g: ColoredGraph, q: int) -> list[Constraint]:
        if self.family == "aggregated":
            return [connectivity_row(g, self.u, q)]
        return [connectivity_row(g, self.u, q, w) for w in self.witnesses]


@dataclass(frozen=True)
class ViolatedPath:
    nodes: tuple[int, ...]

    def row(self, q: int) -> Constraint:
        return path_row(self.nodes, q)


def support_graph(g: ColoredGraph, pt: IntegerPoint) -> list[frozenset[int]]:
    return connected_components(g, sorted(pt.kept))


def separate_connectivity(
    g: ColoredGraph, pt: IntegerPoint, family: str = "aggregated"
) -> list[ViolatedCut]:
    """One cut per support component that shares a slot with an outside node.

    The emitted side is the smaller of the component and its complement.
    """
    if family not in ("aggregated", "disaggregated"):
        raise ValueError(f"unknown connectivity family {family!r}")
    a = pt.partition.assignment
    slot_masks: dict[int, int] = {}
    for v, k in enumerate(a):
        slot_masks[k] = slot_masks.get(k, 0) | 1 << v
    cuts = []
    for comp in support_graph(g, pt):
        cm = mask_of(comp)
        witnesses = []
        for i in sorted(comp):
            k = a[i]
            for j in nodes_of(slot_masks[k] & ~cm):
                witnesses.append((i, j, k))
        if not witnesses:
            continue
        if 2 * len(comp) > g.n:
            u = frozenset(range(g.n)) - comp
            witnesses = sorted((j, i, k) for i, j, k in witnesses)
        else:
            u = comp
        cuts.append(ViolatedCut(u, tuple(witnesses), family))
    return cuts


def separate_paths(g: ColoredGraph, pt: IntegerPoint, budget: int = PATH_BUDGET) -> list[ViolatedPath]:
    """Every elementary kept-edge path joining two nodes of different slots.

    At most ``budget`` paths are emitted per node pair.
    """
    a = pt.partition.assignment
    ymask = [0] * g.n
    for u, v in pt.kept:
        ymask[u] |= 1 << v
        ymask[v] |= 1 << u
    found = []
    for comp in support_graph(g, pt):
        members = sorted(comp)
        for idx, i in enumerate(members):
            for j in members[idx + 1 :]:
                if a[i] != a[j]:
                    found.extend(ViolatedPath(p) for p in _paths_between(i, j, ymask, budget))
    return found


def _paths_between(s: int, t: int, ymask: list[int], budget: int) -> list[tuple[int, ...]]:
    out = []
    stack = [(s, 1 << s, (s,))]
    while stack and len(out) < budget:
        v, seen, path = stack.pop()
        if v == t:
            out.append(path)
            continue
        nxt = ymask[v] & ~seen
        for u in reversed(nodes_of(nxt)):
            stack.append((u, seen | 1 << u, path + (u,)))
    return out
