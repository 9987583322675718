"""Brute-force optima by enumerating every set partition of the nodes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .graph import ColoredGraph, popcount
from .solution import Partition, Problem

MAX_ORACLE_NODES = 12


class OracleTooLarge(ValueError):
    pass


def restricted_growth_strings(n: int) -> Iterator[tuple[int, ...]]:
    """All restricted growth strings of length ``n``, one per set partition."""
    if n == 0:
        yield ()
        return
    a = [0] * n
    top = [0] * n  # top[i] = max(a[0..i])

    def rec(i: int):
        if i == n:
            yield tuple(a)
            return
        for k in range(top[i - 1] + 2):
            a[i] = k
            top[i] = max(top[i - 1], k)
            yield from rec(i + 1)

    a[0] = 0
    yield from rec(1)


@dataclass
class OracleResult:
    problem: Problem
    optimum: int | None
    optima: list[Partition] = field(default_factory=list)
    feasible_count: int = 0


def oracle_all(g: ColoredGraph) -> dict[Problem, OracleResult]:
    """Exact optima of all three problems in one enumeration pass."""
    n = g.n
    if n > MAX_ORACLE_NODES:
        raise OracleTooLarge(f"oracle limited to {MAX_ORACLE_NODES} nodes, got {n}")
    adj, colors = g.adj, g.colors
    res = {p: OracleResult(p, None) for p in Problem}
    best = {Problem.MOP: -1, Problem.MEC: -1, Problem.MCC: n + 1}
    opt: dict[Problem, list[tuple[int, ...]]] = {p: [] for p in Problem}
    assign = [0] * n
    block_nodes: list[int] = []
    block_colors: list[int] = []

    def leaf(kept: int):
        res[Problem.MOP].feasible_count += 1
        if kept > best[Problem.MOP]:
            best[Problem.MOP] = kept
            opt[Problem.MOP] = []
        if kept == best[Problem.MOP]:
            opt[Problem.MOP].append(tuple(assign))
        if not all(g.is_connected_mask(b) for b in block_nodes):
            return
        closure = sum(popcount(b) * (popcount(b) - 1) // 2 for b in block_nodes)
        count = len(block_nodes)
        for p, val, better in ((Problem.MEC, closure, closure > best[Problem.MEC]), (Problem.MCC, count, count < best[Problem.MCC])):
            res[p].feasible_count += 1
            if better:
                best[p] = val
                opt[p] = []
            if val == best[p]:
                opt[p].append(tuple(assign))

    def rec(i: int, kept: int):
        if i == n:
            leaf(kept)
            return
        cbit = 1 << colors[i]
        for k in range(len(block_nodes)):
            if block_colors[k] & cbit:
                continue
            assign[i] = k
            gain = popcount(adj[i] & block_nodes[k])
            block_nodes[k] |= 1 << i
            block_colors[k] |= cbit
            rec(i + 1, kept + gain)
            block_nodes[k] &= ~(1 << i)
            block_colors[k] &= ~cbit
        assign[i] = len(block_nodes)
        block_nodes.append(1 << i)
        block_colors.append(cbit)
        rec(i + 1, kept)
        block_nodes.pop()
        block_colors.pop()

    rec(0, 0)
    for p in Problem:
        if opt[p]:
            res[p].optimum = best[p]
            res[p].optima = [Partition(a) for a in opt[p]]
    return res


def enumerate_optima(g: ColoredGraph, problem: Problem | str) -> OracleResult:
    return oracle_all(g)[Problem.parse(problem)]
