"""Slot-count bounds and warm starts for the three problems.

Maximum colorful matching bounds MOP, maximum-cardinality colorful
components bound MEC (greedy extraction at a fixed size) and MCC (greedy
peeling). Both searches are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import networkx as nx

from .graph import ColoredGraph, mask_of, nodes_of, popcount
from .solution import Partition, Problem


@dataclass(frozen=True)
class BoundsResult:
    q_bar: int
    warm_start: Partition
    edge_cut_rhs: int | None = None
    provenance: str = ""
    components: tuple[frozenset[int], ...] = field(default=())


# ------------------------------------------------ connected colorful sets


def _reach(g: ColoredGraph, start: int, within: int) -> int:
    """Nodes of ``within`` reachable from ``start`` through ``within``."""
    seen = 0
    frontier = start
    while frontier:
        nxt = 0
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            nxt |= g.adj[low.bit_length() - 1]
        nxt &= within & ~seen
        seen |= nxt
        frontier = nxt
    return seen


def _distinct_colors(g: ColoredGraph, mask: int) -> int:
    return sum(1 for cm in g.color_masks if cm & mask)


def iter_colorful_sets(g: ColoredGraph, within: int | None = None, max_size: int | None = None) -> Iterator[int]:
    """Every connected colorful node set inside ``within``, as a mask, once each."""
    within = g.full_mask if within is None else within
    colors, cmasks, adj = g.colors, g.color_masks, g.adj
    for r in nodes_of(within):
        allowed = within & ~((2 << r) - 1)
        stack = [(1 << r, cmasks[colors[r]], 0, 1)]
        while stack:
            s, conflict, excl, size = stack.pop()
            nb = 0
            rest = s
            while rest:
                low = rest & -rest
                rest ^= low
                nb |= adj[low.bit_length() - 1]
            frontier = nb & allowed & ~s & ~excl & ~conflict
            if frontier == 0 or (max_size is not None and size >= max_size):
                yield s
                continue
            low = frontier & -frontier
            u = low.bit_length() - 1
            stack.append((s, conflict, excl | low, size))
            stack.append((s | low, conflict | cmasks[colors[u]], excl, size + 1))


def _best_colorful(g: ColoredGraph, within: int, exact: int | None) -> int | None:
    """Largest (or exactly ``exact``-sized) connected colorful set in ``within``.

    Ties go to the lexicographically smallest sorted node tuple.
    """
    colors, cmasks, adj = g.colors, g.color_masks, g.adj
    best = None
    best_key: tuple = ()
    best_size = 0
    for r in nodes_of(within):
        if exact is None and best is not None and best_size >= g.num_colors:
            break
        if exact is not None and best is not None:
            break
        allowed = within & ~((2 << r) - 1)
        stack = [(1 << r, cmasks[colors[r]], 0, 1)]
        while stack:
            s, conflict, excl, size = stack.pop()
            cand = allowed & ~s & ~excl & ~conflict
            reach = _reach(g, s, cand)
            ub = size + _distinct_colors(g, reach)
            if exact is not None:
                if ub < exact:
                    continue
            elif best is not None and (ub < best_size or (ub == best_size and best_rooted_before(best, r))):
                continue
            if exact is not None and size == exact:
                key = tuple(nodes_of(s))
                if best is None or key < best_key:
                    best, best_key = s, key
                continue
            nb = 0
            rest = s
            while rest:
                low = rest & -rest
                rest ^= low
                nb |= adj[low.bit_length() - 1]
            frontier = nb & cand
            if frontier == 0:
                if exact is None:
                    key = tuple(nodes_of(s))
                    if best is None or size > best_size or (size == best_size and key < best_key):
                        best, best_key, best_size = s, key, size
                continue
            low = frontier & -frontier
            u = low.bit_length() - 1
            stack.append((s, conflict, excl | low, size))
            stack.append((s | low, conflict | cmasks[colors[u]], excl, size + 1))
    return best


def best_rooted_before(best: int, r: int) -> bool:
    """True when the incumbent's smallest node precedes root ``r``."""
    return (best & -best).bit_length() - 1 < r


def max_colorful_component(
    g: ColoredGraph, exact_size: int | None = None, nodes=None
) -> frozenset[int] | None:
    """Maximum-cardinality connected colorful node set of ``g[nodes]``.

    With ``exact_size`` returns a connected colorful set of exactly that
    size instead. Returns ``None`` when no such set exists and an empty set
    when ``nodes`` is empty.
    """
    within = g.full_mask if nodes is None else mask_of(nodes)
    if within == 0:
        return frozenset()
    if exact_size is not None and (exact_size < 1 or exact_size > popcount(within)):
        return None
    found = _best_colorful(g, within, exact_size)
    return None if found is None else frozenset(nodes_of(found))


# ------------------------------------------------------------- matching


def max_colorful_matching(g: ColoredGraph) -> list[tuple[int, int]]:
    """Maximum set of disjoint edges whose endpoints have different colors."""
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from((u, v) for u, v in g.edges if g.colors[u] != g.colors[v])
    matching = nx.max_weight_matching(h, maxcardinality=True)
    return sorted((min(e), max(e)) for e in matching)


def mop_bound_and_warmstart(g: ColoredGraph) -> BoundsResult:
    pairs = max_colorful_matching(g)
    covered = {v for e in pairs for v in e}
    blocks = [frozenset(e) for e in pairs] + [frozenset([v]) for v in range(g.n) if v not in covered]
    q_bar = g.n - len(pairs)
    return BoundsResult(
        q_bar, Partition.from_blocks(sorted(blocks, key=min), g.n).canonical(), None, "matching", tuple(blocks)
    )


def mec_bound_and_warmstart(g: ColoredGraph) -> BoundsResult:
    first = _best_colorful(g, g.full_mask, None)
    size = popcount(first)
    comps = [first]
    remaining = g.full_mask & ~first
    while popcount(remaining) >= size:
        nxt = _best_colorful(g, remaining, size)
        if nxt is None:
            break
        comps.append(nxt)
        remaining &= ~nxt
    blocks = [frozenset(nodes_of(c)) for c in comps] + [frozenset([v]) for v in nodes_of(remaining)]
    q_bar = popcount(remaining) + len(comps)
    return BoundsResult(
        q_bar,
        Partition.from_blocks(sorted(blocks, key=min), g.n).canonical(),
        size - 1,
        "max-cardinality extraction",
        tuple(blocks),
    )


def mcc_bound_and_warmstart(g: ColoredGraph) -> BoundsResult:
    remaining = g.full_mask
    blocks = []
    while remaining:
        s = _best_colorful(g, remaining, None)
        blocks.append(frozenset(nodes_of(s)))
        remaining &= ~s
    rhs = sum(len(b) - 1 for b in blocks)
    return BoundsResult(
        len(blocks),
        Partition.from_blocks(sorted(blocks, key=min), g.n).canonical(),
        rhs,
        "greedy peeling",
        tuple(blocks),
    )


def mec_edge_cut_rhs(g: ColoredGraph) -> int:
    return len(max_colorful_component(g)) - 1


def bound_and_warmstart(g: ColoredGraph, problem: Problem | str) -> BoundsResult:
    problem = Problem.parse(problem)
    return {
        Problem.MOP: mop_bound_and_warmstart,
        Problem.MEC: mec_bound_and_warmstart,
        Problem.MCC: mcc_bound_and_warmstart,
    }[problem](g)
