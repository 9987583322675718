"""MOP instance reduction by removing edge cuts around colorful blocks.

A block S qualifies when g[S] is connected and colorful, g[V \\ S] is
connected, the edge connectivity of g[S] is at least |delta(S)|, and every
color on the far side of the cut already occurs in S. Some MOP optimum then
removes the whole cut, so S can be fixed as a component and dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bounds import iter_colorful_sets
from .graph import ColoredGraph, Edge, induced_subgraph, mask_connectivity, nodes_of, popcount
from .solution import Partition


@dataclass(frozen=True)
class Extraction:
    block: frozenset[int]
    cut: tuple[Edge, ...]
    block_edges: int


@dataclass
class PrepResult:
    original: ColoredGraph
    reduced: ColoredGraph | None  # None when every node was extracted
    kept_nodes: tuple[int, ...]  # original ids of the reduced graph's nodes
    extractions: list[Extraction] = field(default_factory=list)

    @property
    def removed_cuts(self) -> list[tuple[Edge, ...]]:
        return [x.cut for x in self.extractions]

    @property
    def extracted_blocks(self) -> list[frozenset[int]]:
        return [x.block for x in self.extractions]

    @property
    def objective_offset(self) -> int:
        return sum(x.block_edges for x in self.extractions)

    def lift(self, p: Partition | None) -> Partition:
        """Original-graph partition: extracted blocks plus the reduced solution."""
        blocks = [set(b) for b in self.extracted_blocks]
        if p is not None:
            for slot in p.blocks():
                blocks.append({self.kept_nodes[v] for v in slot})
        return Partition.from_blocks(sorted(blocks, key=min), self.original.n).canonical()


def _frontier(g: ColoredGraph, s: int) -> int:
    nb = 0
    rest = s
    while rest:
        low = rest & -rest
        rest ^= low
        nb |= g.adj[low.bit_length() - 1]
    return nb & ~s


def _cut_size(g: ColoredGraph, s: int, within: int) -> int:
    out = within & ~s
    return sum(popcount(g.adj[v] & out) for v in nodes_of(s))


def best_cut_mask(g: ColoredGraph, within: int) -> tuple[int, int] | None:
    """Best qualifying block inside the connected node set ``within``.

    Returns ``(block_mask, cut_size)`` maximizing the cut size, then
    preferring smaller blocks, then the lexicographically smallest block.
    """
    best = None
    best_key = None
    for s in iter_colorful_sets(g, within):
        if s == within:
            continue
        t = _cut_size(g, s, within)
        size = popcount(s)
        key = (-t, size, tuple(nodes_of(s)))
        if best_key is not None and key >= best_key:
            continue
        h = _frontier(g, s) & within
        if h == 0:
            continue
        if g.colors_of_mask(h) & ~g.colors_of_mask(s):
            continue
        if not g.is_connected_mask(within & ~s):
            continue
        if mask_connectivity(g, s) < t:
            continue
        best, best_key = (s, t), key
    return best


def find_best_cut(g: ColoredGraph) -> tuple[tuple[Edge, ...], frozenset[int]] | None:
    """Largest qualifying cut of a connected graph and its block, or ``None``."""
    if not g.is_connected_mask(g.full_mask):
        raise ValueError("find_best_cut expects a connected graph")
    found = best_cut_mask(g, g.full_mask)
    if found is None:
        return None
    s, _ = found
    cut = tuple(e for e in g.edges if (s >> e[0] & 1) != (s >> e[1] & 1))
    return cut, frozenset(nodes_of(s))


def preprocess_mop(g: ColoredGraph) -> PrepResult:
    """Repeatedly extract qualifying blocks, one connected component at a time."""
    work = g.full_mask
    extractions: list[Extraction] = []
    pending = g.component_masks(work)
    while pending:
        comp = pending.pop(0)
        found = best_cut_mask(g, comp)
        if found is None:
            continue
        s, _ = found
        rest = comp & ~s
        cut = tuple(e for e in g.edges if (s >> e[0] & 1) and (rest >> e[1] & 1) or (s >> e[1] & 1) and (rest >> e[0] & 1))
        extractions.append(Extraction(frozenset(nodes_of(s)), cut, g.edges_within(s)))
        work &= ~s
        pending.insert(0, rest)
    kept = tuple(nodes_of(work))
    reduced = induced_subgraph(g, kept) if kept else None
    return PrepResult(g, reduced, kept, extractions)
