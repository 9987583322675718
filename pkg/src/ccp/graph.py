"""Node-colored graphs and the graph primitives used by every solver stage.

Nodes are 0-based inside the package; instance files and solution files use
1-based ids, and the conversion happens only in the readers and writers.
Node sets are exposed as ``frozenset`` and handled internally as int bitmasks.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence, TextIO

import networkx as nx

Edge = tuple[int, int]
NodeSet = frozenset


class InstanceFormatError(ValueError):
    """Malformed instance text; ``line`` is the 1-based offending line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def mask_of(nodes: Iterable[int]) -> int:
    m = 0
    for v in nodes:
        m |= 1 << v
    return m


def nodes_of(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class ColoredGraph:
    """Immutable undirected graph with one color per node.

    ``colors[v]`` is a dense color index in ``range(num_colors)``;
    ``color_names`` keeps the original tokens. ``origin[v]`` maps a node to
    its index in the root graph it was cut from (identity for parsed graphs).
    """

    n: int
    edges: tuple[Edge, ...]
    colors: tuple[int, ...]
    color_names: tuple[str, ...]
    origin: tuple[int, ...] = ()
    adj: tuple[int, ...] = field(init=False, repr=False, compare=False)
    color_masks: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph needs at least one node")
        if len(self.colors) != self.n:
            raise ValueError("every node needs exactly one color")
        if not self.origin:
            object.__setattr__(self, "origin", tuple(range(self.n)))
        adj = [0] * self.n
        seen = set()
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise ValueError(f"bad edge {(u, v)}")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge {(u, v)}")
            seen.add((u, v))
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        cm = [0] * len(self.color_names)
        for v, c in enumerate(self.colors):
            cm[c] |= 1 << v
        if any(m == 0 for m in cm):
            raise ValueError("color indices must be dense")
        object.__setattr__(self, "adj", tuple(adj))
        object.__setattr__(self, "color_masks", tuple(cm))

    @classmethod
    def build(cls, n: int, edges: Iterable[Sequence[int]], colors: Sequence[Hashable]) -> "ColoredGraph":
        """Build from 0-based edges and arbitrary color labels.

        Labels are compacted to dense indices in order of first appearance.
        """
        index: dict[Hashable, int] = {}
        dense = []
        for c in colors:
            dense.append(index.setdefault(c, len(index)))
        norm = set()
        for e in edges:
            u, v = e
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            a, b = (u, v) if u < v else (v, u)
            if (a, b) in norm:
                raise ValueError(f"duplicate edge {(a, b)}")
            norm.add((a, b))
        return cls(n, tuple(sorted(norm)), tuple(dense), tuple(str(c) for c in index))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def num_colors(self) -> int:
        return len(self.color_names)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def color_classes(self) -> dict[int, frozenset[int]]:
        return {c: frozenset(nodes_of(m)) for c, m in enumerate(self.color_masks)}

    def neighbors(self, v: int) -> list[int]:
        return nodes_of(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def colors_of_mask(self, mask: int) -> int:
        """Bitmask over color indices present in ``mask``."""
        cm = 0
        for c, m in enumerate(self.color_masks):
            if m & mask:
                cm |= 1 << c
        return cm

    def is_colorful_mask(self, mask: int) -> bool:
        return all(popcount(m & mask) <= 1 for m in self.color_masks)

    def edges_within(self, mask: int) -> int:
        total = 0
        rest = mask
        while rest:
            low = rest & -rest
            rest ^= low
            total += popcount(self.adj[low.bit_length() - 1] & rest)
        return total

    def component_of(self, v: int, within: int) -> int:
        """Mask of the component of ``v`` in the subgraph induced by ``within``."""
        comp = 1 << v
        frontier = comp
        while frontier:
            nxt = 0
            while frontier:
                low = frontier & -frontier
                frontier ^= low
                nxt |= self.adj[low.bit_length() - 1]
            nxt &= within & ~comp
            comp |= nxt
            frontier = nxt
        return comp

    def is_connected_mask(self, mask: int) -> bool:
        if mask == 0:
            return False
        low = mask & -mask
        return self.component_of(low.bit_length() - 1, mask) == mask

    def component_masks(self, within: int) -> list[int]:
        out = []
        rest = within
        while rest:
            low = rest & -rest
            comp = self.component_of(low.bit_length() - 1, within)
            out.append(comp)
            rest &= ~comp
        return out

    def to_networkx(self) -> nx.Graph:
        h = nx.Graph()
        h.add_nodes_from(range(self.n))
        h.add_edges_from(self.edges)
        return h


def parse_instance(stream: TextIO | str) -> ColoredGraph:
    """Read the ``p ccp`` line format; node ids in the text are 1-based."""
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    header = None
    colors: dict[int, str] = {}
    edges: list[Edge] = []
    seen_edges: set[Edge] = set()
    for lineno, raw in enumerate(stream, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kind = tok[0]
        if header is None:
            if kind != "p" or len(tok) != 5 or tok[1] != "ccp":
                raise InstanceFormatError("expected header 'p ccp <n> <m> <k>'", lineno)
            try:
                header = tuple(int(t) for t in tok[2:])
            except ValueError:
                raise InstanceFormatError("non-integer header field", lineno) from None
            if header[0] < 1 or header[1] < 0 or header[2] < 1:
                raise InstanceFormatError("header counts out of range", lineno)
            header_line = lineno
            continue
        n = header[0]
        if kind == "c":
            if len(tok) != 3:
                raise InstanceFormatError("expected 'c <node> <color>'", lineno)
            v = _node(tok[1], n, lineno)
            if v in colors:
                raise InstanceFormatError(f"node {v + 1} colored twice", lineno)
            colors[v] = tok[2]
        elif kind == "e":
            if len(tok) != 3:
                raise InstanceFormatError("expected 'e <u> <v>'", lineno)
            u, v = _node(tok[1], n, lineno), _node(tok[2], n, lineno)
            if u == v:
                raise InstanceFormatError(f"self-loop on node {u + 1}", lineno)
            e = (min(u, v), max(u, v))
            if e in seen_edges:
                raise InstanceFormatError(f"duplicate edge {e[0] + 1} {e[1] + 1}", lineno)
            seen_edges.add(e)
            edges.append(e)
        else:
            raise InstanceFormatError(f"unknown line type {kind!r}", lineno)
    if header is None:
        raise InstanceFormatError("missing header", None)
    n, m, k = header
    missing = [v + 1 for v in range(n) if v not in colors]
    if missing:
        raise InstanceFormatError(f"missing color line for node {missing[0]}", header_line)
    if len(edges) != m:
        raise InstanceFormatError(f"header declares {m} edges, found {len(edges)}", header_line)
    if len(set(colors.values())) != k:
        raise InstanceFormatError(
            f"header declares {k} colors, found {len(set(colors.values()))}", header_line
        )
    return ColoredGraph.build(n, edges, [colors[v] for v in range(n)])


def _node(token: str, n: int, lineno: int) -> int:
    try:
        v = int(token)
    except ValueError:
        raise InstanceFormatError(f"bad node id {token!r}", lineno) from None
    if not 1 <= v <= n:
        raise InstanceFormatError(f"node {v} out of range 1..{n}", lineno)
    return v - 1


def format_instance(g: ColoredGraph) -> str:
    lines = [f"p ccp {g.n} {g.m} {g.num_colors}"]
    lines += [f"c {v + 1} {g.color_names[g.colors[v]]}" for v in range(g.n)]
    lines += [f"e {u + 1} {v + 1}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def write_instance(g: ColoredGraph, sink: TextIO) -> None:
    sink.write(format_instance(g))


def connected_components(g: ColoredGraph, keep: Iterable[Edge]) -> list[frozenset[int]]:
    """Components of ``(V, keep)``, singletons included, ordered by smallest node."""
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in keep:
        if not g.has_edge(u, v):
            raise ValueError(f"{(u, v)} is not an edge of the graph")
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    groups: dict[int, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(find(v), []).append(v)
    return [frozenset(vs) for _, vs in sorted(groups.items(), key=lambda kv: kv[1][0])]


def induced_subgraph(g: ColoredGraph, s: Iterable[int]) -> ColoredGraph:
    """Subgraph on ``s`` relabeled to ``0..|s|-1`` in ascending order.

    Colors keep their names; ``origin`` still points into the root graph.
    """
    nodes = sorted(set(s))
    if not nodes:
        raise ValueError("induced subgraph of an empty node set")
    pos = {v: i for i, v in enumerate(nodes)}
    edges = [(pos[u], pos[v]) for u, v in g.edges if u in pos and v in pos]
    sub = ColoredGraph.build(len(nodes), edges, [g.color_names[g.colors[v]] for v in nodes])
    return ColoredGraph(
        sub.n, sub.edges, sub.colors, sub.color_names, tuple(g.origin[v] for v in nodes)
    )


def cut_edges(g: ColoredGraph, u: Iterable[int]) -> tuple[Edge, ...]:
    """The edges with exactly one endpoint in ``u``."""
    um = mask_of(u)
    if um == 0 or um == g.full_mask:
        raise ValueError("cut side must be a nonempty proper subset")
    return tuple(e for e in g.edges if (um >> e[0] & 1) != (um >> e[1] & 1))


def cut_size_mask(g: ColoredGraph, mask: int) -> int:
    total = 0
    out = ~mask
    rest = mask
    while rest:
        low = rest & -rest
        rest ^= low
        total += popcount(g.adj[low.bit_length() - 1] & out)
    return total


def edge_connectivity(g: ColoredGraph) -> float:
    """Size of a global minimum edge cut (Stoer-Wagner).

    A single node has no cut and returns ``math.inf``; a disconnected graph
    returns 0.
    """
    if g.n == 1:
        return math.inf
    if not g.is_connected_mask(g.full_mask):
        return 0
    if g.m == g.n - 1:
        return 1
    value, _ = nx.stoer_wagner(g.to_networkx())
    return value


def mask_connectivity(g: ColoredGraph, mask: int) -> float:
    """``edge_connectivity`` of the subgraph induced by ``mask``."""
    nodes = nodes_of(mask)
    if len(nodes) == 1:
        return math.inf
    if not g.is_connected_mask(mask):
        return 0
    m = g.edges_within(mask)
    if m == len(nodes) - 1:
        return 1
    h = nx.Graph()
    h.add_nodes_from(nodes)
    for v in nodes:
        for u in nodes_of(g.adj[v] & mask):
            if u > v:
                h.add_edge(v, u)
    value, _ = nx.stoer_wagner(h)
    return value
