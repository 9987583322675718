import io
import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ccp import fixtures as fx
from ccp.graph import (
    ColoredGraph,
    InstanceFormatError,
    connected_components,
    cut_edges,
    edge_connectivity,
    format_instance,
    induced_subgraph,
    parse_instance,
    write_instance,
)

TRIANGLE = "p ccp 3 3 3\nc 1 1\nc 2 2\nc 3 3\ne 1 2\ne 1 3\ne 2 3\n"


def test_parse_triangle():
    g = parse_instance(TRIANGLE)
    assert g.n == 3 and g.m == 3 and g.num_colors == 3
    assert g.edges == ((0, 1), (0, 2), (1, 2))


def test_parse_comments_and_blank_lines():
    text = "# header next\n\n" + TRIANGLE.replace("e 1 3", "e 1 3  # trailing")
    assert parse_instance(text) == parse_instance(TRIANGLE)


def test_parse_five_node_shape():
    text = "p ccp 5 4 3\nc 1 A\nc 2 C\nc 3 A\nc 4 B\nc 5 B\ne 1 2\ne 2 3\ne 3 4\ne 4 5\n"
    g = parse_instance(text)
    sizes = sorted(bin(m).count("1") for m in g.color_masks)
    assert sizes == [1, 2, 2]
    assert g.color_names == ("A", "C", "B")


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        (TRIANGLE.replace("e 2 3", "e 1 1"), 7, "self-loop"),
        (TRIANGLE.replace("p ccp 3 3 3", "p graph 3 3 3"), 1, "header"),
        (TRIANGLE.replace("e 2 3", "e 2 4"), 7, "out of range"),
        (TRIANGLE.replace("e 2 3", "e 2 1"), 7, "duplicate"),
        (TRIANGLE.replace("c 3 3\n", ""), 1, "missing color"),
        (TRIANGLE.replace("e 2 3\n", ""), 1, "declares 3 edges"),
        (TRIANGLE.replace("c 3 3", "c 3 1"), 1, "declares 3 colors"),
        (TRIANGLE.replace("c 2 2", "x 2 2"), 3, "unknown line"),
    ],
)
def test_parse_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(InstanceFormatError) as err:
        parse_instance(text)
    assert err.value.line == line
    assert fragment in str(err.value)


def test_colors_compacted_by_first_appearance():
    g = parse_instance("p ccp 3 0 2\nc 1 z\nc 2 a\nc 3 z\n")
    assert g.colors == (0, 1, 0)


def test_write_parse_round_trip():
    g = fx.example2()
    buf = io.StringIO()
    write_instance(g, buf)
    assert buf.getvalue() == format_instance(g)
    assert parse_instance(buf.getvalue()) == g


def test_connected_components_path():
    g = fx.graph(3, [(1, 2), (2, 3)], "ABC")
    assert connected_components(g, []) == [frozenset({0}), frozenset({1}), frozenset({2})]
    assert connected_components(g, [(0, 1)]) == [frozenset({0, 1}), frozenset({2})]
    c4 = fx.cycle4()
    assert connected_components(c4, c4.edges) == [frozenset(range(4))]


def test_induced_subgraph():
    tri = fx.tricolor_triangle()
    h = induced_subgraph(tri, [0, 1])
    assert h.n == 2 and h.edges == ((0, 1),)
    p3 = fx.path3()
    h = induced_subgraph(p3, [0, 2])
    assert h.m == 0 and h.origin == (0, 2)
    g = fx.example1()
    assert induced_subgraph(g, range(g.n)).edges == g.edges


def test_induced_subgraph_origin_composes():
    g = fx.example2()
    h = induced_subgraph(g, [2, 4, 6, 8])
    assert induced_subgraph(h, [1, 3]).origin == (4, 8)


def test_edge_connectivity_examples():
    assert edge_connectivity(fx.cycle4()) == 2
    assert edge_connectivity(fx.graph(4, [(1, 2), (2, 3), (2, 4)], "ABCD")) == 1
    assert edge_connectivity(fx.k4_abab()) == 3
    assert edge_connectivity(fx.graph(2, [], "AB")) == 0
    assert edge_connectivity(fx.graph(1, [], "A")) == float("inf")


def _brute_connectivity(g: ColoredGraph) -> int:
    best = None
    for r in range(1, g.n):
        for u in itertools.combinations(range(g.n), r):
            c = len(cut_edges(g, u))
            best = c if best is None else min(best, c)
    return best


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 7), st.lists(st.booleans(), min_size=21, max_size=21))
def test_edge_connectivity_matches_brute_force(n, bits):
    pairs = list(itertools.combinations(range(n), 2))
    edges = [e for e, b in zip(pairs, bits) if b]
    g = ColoredGraph.build(n, edges, list(range(n)))
    assert edge_connectivity(g) == _brute_connectivity(g)


def test_cut_edges_examples():
    p3 = fx.path3()
    assert cut_edges(p3, [0]) == ((0, 1),)
    assert cut_edges(p3, [1]) == ((0, 1), (1, 2))
    assert len(cut_edges(fx.cycle4(), [0, 2])) == 4
    with pytest.raises(ValueError):
        cut_edges(p3, [])
    with pytest.raises(ValueError):
        cut_edges(p3, [0, 1, 2])


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 8), st.data())
def test_components_partition_nodes(n, data):
    pairs = list(itertools.combinations(range(n), 2))
    edges = data.draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    g = ColoredGraph.build(n, sorted(edges), [0] * n)
    keep = data.draw(st.lists(st.sampled_from(edges), unique=True)) if edges else []
    comps = connected_components(g, keep)
    assert sorted(v for c in comps for v in c) == list(range(n))
    h = nx.Graph()
    h.add_nodes_from(range(n))
    h.add_edges_from(keep)
    assert sorted(map(sorted, comps)) == sorted(map(sorted, nx.connected_components(h)))


def test_build_rejects_self_loop_and_parallel():
    with pytest.raises(ValueError):
        ColoredGraph.build(2, [(0, 0)], "AB")
    with pytest.raises(ValueError):
        ColoredGraph.build(2, [(0, 1), (1, 0)], "AB")
