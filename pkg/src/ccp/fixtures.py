"""Small hand-built instances used by tests, examples and the CLI.

Edge lists use the 1-based ids of the instance format.
"""

from __future__ import annotations

from .graph import ColoredGraph, connected_components
from .oracle import oracle_all
from .solution import Partition, Problem


def graph(n: int, edges, colors) -> ColoredGraph:
    return ColoredGraph.build(n, [(u - 1, v - 1) for u, v in edges], list(colors))


def tricolor_triangle() -> ColoredGraph:
    return graph(3, [(1, 2), (1, 3), (2, 3)], "ABC")


def conflict_triangle() -> ColoredGraph:
    """Triangle with nodes 1 and 2 sharing a color."""
    return graph(3, [(1, 2), (1, 3), (2, 3)], "AAB")


def path3() -> ColoredGraph:
    return graph(3, [(1, 2), (2, 3)], "ABA")


def k4_abab() -> ColoredGraph:
    return graph(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)], "ABAB")


def cycle4(colors="ABCD") -> ColoredGraph:
    return graph(4, [(1, 2), (2, 3), (3, 4), (1, 4)], colors)


def example1() -> ColoredGraph:
    """Nodes 1,3 and 4,5 share colors; MOP cuts {1,2}, MEC cuts {2,3},{2,4}."""
    return graph(6, [(1, 2), (1, 5), (1, 6), (2, 3), (2, 4), (3, 4), (5, 6)], "ACABBD")


def example2() -> ColoredGraph:
    """Nodes 1,3 and 2,8 share colors; isolating {1,2} cuts six edges."""
    edges = [
        (1, 2), (1, 4), (1, 6), (1, 7), (1, 9), (2, 7), (2, 9),
        (3, 4), (3, 5), (4, 5), (5, 6), (6, 7), (7, 9), (8, 9),
    ]
    return graph(9, edges, ["c3", "c8", "c3", "c4", "c5", "c6", "c7", "c8", "c9"])


def example3() -> ColoredGraph:
    """Nodes 1,5 and 2,6 share colors; MCC cuts {3,6},{4,5}."""
    edges = [(1, 3), (2, 4), (3, 4), (3, 6), (4, 5), (5, 6), (5, 7), (6, 7)]
    return graph(7, edges, "ABCDABE")


def g_pre() -> ColoredGraph:
    """Two ABCD 4-cycles joined by {2,5} and {3,8}."""
    edges = [(1, 2), (2, 3), (3, 4), (1, 4), (5, 6), (6, 7), (7, 8), (5, 8), (2, 5), (3, 8)]
    return graph(8, edges, "ABCDABCD")


def kept_components(g: ColoredGraph, p: Partition) -> int:
    return len(connected_components(g, p.kept_edges(g)))


def removed(g: ColoredGraph, p: Partition) -> int:
    return g.m - len(p.kept_edges(g))


def closure(p: Partition) -> int:
    return sum(len(b) * (len(b) - 1) // 2 for b in p.blocks())


def verify_examples() -> list[tuple[str, object, object, bool]]:
    """Check the constructed fixtures against the numbers quoted for them.

    Returns ``(label, expected, actual, ok)`` rows.
    """
    rows = []

    def check(label, expected, actual):
        rows.append((label, expected, actual, expected == actual))

    g = example1()
    r = oracle_all(g)
    mop_parts = r[Problem.MOP].optima
    check("ex1 MOP removed edges", 1, removed(g, mop_parts[0]))
    check("ex1 MOP components", [2] * len(mop_parts), [kept_components(g, p) for p in mop_parts])
    check("ex1 MOP partition closure", [6] * len(mop_parts), [closure(p) for p in mop_parts])
    check("ex1 MEC optimum", 7, r[Problem.MEC].optimum)
    check("ex1 MEC removed edges", [2] * len(r[Problem.MEC].optima), [removed(g, p) for p in r[Problem.MEC].optima])
    check("ex1 MEC - MOP closure", 1, r[Problem.MEC].optimum - closure(mop_parts[0]))

    g = example2()
    r = oracle_all(g)
    mop_parts = r[Problem.MOP].optima
    check("ex2 MOP removed edges", 3, g.m - r[Problem.MOP].optimum)
    check("ex2 MOP components", [3] * len(mop_parts), [kept_components(g, p) for p in mop_parts])
    check("ex2 MCC optimum", 2, r[Problem.MCC].optimum)
    isolate = Partition.from_blocks([[0, 1], range(2, 9)], 9)
    check("ex2 MCC isolating {1,2} is optimal", True, isolate.assignment in {p.assignment for p in r[Problem.MCC].optima})
    check("ex2 edges cut to isolate {1,2}", 6, removed(g, isolate))

    g = example3()
    r = oracle_all(g)
    mec_parts = r[Problem.MEC].optima
    check("ex3 MEC optimum", 10, r[Problem.MEC].optimum)
    check("ex3 MEC components", [3] * len(mec_parts), [p.num_nonempty for p in mec_parts])
    check("ex3 MCC optimum", 2, r[Problem.MCC].optimum)
    check("ex3 MCC closure", [9] * len(r[Problem.MCC].optima), [closure(p) for p in r[Problem.MCC].optima])
    return rows
