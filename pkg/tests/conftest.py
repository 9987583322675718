import random

import pytest

from ccp.graph import ColoredGraph


def random_graph(rng: random.Random, n: int, p: float, k: int) -> ColoredGraph:
    colors = [rng.randrange(k) for _ in range(n)]
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return ColoredGraph.build(n, edges, [f"c{c}" for c in colors])


def oracle_corpus(count: int, seed: int = 0, n_range=(4, 10), densities=(0.3, 0.5, 0.8)):
    """Seeded instances with n in ``n_range`` and |C| drawn from [2, n]."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(*n_range)
        p = densities[i % len(densities)]
        k = rng.randint(2, n)
        out.append(random_graph(rng, n, p, k))
    return out


@pytest.fixture
def rng():
    return random.Random(1234)


def random_point(rng: random.Random, g: ColoredGraph):
    """Random slot assignment with either the derived or a random kept-edge set."""
    from ccp.separation import IntegerPoint
    from ccp.solution import Partition

    q = rng.randint(1, g.n)
    p = Partition(tuple(rng.randrange(q) for _ in range(g.n)), q)
    if rng.random() < 0.5:
        return IntegerPoint.derived(g, p)
    return IntegerPoint.of(p, [e for e in g.edges if rng.random() < 0.5])


ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, title: str, ok: bool, detail: str) -> str:
    line = f"criterion {criterion} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
