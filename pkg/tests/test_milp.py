import itertools
import random
from pathlib import Path

import pytest

from ccp import fixtures as fx
from ccp.graph import ColoredGraph
from ccp.milp import (
    ModelConfig,
    build_model,
    connectivity_row,
    expected_row_counts,
    lp_text,
    parse_lp,
    path_row,
    point_values,
    validate_point,
    xname,
    yname,
    zname,
)
from ccp.oracle import oracle_all
from ccp.solution import Partition, Problem, check_feasible

from conftest import random_graph

GOLDEN = Path(__file__).parent / "golden" / "tricolor_mop_q3.lp"


def P(blocks, n, q=0):
    return Partition.from_blocks([[v - 1 for v in b] for b in blocks], n, q)


def three_node_two_colors():
    return fx.conflict_triangle()


def test_row_counts_small_mop():
    m = build_model(three_node_two_colors(), ModelConfig("mop", q=3))
    assert m.row_counts == {
        "assignment": 3, "color": 6, "fortet": 27, "edge": 3,
        "symmetry": 0, "keep_edge": 0, "edge_count": 0, "mcc_w": 0, "total": 39,
    }
    assert m.num_rows == 39


def test_index_symmetry_adds_one_row_per_node():
    m = build_model(three_node_two_colors(), ModelConfig("mop", q=3, symmetry="index"))
    assert m.row_counts["total"] == 42
    rows = {r.name: r for r in m.constraints if r.name.startswith("symidx")}
    assert [v for v, _ in rows["symidx_2"].terms] == ["x_2_1", "x_2_2"]
    assert rows["symidx_1"].sense == "="


def test_mcc_adds_w_variables_and_rows():
    m = build_model(three_node_two_colors(), ModelConfig("mcc", q=3, connectivity="aggregated"))
    assert m.row_counts["mcc_w"] == 3
    assert [v for v, _ in m.variables if v.startswith("w_")] == ["w_1", "w_2", "w_3"]
    w1 = next(r for r in m.constraints if r.name == "wlink_1")
    assert dict(w1.terms)["w_1"] == 3.0 and w1.sense == ">="
    assert m.sense == "min" and set(m.objective) == {"w_1", "w_2", "w_3"}


def test_variable_names_unique_and_rows_reference_declared():
    g = fx.example1()
    for problem in Problem:
        cfg = ModelConfig(problem, q=4, connectivity="aggregated", symmetry="cardinality", keep_edge_cuts=True,
                          edge_count_cut_rhs=2)
        m = build_model(g, cfg)
        names = [v for v, _ in m.variables]
        assert len(names) == len(set(names))
        declared = set(names)
        for row in m.constraints:
            assert {v for v, _ in row.terms} <= declared
        assert set(m.objective) <= declared


def test_variable_scheme():
    assert (xname(0, 0), yname(2, 1), zname(0, 3, 1)) == ("x_1_1", "y_2_3", "z_1_4_2")


def test_mec_mcc_require_connectivity():
    with pytest.raises(ValueError):
        ModelConfig("mec", q=2)
    with pytest.raises(ValueError):
        ModelConfig("mop", q=0)


def test_row_counts_closed_form_random():
    rng = random.Random(7)
    for _ in range(40):
        n = rng.randint(1, 7)
        k = rng.randint(1, n)
        pairs = list(itertools.combinations(range(n), 2))
        edges = sorted(rng.sample(pairs, rng.randint(0, len(pairs))))
        colors = list(range(k)) + [rng.randrange(k) for _ in range(n - k)]
        g = ColoredGraph.build(n, edges, colors)
        problem = rng.choice(list(Problem))
        cfg = ModelConfig(
            problem,
            q=rng.randint(1, n),
            connectivity="none" if problem is Problem.MOP else "disaggregated",
            edge_vs_path=rng.choice(["edge", "path"]),
            symmetry=rng.choice(["none", "cardinality", "index"]),
            keep_edge_cuts=rng.random() < 0.5,
            edge_count_cut_rhs=rng.choice([None, 1]),
        )
        m = build_model(g, cfg)
        assert m.row_counts == expected_row_counts(n, len(edges), k, cfg)
        assert m.num_rows == m.row_counts["total"]


def test_golden_lp_is_byte_identical():
    g = fx.tricolor_triangle()
    a = lp_text(build_model(g, ModelConfig("mop", q=3)))
    b = lp_text(build_model(g, ModelConfig("mop", q=3)))
    assert a == b == GOLDEN.read_text()


def test_single_node_model_exports_and_parses():
    g = fx.graph(1, [], "A")
    m = build_model(g, ModelConfig("mop", q=1))
    assert m.num_rows == 2  # assignment + color
    parsed = parse_lp(lp_text(m))
    assert [r.name for r in parsed.constraints] == ["assign_1", "color_1_1"]
    assert parsed.objective == {}


@pytest.mark.parametrize("problem", list(Problem))
def test_lp_round_trip(problem):
    g = fx.example3()
    cfg = ModelConfig(problem, q=3, connectivity="none" if problem is Problem.MOP else "aggregated",
                      symmetry="index", keep_edge_cuts=True, edge_count_cut_rhs=3)
    m = build_model(g, cfg)
    parsed = parse_lp(lp_text(m))
    assert parsed.sense == m.sense
    assert parsed.objective == m.objective
    assert len(parsed.constraints) == m.row_counts["total"]
    for a, b in zip(parsed.constraints, m.constraints):
        assert (a.name, a.sense, a.rhs, a.terms) == (b.name, b.sense, float(b.rhs), tuple((v, float(c)) for v, c in b.terms))
    assert set(parsed.binaries) | set(parsed.bounded) == m.variable_names()


def test_long_rows_are_wrapped():
    g = ColoredGraph.build(20, list(itertools.combinations(range(20), 2)), list(range(20)))
    m = build_model(g, ModelConfig("mop", q=1, edge_count_cut_rhs=1))
    text = lp_text(m)
    assert max(len(line) for line in text.splitlines()) <= 200
    assert any(line.startswith("   ") for line in text.splitlines())
    row = next(r for r in parse_lp(text).constraints if r.name == "edgecount")
    assert len(row.terms) == 190


def test_conflict_triangle_rows_by_point():
    g = three_node_two_colors()
    cfg = ModelConfig("mop", q=3)
    m = build_model(g, cfg)
    assert validate_point(m, g, P([[1], [2, 3]], 3, 3)) == []
    bad = validate_point(m, g, P([[1, 2], [3]], 3, 3))
    assert [v.row for v in bad] == ["color_1_1"]


def test_disaggregated_path_witness():
    g = fx.path3()
    cfg = ModelConfig("mec", q=2, connectivity="disaggregated")
    m = build_model(g, cfg)
    bad = validate_point(m, g, P([[1, 3], [2]], 3, 2))
    names = {v.row for v in bad}
    assert "conn_U_1_1_3_1" in names
    assert "color_1_1" in names


def test_validate_marks_partial_above_limit():
    g = fx.graph(5, [(1, 2)], "ABCDE")
    cfg = ModelConfig("mec", q=5, connectivity="aggregated")
    res = validate_point(build_model(g, cfg), g, Partition((0, 0, 1, 2, 3), 5), limit=4)
    assert res.partial and res == []


def test_feasible_points_satisfy_every_row():
    rng = random.Random(3)
    for _ in range(15):
        g = random_graph(rng, rng.randint(3, 7), 0.5, rng.randint(2, 4))
        for problem, res in oracle_all(g).items():
            p = res.optima[0]
            q = max(p.q, 1)
            conn = "none" if problem is Problem.MOP else rng.choice(["aggregated", "disaggregated"])
            cfg = ModelConfig(problem, q=q, connectivity=conn, edge_vs_path=rng.choice(["edge", "path"]),
                              keep_edge_cuts=True)
            assert validate_point(build_model(g, cfg), g, p) == []


def test_lazy_rows_detect_disconnected_slot():
    g = fx.graph(4, [(1, 2), (3, 4)], "ABCD")
    p = P([[1, 2, 3, 4]], 4, 1)
    assert check_feasible(g, p, False).ok
    for conn in ("aggregated", "disaggregated"):
        cfg = ModelConfig("mec", q=1, connectivity=conn)
        assert validate_point(build_model(g, cfg), g, p)


def test_connectivity_and_path_rows():
    g = fx.path3()
    row = connectivity_row(g, [0], 2)
    vals = point_values(g, P([[1, 3], [2]], 3, 2), 2, kept=[])
    assert row.violated(vals)
    prow = path_row((0, 1, 2), 2)
    vals = point_values(g, Partition((0, 0, 1), 2), 2, kept=[(0, 1), (1, 2)])
    assert prow.violated(vals)
