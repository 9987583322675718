import random

from ccp import fixtures as fx
from ccp.bounds import (
    bound_and_warmstart,
    iter_colorful_sets,
    max_colorful_component,
    max_colorful_matching,
    mcc_bound_and_warmstart,
    mec_bound_and_warmstart,
    mec_edge_cut_rhs,
    mop_bound_and_warmstart,
)
from ccp.oracle import oracle_all
from ccp.solution import Problem, check_feasible, objective

from conftest import random_graph


def two_triangles():
    return fx.graph(6, [(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6)], "ABCABC")


def test_colorful_matching():
    assert len(max_colorful_matching(fx.path3())) == 1
    assert len(max_colorful_matching(fx.tricolor_triangle())) == 1
    assert len(max_colorful_matching(fx.graph(4, [(1, 2), (3, 4)], "ABAB"))) == 2
    assert max_colorful_matching(fx.graph(2, [(1, 2)], "AA")) == []


def test_mop_bounds():
    r = mop_bound_and_warmstart(fx.path3())
    assert r.q_bar == 2
    assert objective(fx.path3(), r.warm_start, "mop") == 1
    assert sorted(map(len, r.warm_start.blocks())) == [1, 2]
    assert mop_bound_and_warmstart(fx.tricolor_triangle()).q_bar == 2
    assert mop_bound_and_warmstart(fx.graph(4, [], "ABCD")).q_bar == 4


def test_max_colorful_component():
    t2 = fx.conflict_triangle()
    assert max_colorful_component(t2) in (frozenset({0, 2}), frozenset({1, 2}))
    assert max_colorful_component(fx.tricolor_triangle()) == frozenset({0, 1, 2})
    assert max_colorful_component(t2, exact_size=3) is None
    assert max_colorful_component(t2, exact_size=1) == frozenset({0})
    assert max_colorful_component(t2, nodes=[]) == frozenset()


def test_max_colorful_component_matches_enumeration():
    rng = random.Random(5)
    for _ in range(40):
        g = random_graph(rng, rng.randint(1, 9), 0.4, rng.randint(1, 5))
        sizes = [bin(s).count("1") for s in iter_colorful_sets(g)]
        best = max_colorful_component(g)
        assert len(best) == max(sizes)
        mask = sum(1 << v for v in best)
        assert g.is_colorful_mask(mask) and g.is_connected_mask(mask)


def test_iter_colorful_sets_unique():
    g = fx.example1()
    sets = list(iter_colorful_sets(g))
    assert len(sets) == len(set(sets))
    assert all(g.is_colorful_mask(s) and g.is_connected_mask(s) for s in sets)
    assert len([s for s in sets if bin(s).count("1") == 1]) == 6


def test_mec_bounds():
    r = mec_bound_and_warmstart(fx.tricolor_triangle())
    assert (r.q_bar, r.edge_cut_rhs) == (1, 2)
    r = mec_bound_and_warmstart(fx.conflict_triangle())
    assert r.q_bar == 2 and len(r.components[0]) == 2
    assert mec_bound_and_warmstart(two_triangles()).q_bar == 2


def test_mcc_bounds():
    r = mcc_bound_and_warmstart(fx.tricolor_triangle())
    assert (r.q_bar, r.edge_cut_rhs) == (1, 2)
    r = mcc_bound_and_warmstart(fx.conflict_triangle())
    assert (r.q_bar, r.edge_cut_rhs) == (2, 1)
    assert sorted(map(len, r.components)) == [1, 2]
    r = mcc_bound_and_warmstart(fx.graph(3, [], "AAA"))
    assert (r.q_bar, r.edge_cut_rhs) == (3, 0)


def test_mec_edge_cut_rhs():
    assert mec_edge_cut_rhs(fx.tricolor_triangle()) == 2
    assert mec_edge_cut_rhs(fx.graph(1, [], "A")) == 0
    assert mec_edge_cut_rhs(fx.conflict_triangle()) == 1


def test_warm_starts_feasible_and_within_bound():
    rng = random.Random(9)
    for _ in range(60):
        g = random_graph(rng, rng.randint(2, 8), rng.choice([0.3, 0.6]), rng.randint(2, 5))
        opt = oracle_all(g)
        for problem in Problem:
            r = bound_and_warmstart(g, problem)
            assert check_feasible(g, r.warm_start, problem.needs_connectivity).ok
            assert r.warm_start.num_nonempty <= r.q_bar
            val = objective(g, r.warm_start, problem)
            best = opt[problem].optimum
            assert val <= best if problem.maximize else val >= best
            # some optimum uses at most q_bar slots
            assert min(p.num_nonempty for p in opt[problem].optima) <= r.q_bar
            if r.edge_cut_rhs is not None:
                assert max(len(p.kept_edges(g)) for p in opt[problem].optima) >= r.edge_cut_rhs


def test_matching_bound_is_tight_for_mop_slot_count():
    g = fx.graph(4, [(1, 2), (2, 3), (3, 4)], "ABAB")
    r = mop_bound_and_warmstart(g)
    assert r.q_bar == 2
    assert sorted(tuple(sorted(b)) for b in r.warm_start.blocks()) == [(0, 1), (2, 3)]


def test_components_cover_nodes():
    g = fx.example2()
    for problem in Problem:
        r = bound_and_warmstart(g, problem)
        assert sorted(v for b in r.components for v in b) == list(range(g.n))
