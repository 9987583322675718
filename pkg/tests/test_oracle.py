import pytest

from ccp import fixtures as fx
from ccp.oracle import OracleTooLarge, enumerate_optima, oracle_all, restricted_growth_strings
from ccp.solution import Partition, Problem, check_feasible, objective

from conftest import random_graph


@pytest.mark.parametrize("n, bell", [(0, 1), (1, 1), (3, 5), (5, 52), (7, 877)])
def test_restricted_growth_strings_count_bell_numbers(n, bell):
    strings = list(restricted_growth_strings(n))
    assert len(strings) == bell == len(set(strings))


def test_tricolor_triangle_single_slot():
    r = oracle_all(fx.tricolor_triangle())
    assert (r[Problem.MOP].optimum, r[Problem.MEC].optimum, r[Problem.MCC].optimum) == (3, 3, 1)
    for res in r.values():
        assert [p.assignment for p in res.optima] == [(0, 0, 0)]


def test_conflict_triangle():
    r = oracle_all(fx.conflict_triangle())
    assert r[Problem.MOP].optimum == 1
    assert {p.assignment for p in r[Problem.MOP].optima} == {(0, 1, 1), (0, 1, 0)}
    assert r[Problem.MEC].optimum == 1
    assert r[Problem.MCC].optimum == 2


def test_path3():
    r = oracle_all(fx.path3())
    assert (r[Problem.MOP].optimum, r[Problem.MEC].optimum, r[Problem.MCC].optimum) == (1, 1, 2)


def test_optima_are_feasible_and_optimal(rng):
    for _ in range(20):
        g = random_graph(rng, rng.randint(3, 7), 0.5, rng.randint(2, 4))
        for problem, res in oracle_all(g).items():
            assert res.optima
            for p in res.optima:
                assert check_feasible(g, p, problem.needs_connectivity).ok
                assert objective(g, p, problem) == res.optimum


def test_feasible_count_matches_rgs_filter():
    g = fx.path3()
    colorful = 0
    for a in [(0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1), (0, 1, 2)]:
        colorful += check_feasible(g, Partition(a), False).ok
    assert oracle_all(g)[Problem.MOP].feasible_count == colorful


def test_size_guard():
    g = fx.graph(13, [], "ABCDEFGHIJKLM")
    with pytest.raises(OracleTooLarge):
        enumerate_optima(g, "mop")


def test_verify_examples_all_hold():
    rows = fx.verify_examples()
    bad = [r for r in rows if not r[3]]
    assert not bad, bad
    assert len(rows) >= 15

