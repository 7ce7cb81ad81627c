import pytest

from app.errors import DegreeBoundError
from app.services.bounded_service import solve_bounded
from app.services.consistency_service import make_arc_consistent
from app.services.digraph_service import Digraph, reverse
from app.services.oracle_service import exists_homomorphism
from app.services.target_service import TargetGraph, build_target, is_homomorphism, respects_lists
from tests.conftest import cycle, digon, random_digraph, random_lists

DIGON = TargetGraph(digon(), "digon")


def test_digon_into_a():
    f = solve_bounded(digon(), None, build_target("A"))
    assert set(f) == {0, 1}


def test_single_arc_smallest_first():
    assert solve_bounded(Digraph(2, [(0, 1)]), None, build_target("A")) == (0, 1)


def test_empty_list_gives_none():
    assert solve_bounded(Digraph(1), [frozenset()], build_target("C")) is None


def test_directed_triangle_into_a():
    f = solve_bounded(cycle(3), None, build_target("A"))
    assert f in {(0, 2, 1), (2, 1, 0), (1, 0, 2)}


def test_cycles_against_digon():
    assert solve_bounded(cycle(5), None, DIGON) is None
    f = solve_bounded(cycle(4), None, DIGON)
    assert f is not None and is_homomorphism(cycle(4), DIGON, f)


def test_out_branching_into_c():
    g = Digraph(7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)])
    f = solve_bounded(g, None, build_target("C"))
    assert is_homomorphism(g, build_target("C"), f)


def test_tree_extends_singleton():
    g = Digraph(3, [(0, 1), (1, 2)])
    lists = [frozenset({0, 1, 2}), frozenset({2}), frozenset({0, 1, 2})]
    f = solve_bounded(g, lists, build_target("A"))
    assert f[1] == 2
    assert respects_lists(f, lists)


def test_degree_precondition():
    g = Digraph(3, [(0, 2), (1, 2), (2, 0), (2, 1)])
    with pytest.raises(DegreeBoundError):
        solve_bounded(g, None, build_target("A"))


def test_in_branching_graphs_are_solved_by_reversal():
    g = Digraph(4, [(1, 0), (2, 0), (3, 1), (0, 3)])
    f = solve_bounded(g, None, build_target("A"))
    assert f is not None and is_homomorphism(g, build_target("A"), f)


def test_shrinking_lists_never_helps(rng, target):
    for _ in range(40):
        g = random_digraph(rng, rng.randint(1, 10), 2, 1)
        lists = random_lists(rng, g.n)
        if solve_bounded(g, lists, target) is None:
            smaller = [frozenset(sorted(l)[:1]) for l in lists]
            assert solve_bounded(g, smaller, target) is None


def test_cycle_components_respect_arc_consistent_lists(rng):
    a = build_target("A")
    for _ in range(30):
        g = random_digraph(rng, 8, 2, 1, density=0.8)
        lists = make_arc_consistent(g, random_lists(rng, g.n), a)
        f = solve_bounded(g, lists, a)
        if f is not None:
            assert respects_lists(f, lists)


@pytest.mark.parametrize("mirror", [False, True])
def test_agrees_with_exact_oracle(rng, target, mirror):
    for _ in range(500):
        g = random_digraph(rng, rng.randint(1, 12), 2, 1, density=rng.uniform(0.2, 0.9))
        if mirror:
            g = reverse(g)
        lists = random_lists(rng, g.n)
        f = solve_bounded(g, lists, target)
        assert (f is not None) == exists_homomorphism(g, target, lists)
        if f is not None:
            assert is_homomorphism(g, target, f)
            assert respects_lists(f, lists)
