import pytest

from app.errors import FormatError, ListsError
from app.services.consistency_service import (
    check_lists,
    format_lists,
    has_empty,
    make_arc_consistent,
    parse_lists,
    revise_arc,
)
from app.services.digraph_service import Digraph
from app.services.oracle_service import enumerate_homomorphisms, exists_homomorphism
from app.services.target_service import TargetGraph, build_target
from tests.conftest import cycle, random_digraph, random_lists

FULL = frozenset({0, 1, 2})
DIGON = TargetGraph(Digraph(2, [(0, 1), (1, 0)]), "digon")


def test_revise_arc_prunes_against_in_neighbours():
    lists, changed = revise_arc(0, 1, [FULL, frozenset({0})], build_target("A"))
    assert changed
    assert lists == (frozenset({1}), frozenset({0}))


def test_revise_arc_empties_both_sides():
    lists, changed = revise_arc(0, 1, [frozenset({1}), frozenset({1})], build_target("A"))
    assert changed
    assert lists == (frozenset(), frozenset())


def test_revise_arc_full_lists_on_c_unchanged():
    lists, changed = revise_arc(0, 1, [FULL, FULL], build_target("C"))
    assert not changed
    assert lists == (FULL, FULL)


def test_odd_cycle_against_digon_is_arc_consistent_but_not_colorable():
    g = cycle(5)
    lists = make_arc_consistent(g, [frozenset({0, 1})] * 5, DIGON)
    assert lists == (frozenset({0, 1}),) * 5
    assert not has_empty(lists)
    assert not exists_homomorphism(g, DIGON)


def test_pinning_odd_cycle_against_digon_empties_a_list():
    g = cycle(5)
    lists = make_arc_consistent(g, [frozenset({0})] + [frozenset({0, 1})] * 4, DIGON)
    assert has_empty(lists)


def test_pinning_even_cycle_against_digon_alternates():
    g = cycle(4)
    lists = make_arc_consistent(g, [frozenset({0})] + [frozenset({0, 1})] * 3, DIGON)
    assert lists == (frozenset({0}), frozenset({1}), frozenset({0}), frozenset({1}))


def test_isolated_vertex_list_unchanged(target):
    g = Digraph(3, [(0, 1)])
    lists = make_arc_consistent(g, [FULL, FULL, frozenset({2})], target)
    assert lists[2] == frozenset({2})


def test_arc_consistency_is_sound_and_idempotent(rng, target):
    for _ in range(60):
        g = random_digraph(rng, rng.randint(1, 8), 2, 2)
        lists = random_lists(rng, g.n)
        narrowed = make_arc_consistent(g, lists, target)
        for f in enumerate_homomorphisms(g, target, lists, prune=False):
            assert all(x in narrowed[v] for v, x in enumerate(f))
        assert make_arc_consistent(g, narrowed, target) == narrowed
        assert all(n <= l for n, l in zip(narrowed, lists))


def test_arc_order_does_not_change_fixpoint(rng, target):
    for _ in range(30):
        g = random_digraph(rng, rng.randint(2, 8), 2, 2)
        lists = random_lists(rng, g.n)
        order = list(range(len(g.arc_list)))
        rng.shuffle(order)
        assert make_arc_consistent(g, lists, target, order=order) == make_arc_consistent(g, lists, target)


def test_check_lists_rejects_foreign_colors():
    with pytest.raises(ListsError):
        check_lists(Digraph(1), build_target("A"), [{5}])
    with pytest.raises(ListsError):
        check_lists(Digraph(2), build_target("A"), [FULL])


def test_lists_text_format():
    g, a = Digraph(3, [(0, 1)]), build_target("A")
    lists = parse_lists("# pins\n1: 0\n2:\n", g, a)
    assert lists == (FULL, frozenset({0}), frozenset())
    assert format_lists(lists) == "0: 0 1 2\n1: 0\n2:\n"


@pytest.mark.parametrize("text", ["1 0\n", "x: 0\n", "4: 0\n", "0: 3\n", "0: 1\n0: 2\n"])
def test_lists_text_errors(text):
    with pytest.raises(FormatError):
        parse_lists(text, Digraph(3), build_target("A"))


def _oriented_tree(rng, n: int) -> Digraph:
    arcs = []
    for v in range(1, n):
        parent = rng.randrange(v)
        arcs.append((parent, v) if rng.random() < 0.5 else (v, parent))
    return Digraph(n, arcs)


def test_arc_consistency_decides_oriented_trees(rng, target):
    for _ in range(80):
        g = _oriented_tree(rng, rng.randint(1, 10))
        lists = random_lists(rng, g.n)
        narrowed = make_arc_consistent(g, lists, target)
        assert (not has_empty(narrowed)) == exists_homomorphism(g, target, lists)


def test_no_arc_changes_at_the_fixpoint(rng, target):
    for _ in range(60):
        g = random_digraph(rng, rng.randint(1, 8), 2, 2)
        narrowed = make_arc_consistent(g, random_lists(rng, g.n), target)
        if has_empty(narrowed):
            continue
        for u, v in g.arc_list:
            revised, changed = revise_arc(u, v, narrowed, target)
            assert not changed
            assert revised == tuple(narrowed)
