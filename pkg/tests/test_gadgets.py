import itertools

import pytest

from app.errors import UsageError
from app.services.digraph_service import HARD_BOUND, degree_stats, underlying_undirected_max_degree
from app.services.gadget_service import (
    FORCER_COLORS,
    SMALL_KINDS,
    BehaviorMode,
    Gadget,
    GadgetKind,
    InterfaceBehavior,
    build_gadget,
    builtin_gadgets,
    clause_behavior,
    format_reports,
    interface_behavior,
    load_fixture,
    search_gadget,
    variable_behavior,
    verify_gadget,
    write_fixtures,
)
from app.services.oracle_service import exists_homomorphism
from app.services.target_service import build_target
from tests.conftest import digon

EXACTLY_ONE_1 = {(1, 0, 0), (0, 1, 0), (0, 0, 1)}
EXACTLY_ONE_0 = {(0, 1, 1), (1, 0, 1), (1, 1, 0)}


def test_u_is_a_digon():
    g = build_gadget("U")
    assert (g.digraph.n, len(g.digraph.arc_list)) == (2, 2)
    assert g.interface_labels == ("X", "~X")
    assert interface_behavior(g, build_target("A")).allowed == {(0, 1), (1, 0)}


def test_w_extension_table():
    g = build_gadget("W")
    assert (g.digraph.n, len(g.digraph.arc_list)) == (6, 6)
    behavior = interface_behavior(g, build_target("A"))
    assert behavior.mode is BehaviorMode.EXTENSION_TABLE
    assert behavior.allowed == EXACTLY_ONE_1


def test_w_hat_extension_table():
    assert interface_behavior(build_gadget("W_hat"), build_target("B")).allowed == EXACTLY_ONE_0


def test_w_prime_rejects_only_all_false():
    behavior = interface_behavior(build_gadget("W_prime"), build_target("C"))
    assert len(behavior.allowed) == 7
    assert behavior.rejected() == {(0, 0, 0)}


def test_w_prime_needs_its_pinned_top():
    g = build_gadget("W_prime")
    unpinned = interface_behavior(g, build_target("C"), pinned={})
    assert (0, 0, 0) in unpinned.allowed


@pytest.mark.parametrize("kind, target", [("V", "B"), ("T", "C")])
def test_variable_gadgets_project_to_complementary_pair(kind, target):
    assert interface_behavior(build_gadget(kind), build_target(target)).allowed == {(0, 1), (1, 0)}


def test_forcer_colors():
    g = build_gadget("forcer")
    assert interface_behavior(g, build_target("B")).allowed == {tuple(FORCER_COLORS.values())}


def test_k113_degree_two_vertices_share_a_color():
    g = build_gadget("k113")
    assert interface_behavior(g, build_target("C")).allowed == {(0, 0, 0), (1, 1, 1), (2, 2, 2)}
    stats = degree_stats(g.digraph)
    assert stats.within(HARD_BOUND)


def test_u_prime_two_has_six_vertices():
    g = build_gadget("U_prime", 2)
    assert g.digraph.n == 6
    assert len(interface_behavior(g, build_target("A")).allowed) == 2


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_u_prime_copies_agree(k):
    g = build_gadget("U_prime", k)
    assert interface_behavior(g, build_target("A")).allowed == variable_behavior("A", k).allowed


@pytest.mark.parametrize("kind", ["U_prime", "V_prime", "T_prime"])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_bounded_variable_gadgets_pass_with_slack(kind, k):
    report = verify_gadget(build_gadget(kind, k))
    assert report.passed, report.unexpected
    assert report.audit_passed
    assert len(report.slack) == 2 * k
    assert all(entry.absorbable >= 1 for entry in report.slack)


def test_u_prime_three_out_slack():
    report = verify_gadget(build_gadget("U_prime", 3))
    assert all(entry.out_slack >= 1 for entry in report.slack)


def test_t_prime_stays_within_undirected_degree_four():
    for k in (1, 2, 3):
        assert underlying_undirected_max_degree(build_gadget("T_prime", k).digraph) <= 4


@pytest.mark.parametrize("kind, color", [("clause_chain", 1), ("variable_chain", 2)])
def test_supply_chains(kind, color):
    g = build_gadget(kind, 3)
    assert interface_behavior(g, build_target("C")).allowed == {(color,) * 3}


def test_basis_triangle_takes_every_permutation():
    g = build_gadget("basis_triangle")
    assert interface_behavior(g, build_target("C")).allowed == set(itertools.permutations(range(3)))


def test_every_builtin_gadget_passes():
    reports = [verify_gadget(g) for g in builtin_gadgets()]
    assert reports
    failed = [(r.kind, r.missing, r.unexpected) for r in reports if not r.ok]
    assert not failed


def test_builtin_filter_by_target():
    kinds = {g.kind for g in builtin_gadgets("b", sizes=(1,))}
    assert kinds == {"V", "W_hat", "V_prime", "forcer"}


def test_digon_fails_as_b_variable():
    fake = Gadget("digon", digon(), (0, 1), variable_behavior("B"))
    report = verify_gadget(fake, build_target("B"))
    assert not report.passed
    assert [1, 2] in report.unexpected


def test_invalid_parameters():
    with pytest.raises(UsageError):
        build_gadget("nope")
    with pytest.raises(UsageError):
        build_gadget("U_prime", 0)


def test_gadget_interface_must_be_distinct():
    with pytest.raises(ValueError):
        Gadget("bad", digon(), (0, 0), variable_behavior("A"))


def test_builds_are_deterministic():
    for kind in GadgetKind:
        assert build_gadget(kind, 2).digraph.arc_list == build_gadget(kind, 2).digraph.arc_list


@pytest.mark.parametrize("kind", SMALL_KINDS)
def test_shipped_fixtures_match_builders(kind):
    built = build_gadget(kind).digraph
    fixture = load_fixture(kind)
    assert fixture == built
    assert fixture.labels == built.labels


def test_write_fixtures(tmp_path):
    paths = write_fixtures(tmp_path)
    assert {p.name for p in paths} == {f"{k.value}.el" for k in SMALL_KINDS}
    assert load_fixture("W_prime", tmp_path) == build_gadget("W_prime").digraph


def test_search_finds_the_digon():
    found = search_gadget(variable_behavior("A"), max_vertices=2)
    assert found is not None
    assert found.digraph.arcs == {(0, 1), (1, 0)}


def test_search_rejects_empty_projection():
    spec = InterfaceBehavior("A", BehaviorMode.PROJECTION, 2, frozenset())
    assert search_gadget(spec, max_vertices=3) is None


def test_search_finds_a_b_variable():
    found = search_gadget(variable_behavior("B"), max_vertices=4, seed=0)
    assert found is not None
    assert found.digraph.n <= 4
    assert exists_homomorphism(found.digraph, build_target("B"))
    assert verify_gadget(found).passed


def test_search_is_deterministic():
    spec = clause_behavior("C")
    first = search_gadget(spec, max_vertices=3, seed=5)
    second = search_gadget(spec, max_vertices=3, seed=5)
    assert (first is None) == (second is None)
    if first is not None:
        assert first.digraph == second.digraph


def test_search_vertex_limit():
    with pytest.raises(UsageError):
        search_gadget(variable_behavior("A"), max_vertices=9)


def test_text_report():
    text = format_reports([verify_gadget(build_gadget("U")), verify_gadget(build_gadget("U_prime", 2))])
    assert text.splitlines()[0].startswith("PASS  U [A, projection]")
    assert "slack audit: ok" in text
    assert text.rstrip().endswith("2/2 gadgets pass")
