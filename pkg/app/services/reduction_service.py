"""Reduction graphs G_phi for the targets A, B and C, unbounded or within
max out/in degree 2, plus the translations between truth assignments and
colorings.

A and B reduce 1-in-3-SAT, C reduces 3-SAT. Truth conventions on literal
vertices: A colors True 1, B colors True 0, C colors True 1 once the colors
are renamed so the basis triangle reads (0, 1, 2).
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from pydantic import ValidationError

from app.config import settings
from app.errors import AssignmentError, ColoringError, FormatError, UsageError
from app.models.schemas import (
    ClauseMeta,
    ReductionMeta,
    RoundtripResult,
    ValidationReport,
    VariableMeta,
)
from app.services.cnf_service import (
    Assignment,
    Clause,
    Formula,
    Semantics,
    brute_force_sat,
    evaluate,
)
from app.services.digraph_service import (
    HARD_BOUND,
    Digraph,
    DigraphBuilder,
    degree_stats,
    underlying_undirected_max_degree,
)
from app.services.gadget_service import (
    add_a_clause,
    add_b_clause,
    add_b_variable,
    add_basis_triangle,
    add_bounded_a_variable,
    add_bounded_b_variable,
    add_bounded_c_variable,
    add_c_clause,
    add_c_variable,
    add_digon_variable,
    add_k113_chain,
)
from app.services.oracle_service import find_homomorphism
from app.services.target_service import (
    Coloring,
    build_target,
    is_homomorphism,
    pinned_lists,
)

logger = logging.getLogger(__name__)

TARGET_SEMANTICS = {"A": Semantics.ONE_IN_THREE, "B": Semantics.ONE_IN_THREE, "C": Semantics.THREE_SAT}
TRUE_COLOR = {"A": 1, "B": 0, "C": 1}
BASIS_COLORS = (0, 1, 2)
UNDIRECTED_MAX_DEGREE = 4


@dataclass(frozen=True)
class VariableRoles:
    index: int
    positive: tuple[int, ...]
    negative: tuple[int, ...]


@dataclass(frozen=True)
class ClauseRoles:
    index: int
    literals: Clause
    carriers: tuple[int, ...]
    gadget: tuple[int, ...]


@dataclass(frozen=True)
class ReductionInstance:
    formula: Formula
    target: str
    bounded: bool
    graph: Digraph
    variables: tuple[VariableRoles, ...]
    clauses: tuple[ClauseRoles, ...]
    basis: Optional[tuple[int, int, int]] = None
    pinned: Mapping[int, int] = field(default_factory=dict)

    @property
    def semantics(self) -> Semantics:
        return TARGET_SEMANTICS[self.target]

    @property
    def variant(self) -> str:
        return "bounded" if self.bounded else "unbounded"

    def meta(self) -> ReductionMeta:
        return ReductionMeta(
            target=self.target,
            bounded=self.bounded,
            semantics=self.semantics.value,
            num_vars=self.formula.num_vars,
            num_clauses=len(self.formula.clauses),
            vertices=self.graph.n,
            arcs=len(self.graph.arc_list),
            basis=list(self.basis) if self.basis is not None else None,
            pinned={str(v): x for v, x in sorted(self.pinned.items())},
            variables=[
                VariableMeta(index=r.index, positive_copies=list(r.positive), negative_copies=list(r.negative))
                for r in self.variables
            ],
            clauses=[
                ClauseMeta(
                    index=c.index,
                    literals=[lit.to_int() for lit in c.literals],
                    carriers=list(c.carriers),
                    gadget=list(c.gadget),
                )
                for c in self.clauses
            ],
        )


def dump_meta(instance: ReductionInstance) -> str:
    return instance.meta().model_dump_json(indent=2) + "\n"


def load_meta(text: str) -> ReductionMeta:
    try:
        return ReductionMeta.model_validate_json(text)
    except ValidationError as e:
        raise FormatError(f"invalid reduction metadata: {e.error_count()} error(s)") from None


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

def _copies_needed(formula: Formula, variable: int) -> int:
    return max(*formula.occurrences(variable), 1)


class _CarrierPool:
    """Hands out literal copies in clause order; unbounded variants reuse
    the single copy of each literal."""

    def __init__(self, variables: Sequence[VariableRoles], reuse: bool):
        self._variables = variables
        self._reuse = reuse
        self._used: dict[tuple[int, bool], int] = {}

    def take(self, variable: int, positive: bool) -> int:
        roles = self._variables[variable - 1]
        copies = roles.positive if positive else roles.negative
        if self._reuse:
            return copies[0]
        used = self._used.get((variable, positive), 0)
        self._used[(variable, positive)] = used + 1
        return copies[used]


def reduce(formula: Formula, target: str, bounded: bool = False) -> ReductionInstance:
    target = target.upper()
    if target not in TARGET_SEMANTICS:
        raise UsageError(f"no reduction for target {target!r}; expected A, B or C")
    b = DigraphBuilder()
    basis = None
    pinned: dict[int, int] = {}
    clause_tops: list[Optional[int]] = [None] * len(formula.clauses)
    anchors: list[int] = []

    if target == "C":
        basis = add_basis_triangle(b)
        pinned = dict(zip(basis, BASIS_COLORS))
        if bounded:
            clause_tops = add_k113_chain(b, basis[1], len(formula.clauses), "CC")
            anchors = add_k113_chain(b, basis[2], formula.num_vars, "VC")
        else:
            clause_tops = [basis[1]] * len(formula.clauses)
            anchors = [basis[2]] * formula.num_vars

    variables = []
    for i in range(1, formula.num_vars + 1):
        name = f"x{i}"
        if bounded:
            k = _copies_needed(formula, i)
            if target == "A":
                xs, nxs = add_bounded_a_variable(b, name, k)
            elif target == "B":
                xs, nxs = add_bounded_b_variable(b, name, k)
            else:
                xs, nxs = add_bounded_c_variable(b, name, k, anchors[i - 1])
        else:
            if target == "A":
                x, nx = add_digon_variable(b, name)
            elif target == "B":
                x, nx, _ = add_b_variable(b, name)
            else:
                x, nx = add_c_variable(b, name, anchors[i - 1])
            xs, nxs = [x], [nx]
        variables.append(VariableRoles(i, tuple(xs), tuple(nxs)))

    pool = _CarrierPool(variables, reuse=not bounded)
    clauses = []
    for j, clause in enumerate(formula.clauses):
        carriers = tuple(pool.take(lit.variable, lit.positive) for lit in clause)
        tag = f"C{j + 1}"
        if target == "A":
            inner = add_a_clause(b, carriers, tag)
        elif target == "B":
            inner = add_b_clause(b, carriers, tag)
        else:
            inner = tuple(add_c_clause(b, carriers, tag, top=clause_tops[j]).values())
        clauses.append(ClauseRoles(j + 1, clause, carriers, tuple(inner)))

    graph = b.build()
    logger.debug("reduced %d vars / %d clauses to %s %s: %d vertices, %d arcs",
                  formula.num_vars, len(formula.clauses), target,
                  "bounded" if bounded else "unbounded", graph.n, len(graph.arc_list))
    return ReductionInstance(
        formula, target, bounded, graph, tuple(variables), tuple(clauses), basis, pinned
    )


# ---------------------------------------------------------------------------
# Assignments <-> colorings
# ---------------------------------------------------------------------------

def _normalized(instance: ReductionInstance, coloring: Coloring) -> Coloring:
    """Rename colors so the basis triangle reads (0, 1, 2)."""
    if instance.basis is None:
        return tuple(coloring)
    rename = {coloring[t]: x for t, x in zip(instance.basis, BASIS_COLORS)}
    return tuple(rename[x] for x in coloring)


def extract_assignment(instance: ReductionInstance, coloring: Sequence[int]) -> Assignment:
    h = build_target(instance.target)
    if not is_homomorphism(instance.graph, h, coloring):
        raise ColoringError(f"coloring is not a homomorphism to {instance.target}")
    coloring = _normalized(instance, coloring)
    true_color = TRUE_COLOR[instance.target]
    return tuple(coloring[roles.positive[0]] == true_color for roles in instance.variables)


def extend_assignment(instance: ReductionInstance, assignment: Sequence[bool]) -> Coloring:
    """A full coloring whose literal vertices follow the truth convention."""
    if not evaluate(instance.formula, assignment, instance.semantics):
        raise AssignmentError(
            f"assignment does not satisfy the formula under {instance.semantics.value} semantics"
        )
    true_color = TRUE_COLOR[instance.target]
    false_color = 1 - true_color
    pins = dict(instance.pinned)
    for roles, value in zip(instance.variables, assignment):
        pos, neg = (true_color, false_color) if value else (false_color, true_color)
        pins.update((v, pos) for v in roles.positive)
        pins.update((v, neg) for v in roles.negative)

    h = build_target(instance.target)
    coloring = find_homomorphism(instance.graph, h, pinned_lists(instance.graph.n, h, pins), max_vertices=None)
    if coloring is None:
        raise AssignmentError("satisfying assignment does not extend to a coloring")
    if not is_homomorphism(instance.graph, h, coloring):
        raise ColoringError("extension failed the homomorphism check")
    return coloring


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def _degree_problems(instance: ReductionInstance) -> list[str]:
    g = instance.graph
    problems = []
    for v in range(g.n):
        out_deg, in_deg = len(g.out_adj[v]), len(g.in_adj[v])
        if out_deg > HARD_BOUND.max_out or in_deg > HARD_BOUND.max_in:
            problems.append(f"vertex {v} ({g.label(v)}) has out/in degree {out_deg}/{in_deg}")
    return problems


def _meta_problems(instance: ReductionInstance) -> list[str]:
    g = instance.graph
    problems = []
    if len(instance.variables) != instance.formula.num_vars:
        problems.append("variable gadget count differs from the variable count")
    if len(instance.clauses) != len(instance.formula.clauses):
        problems.append("clause gadget count differs from the clause count")
    owner: dict[int, tuple[int, bool]] = {}
    for roles in instance.variables:
        for positive, copies in ((True, roles.positive), (False, roles.negative)):
            if not copies:
                problems.append(f"x{roles.index} has no {'positive' if positive else 'negative'} copy")
            for v in copies:
                if not 0 <= v < g.n:
                    problems.append(f"x{roles.index} copy {v} is not a vertex")
                elif v in owner:
                    problems.append(f"vertex {v} carries two literals")
                owner[v] = (roles.index, positive)

    used: dict[int, int] = {}
    for clause in instance.clauses:
        for lit, v in zip(clause.literals, clause.carriers):
            if owner.get(v) != (lit.variable, lit.positive):
                problems.append(f"clause {clause.index}: {lit} is carried by vertex {v}")
            used[v] = used.get(v, 0) + 1
        for v in clause.gadget:
            if not 0 <= v < g.n:
                problems.append(f"clause {clause.index}: gadget vertex {v} is not a vertex")
    if instance.bounded:
        problems.extend(
            f"literal copy {v} ({g.label(v)}) carries {count} clause occurrences"
            for v, count in sorted(used.items()) if count > 1
        )
    return problems


def _attachment_problems(instance: ReductionInstance) -> list[str]:
    """Spot-check that each carrier is wired into its clause gadget."""
    g = instance.graph
    problems = []
    for clause in instance.clauses:
        inner = clause.gadget
        if instance.target == "A":
            expected = list(zip(clause.carriers, inner))
        elif instance.target == "B":
            expected = list(zip(inner, clause.carriers))
        else:
            u1, v1, _, _, v2, _ = inner
            expected = list(zip(clause.carriers, (u1, v1, v2)))
        if instance.target in ("A", "B"):
            expected += [(inner[0], inner[1]), (inner[1], inner[2]), (inner[2], inner[0])]
        for u, v in expected:
            if not g.has_arc(u, v):
                problems.append(f"clause {clause.index}: missing arc {g.label(u)} -> {g.label(v)}")
    for roles in instance.variables:
        x, nx = roles.positive[0], roles.negative[0]
        if instance.bounded and instance.target == "C":
            continue
        if instance.bounded and instance.target == "B":
            linked = g.has_arc(x, nx)
        else:
            linked = g.has_arc(x, nx) and g.has_arc(nx, x)
        if not linked:
            problems.append(f"x{roles.index}: {g.label(x)} and {g.label(nx)} are not linked")
    return problems


def validate_instance(instance: ReductionInstance) -> ValidationReport:
    g = instance.graph
    stats = degree_stats(g)
    undirected = underlying_undirected_max_degree(g)
    hot = max(range(g.n), key=lambda v: (len(g.out_adj[v]), -v)) if g.n else None

    degree = _degree_problems(instance) if instance.bounded else []
    if instance.bounded and instance.target == "C" and undirected > UNDIRECTED_MAX_DEGREE:
        degree.append(f"underlying undirected max degree {undirected} exceeds {UNDIRECTED_MAX_DEGREE}")
    meta = _meta_problems(instance)
    spot = _attachment_problems(instance) if not meta else []

    report = ValidationReport(
        target=instance.target,
        bounded=instance.bounded,
        vertices=g.n,
        arcs=len(g.arc_list),
        max_out=stats.max_out,
        max_in=stats.max_in,
        max_out_vertex=g.label(hot) if hot is not None else None,
        undirected_max_degree=undirected,
        degree_ok=not degree,
        meta_ok=not meta,
        spot_checks_ok=not spot,
        problems=degree + meta + spot,
    )
    if not report.passed:
        logger.warning("instance validation found %d problem(s)", len(report.problems))
    return report


# ---------------------------------------------------------------------------
# Round trips
# ---------------------------------------------------------------------------

def roundtrip_check(
    formula: Formula, target: str, bounded: bool = False, name: str = "formula"
) -> RoundtripResult:
    """Reduce, decide both sides exactly, and translate in both directions."""
    instance = reduce(formula, target, bounded)
    h = build_target(instance.target)
    witness = brute_force_sat(formula, instance.semantics)
    # The basis pins are valid in every C-coloring up to renaming the colors.
    lists = pinned_lists(instance.graph.n, h, instance.pinned)
    coloring = find_homomorphism(instance.graph, h, lists, max_vertices=None)

    extracted_ok = extended_ok = None
    detail = []
    if coloring is not None:
        extracted = extract_assignment(instance, coloring)
        extracted_ok = evaluate(formula, extracted, instance.semantics)
        if not extracted_ok:
            detail.append("extracted assignment does not satisfy the formula")
    if witness is not None:
        try:
            extended_ok = is_homomorphism(instance.graph, h, extend_assignment(instance, witness))
        except AssignmentError as e:
            extended_ok = False
            detail.append(str(e))

    satisfiable, colorable = witness is not None, coloring is not None
    if satisfiable != colorable:
        detail.append(f"satisfiable={satisfiable} but colorable={colorable}")
    passed = satisfiable == colorable and extracted_ok is not False and extended_ok is not False
    logger.debug("round trip %s via %s %s: %s", name, instance.target, instance.variant,
                 "pass" if passed else "FAIL")
    return RoundtripResult(
        name=name,
        target=instance.target,
        bounded=bounded,
        satisfiable=satisfiable,
        colorable=colorable,
        extracted_ok=extracted_ok,
        extended_ok=extended_ok,
        passed=passed,
        detail="; ".join(detail),
    )


def _safe_roundtrip(item: tuple[str, Formula], target: str, bounded: bool) -> RoundtripResult:
    name, formula = item
    try:
        return roundtrip_check(formula, target, bounded, name)
    except (AssignmentError, ColoringError) as e:
        return RoundtripResult(
            name=name, target=target.upper(), bounded=bounded, satisfiable=False,
            colorable=False, passed=False, detail=str(e),
        )


def roundtrip_batch(
    formulas: Sequence[tuple[str, Formula]],
    target: str,
    bounded: bool = False,
    workers: Optional[int] = None,
) -> list[RoundtripResult]:
    """Round-trip every (name, formula) pair; results keep input order."""
    workers = workers or settings.BATCH_WORKERS
    with ThreadPoolExecutor(max_workers=workers) as executor:
        results = list(executor.map(lambda item: _safe_roundtrip(item, target, bounded), formulas))
    failed = sum(not r.passed for r in results)
    logger.info("round-tripped %d formula(s) via %s: %d failed", len(results), target, failed)
    return results
