"""Variable and clause gadgets for the SAT reductions to A-, B- and
C-coloring, and the oracle-backed check of each gadget's interface behavior.

The ``add_*`` functions wire a gadget into a shared :class:`DigraphBuilder`
so the reduction builder and the standalone gadgets use the same code.
Literal vertices handed to a clause gadget are merged, not linked.
"""

import itertools
import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from app.config import settings
from app.errors import UsageError
from app.models.schemas import GadgetReport, SlackEntry
from app.services.consistency_service import has_empty, make_arc_consistent
from app.services.digraph_service import (
    HARD_BOUND,
    DegreeStats,
    Digraph,
    DigraphBuilder,
    degree_stats,
    format_edge_list,
    read_edge_list,
    render_template,
)
from app.services.oracle_service import exists_homomorphism
from app.services.target_service import TargetGraph, build_target, pinned_lists

logger = logging.getLogger(__name__)

BOOLEAN_COLORS = (0, 1)


class BehaviorMode(str, Enum):
    PROJECTION = "projection"
    EXTENSION_TABLE = "extension_table"


class AttachDirection(str, Enum):
    """Direction of the clause arc added at a literal copy."""

    OUT = "out"
    IN = "in"


@dataclass(frozen=True)
class InterfaceBehavior:
    target: str
    mode: BehaviorMode
    arity: int
    allowed: frozenset
    domain: Optional[frozenset] = None

    def __post_init__(self):
        for row in self.allowed:
            if len(row) != self.arity:
                raise ValueError(f"tuple {row} does not have arity {self.arity}")
        if self.mode is BehaviorMode.EXTENSION_TABLE:
            if self.domain is None:
                raise ValueError("an extension table needs a domain")
            if not self.allowed <= self.domain:
                raise ValueError("allowed rows must lie in the domain")

    def rejected(self) -> frozenset:
        return (self.domain or frozenset()) - self.allowed


@dataclass(frozen=True)
class Gadget:
    kind: str
    digraph: Digraph
    interface: tuple[int, ...]
    expected: InterfaceBehavior
    pinned: Mapping[int, int] = field(default_factory=dict)
    roles: Mapping[str, tuple[int, ...]] = field(default_factory=dict)
    literal_copies: tuple[int, ...] = ()
    attach: Optional[AttachDirection] = None

    def __post_init__(self):
        if len(set(self.interface)) != len(self.interface):
            raise ValueError("interface vertices must be distinct")
        for v in self.interface:
            if not 0 <= v < self.digraph.n:
                raise ValueError(f"interface vertex {v} is not in the gadget")
        if len(self.interface) != self.expected.arity:
            raise ValueError("interface length does not match the behavior arity")

    @property
    def interface_labels(self) -> tuple[str, ...]:
        return tuple(self.digraph.label(v) for v in self.interface)


# ---------------------------------------------------------------------------
# Expected behaviors
# ---------------------------------------------------------------------------

def variable_behavior(target: str, copies: int = 1) -> InterfaceBehavior:
    """All X-copies share one boolean color, all X-bar copies the other."""
    allowed = frozenset({
        (0,) * copies + (1,) * copies,
        (1,) * copies + (0,) * copies,
    })
    return InterfaceBehavior(target, BehaviorMode.PROJECTION, 2 * copies, allowed)


_CLAUSE_RULES = {
    "A": lambda row: sum(row) == 1,
    "B": lambda row: sum(row) == 2,
    "C": lambda row: any(row),
}


def clause_behavior(target: str) -> InterfaceBehavior:
    """A: exactly one literal colored 1. B: exactly one colored 0.
    C: not all colored 0."""
    rule = _CLAUSE_RULES[target]
    domain = frozenset(itertools.product(BOOLEAN_COLORS, repeat=3))
    allowed = frozenset(row for row in domain if rule(row))
    return InterfaceBehavior(target, BehaviorMode.EXTENSION_TABLE, 3, allowed, domain)


def constant_behavior(target: str, row: Sequence[int]) -> InterfaceBehavior:
    return InterfaceBehavior(target, BehaviorMode.PROJECTION, len(row), frozenset({tuple(row)}))


# ---------------------------------------------------------------------------
# Wiring into a shared builder
# ---------------------------------------------------------------------------

def negated(name: str) -> str:
    return f"~{name}"


def add_digon_variable(b: DigraphBuilder, name: str) -> tuple[int, int]:
    x, nx = b.add_vertex(name), b.add_vertex(negated(name))
    b.add_arc(x, nx)
    b.add_arc(nx, x)
    return x, nx


def add_a_clause(b: DigraphBuilder, literals: Sequence[int], tag: str) -> tuple[int, int, int]:
    """Directed 3-cycle with one arc from each literal into the cycle."""
    cycle = tuple(b.add_vertex(f"{tag}.c{i}") for i in range(3))
    b.add_path(*cycle, cycle[0])
    for lit, c in zip(literals, cycle):
        b.add_arc(lit, c)
    return cycle


def add_b_variable(b: DigraphBuilder, name: str) -> tuple[int, int, int]:
    """Digon whose two ends share a successor; under B the successor is 2
    and the ends take 0 and 1."""
    x, nx = add_digon_variable(b, name)
    p = b.add_vertex(f"{name}.p")
    b.add_arc(x, p)
    b.add_arc(nx, p)
    return x, nx, p


def add_b_clause(b: DigraphBuilder, literals: Sequence[int], tag: str) -> tuple[int, int, int]:
    """Directed 3-cycle with arcs pointing out of the cycle to the literals."""
    cycle = tuple(b.add_vertex(f"{tag}.c{i}") for i in range(3))
    b.add_path(*cycle, cycle[0])
    for lit, c in zip(literals, cycle):
        b.add_arc(c, lit)
    return cycle


def add_c_variable(b: DigraphBuilder, name: str, anchor: int) -> tuple[int, int]:
    x, nx = add_digon_variable(b, name)
    b.add_arc(x, anchor)
    b.add_arc(nx, anchor)
    return x, nx


def add_c_clause(
    b: DigraphBuilder, literals: Sequence[int], tag: str, top: Optional[int] = None
) -> dict[str, int]:
    """Two chained triangles: the first computes ``a or b`` at w1, the
    second rejects w1 = c = 0 when its top vertex has color 1."""
    a, b_lit, c = literals
    u1, v1, w1 = (b.add_vertex(f"{tag}.{r}") for r in ("u1", "v1", "w1"))
    u2, v2 = b.add_vertex(f"{tag}.u2"), b.add_vertex(f"{tag}.v2")
    if top is None:
        top = b.add_vertex(f"{tag}.top")
    b.add_path(u1, v1, w1, u1)
    b.add_arc(a, u1)
    b.add_arc(b_lit, v1)
    b.add_arc(w1, u2)
    b.add_path(u2, v2, top, u2)
    b.add_arc(c, v2)
    return {"u1": u1, "v1": v1, "w1": w1, "u2": u2, "v2": v2, "top": top}


FORCER_COLORS = {"u": 0, "w": 2, "f": 1, "y": 0, "z": 2, "r": 1, "v": 2}


def add_forcer(b: DigraphBuilder, tag: str) -> dict[str, int]:
    """Two transitive triangles sharing the vertex f; under B, f is 1.

    w and v come out colored 2 with one free in-arc each, r comes out 1.
    """
    ids = {role: b.add_vertex(f"{tag}.{role}") for role in FORCER_COLORS}
    u, w, f, y, z, r, v = (ids[k] for k in FORCER_COLORS)
    b.add_arc(u, w)
    b.add_arc(u, f)
    b.add_arc(w, f)
    b.add_arc(f, y)
    b.add_arc(f, z)
    b.add_arc(y, z)
    b.add_arc(w, r)
    b.add_arc(y, v)
    b.add_arc(v, r)
    return ids


def add_k113(b: DigraphBuilder, entry: int, tag: str) -> dict[str, int]:
    """Orientation of K_{1,1,3} on hubs p, q and the degree-two vertices
    ``entry`` (s_a), s_b and s_c.

    Hubs are 2-in/2-out, each s vertex 1-in/1-out.
    """
    p, q = b.add_vertex(f"{tag}.p"), b.add_vertex(f"{tag}.q")
    s_b, s_c = b.add_vertex(f"{tag}.sb"), b.add_vertex(f"{tag}.sc")
    b.add_arc(p, q)
    b.add_arc(q, entry)
    b.add_arc(entry, p)
    b.add_arc(q, s_b)
    b.add_arc(s_b, p)
    b.add_arc(p, s_c)
    b.add_arc(s_c, q)
    return {"p": p, "q": q, "sa": entry, "sb": s_b, "sc": s_c}


def add_k113_chain(b: DigraphBuilder, root: int, count: int, tag: str) -> list[int]:
    """``count`` K_{1,1,3} copies, each sharing its s_c with the next one's
    s_a. Returns the free s_b vertices, all colored like ``root``."""
    supplies = []
    entry = root
    for j in range(count):
        copy = add_k113(b, entry, f"{tag}{j + 1}")
        supplies.append(copy["sb"])
        entry = copy["sc"]
    return supplies


def add_basis_triangle(b: DigraphBuilder) -> tuple[int, int, int]:
    t = tuple(b.add_vertex(f"basis{i}") for i in range(3))
    b.add_path(*t, t[0])
    return t


def add_bounded_a_variable(b: DigraphBuilder, name: str, k: int) -> tuple[list[int], list[int]]:
    """k digons tied by source connectors; each connector points at two
    consecutive copies of one literal, alternating sides."""
    xs, nxs = [], []
    for i in range(k):
        x, nx = add_digon_variable(b, f"{name}#{i + 1}")
        xs.append(x)
        nxs.append(nx)
    for j in range(k - 1):
        side = nxs if j % 2 == 0 else xs
        connector = b.add_vertex(f"{name}.i{j + 1}")
        b.add_arc(connector, side[j])
        b.add_arc(connector, side[j + 1])
    if k % 2 == 0:
        # Both X_1 and X_k are still free on the in-side.
        closing = b.add_vertex(f"{name}.i{k}")
        b.add_arc(closing, xs[0])
        b.add_arc(closing, xs[-1])
    return xs, nxs


def add_bounded_b_variable(b: DigraphBuilder, name: str, k: int) -> tuple[list[int], list[int]]:
    """k copies h_i -> t_i, each h_i and t_i feeding a forced-2 vertex of
    its own forcer, chained by t_i -> h_(i+1)."""
    xs, nxs = [], []
    for i in range(k):
        h = b.add_vertex(f"{name}#{i + 1}")
        t = b.add_vertex(f"{negated(name)}#{i + 1}")
        forcer = add_forcer(b, f"{name}.F{i + 1}")
        b.add_arc(h, t)
        b.add_arc(h, forcer["w"])
        b.add_arc(t, forcer["v"])
        if nxs:
            b.add_arc(nxs[-1], h)
        xs.append(h)
        nxs.append(t)
    return xs, nxs


def add_bounded_c_variable(
    b: DigraphBuilder, name: str, k: int, anchor: int
) -> tuple[list[int], list[int]]:
    """Triangle on the anchor and two roots, each root growing a chain of
    k K_{1,1,3} copies whose s_b vertices are the literal copies."""
    r_x = b.add_vertex(f"{name}.root")
    r_nx = b.add_vertex(f"{negated(name)}.root")
    b.add_path(r_x, r_nx, anchor, r_x)
    xs = add_k113_chain(b, r_x, k, f"{name}.K")
    nxs = add_k113_chain(b, r_nx, k, f"{negated(name)}.K")
    return xs, nxs


# ---------------------------------------------------------------------------
# Standalone gadgets
# ---------------------------------------------------------------------------

class GadgetKind(str, Enum):
    U = "U"
    W = "W"
    V = "V"
    W_HAT = "W_hat"
    T = "T"
    W_PRIME = "W_prime"
    U_PRIME = "U_prime"
    V_PRIME = "V_prime"
    T_PRIME = "T_prime"
    FORCER = "forcer"
    K113 = "k113"
    CLAUSE_CHAIN = "clause_chain"
    VARIABLE_CHAIN = "variable_chain"
    BASIS_TRIANGLE = "basis_triangle"


KIND_TARGETS = {
    GadgetKind.U: "A", GadgetKind.W: "A", GadgetKind.U_PRIME: "A",
    GadgetKind.V: "B", GadgetKind.W_HAT: "B", GadgetKind.V_PRIME: "B", GadgetKind.FORCER: "B",
    GadgetKind.T: "C", GadgetKind.W_PRIME: "C", GadgetKind.T_PRIME: "C", GadgetKind.K113: "C",
    GadgetKind.CLAUSE_CHAIN: "C", GadgetKind.VARIABLE_CHAIN: "C", GadgetKind.BASIS_TRIANGLE: "C",
}

SIZED_KINDS = frozenset({
    GadgetKind.U_PRIME, GadgetKind.V_PRIME, GadgetKind.T_PRIME,
    GadgetKind.CLAUSE_CHAIN, GadgetKind.VARIABLE_CHAIN,
})


def _literal_inputs(b: DigraphBuilder) -> tuple[int, int, int]:
    return tuple(b.add_vertex(name) for name in ("l0", "l1", "l2"))


def _variable_gadget(kind, b, xs, nxs, target, pinned=None, attach=None, **roles) -> Gadget:
    copies = tuple(xs) + tuple(nxs)
    return Gadget(
        kind=kind.value,
        digraph=b.build(),
        interface=copies,
        expected=variable_behavior(target, len(xs)),
        pinned=pinned or {},
        roles={"X": tuple(xs), "NOT_X": tuple(nxs), **roles},
        literal_copies=copies if attach is not None else (),
        attach=attach,
    )


def _clause_gadget(kind, b, literals, target, pinned=None, **roles) -> Gadget:
    return Gadget(
        kind=kind.value,
        digraph=b.build(),
        interface=tuple(literals),
        expected=clause_behavior(target),
        pinned=pinned or {},
        roles={"literals": tuple(literals), **roles},
    )


def build_gadget(kind, k: int = 1) -> Gadget:
    """Build one gadget in isolation. ``k`` sizes the bounded variable
    gadgets (copies per literal) and the supply chains (supply vertices)."""
    try:
        kind = GadgetKind(kind)
    except ValueError:
        raise UsageError(f"unknown gadget kind {kind!r}") from None
    if kind in SIZED_KINDS and k < 1:
        raise UsageError(f"{kind.value} needs k >= 1, got {k}")
    target = KIND_TARGETS[kind]
    b = DigraphBuilder()

    if kind is GadgetKind.U:
        x, nx = add_digon_variable(b, "X")
        return _variable_gadget(kind, b, [x], [nx], target)
    if kind is GadgetKind.V:
        x, nx, p = add_b_variable(b, "X")
        return _variable_gadget(kind, b, [x], [nx], target, sink=(p,))
    if kind is GadgetKind.T:
        anchor = b.add_vertex("anchor")
        x, nx = add_c_variable(b, "X", anchor)
        return _variable_gadget(kind, b, [x], [nx], target, {anchor: 2}, anchor=(anchor,))

    if kind is GadgetKind.W:
        lits = _literal_inputs(b)
        cycle = add_a_clause(b, lits, "W")
        return _clause_gadget(kind, b, lits, target, cycle=cycle)
    if kind is GadgetKind.W_HAT:
        lits = _literal_inputs(b)
        cycle = add_b_clause(b, lits, "W")
        return _clause_gadget(kind, b, lits, target, cycle=cycle)
    if kind is GadgetKind.W_PRIME:
        lits = _literal_inputs(b)
        inner = add_c_clause(b, lits, "W")
        return _clause_gadget(kind, b, lits, target, {inner["top"]: 1}, top=(inner["top"],))

    if kind is GadgetKind.U_PRIME:
        xs, nxs = add_bounded_a_variable(b, "X", k)
        return _variable_gadget(kind, b, xs, nxs, target, attach=AttachDirection.OUT)
    if kind is GadgetKind.V_PRIME:
        xs, nxs = add_bounded_b_variable(b, "X", k)
        return _variable_gadget(kind, b, xs, nxs, target, attach=AttachDirection.IN)
    if kind is GadgetKind.T_PRIME:
        anchor = b.add_vertex("anchor")
        xs, nxs = add_bounded_c_variable(b, "X", k, anchor)
        return _variable_gadget(
            kind, b, xs, nxs, target, {anchor: 2}, AttachDirection.OUT, anchor=(anchor,)
        )

    if kind is GadgetKind.FORCER:
        ids = add_forcer(b, "F")
        iface = tuple(ids.values())
        return Gadget(
            kind.value, b.build(), iface,
            constant_behavior(target, tuple(FORCER_COLORS.values())),
            roles={role: (v,) for role, v in ids.items()},
        )
    if kind is GadgetKind.K113:
        entry = b.add_vertex("K.sa")
        ids = add_k113(b, entry, "K")
        iface = (ids["sa"], ids["sb"], ids["sc"])
        allowed = frozenset((c, c, c) for c in range(3))
        return Gadget(
            kind.value, b.build(), iface,
            InterfaceBehavior(target, BehaviorMode.PROJECTION, 3, allowed),
            roles={"hubs": (ids["p"], ids["q"])},
        )
    if kind in (GadgetKind.CLAUSE_CHAIN, GadgetKind.VARIABLE_CHAIN):
        color = 1 if kind is GadgetKind.CLAUSE_CHAIN else 2
        root = b.add_vertex("root")
        supplies = add_k113_chain(b, root, k, "K")
        return Gadget(
            kind.value, b.build(), tuple(supplies),
            constant_behavior(target, (color,) * k),
            pinned={root: color},
            roles={"root": (root,), "supplies": tuple(supplies)},
        )

    t = add_basis_triangle(b)
    allowed = frozenset(itertools.permutations(range(3)))
    return Gadget(
        kind.value, b.build(), t,
        InterfaceBehavior(target, BehaviorMode.PROJECTION, 3, allowed),
        roles={"basis": t},
    )


SMALL_KINDS = (
    GadgetKind.U, GadgetKind.W, GadgetKind.V, GadgetKind.W_HAT,
    GadgetKind.T, GadgetKind.W_PRIME, GadgetKind.FORCER, GadgetKind.K113,
)


def builtin_gadgets(target: Optional[str] = None, sizes: Iterable[int] = (1, 2, 3)) -> list[Gadget]:
    """Every shipped gadget, the sized ones at each of ``sizes``."""
    sizes = tuple(sizes)
    gadgets = []
    for kind in GadgetKind:
        if target is not None and KIND_TARGETS[kind] != target.upper():
            continue
        if kind in SIZED_KINDS:
            gadgets.extend(build_gadget(kind, k) for k in sizes)
        else:
            gadgets.append(build_gadget(kind))
    return gadgets


# ---------------------------------------------------------------------------
# Behavior computed by the exact oracle
# ---------------------------------------------------------------------------

def _pin(lists: Sequence[frozenset], vertices: Sequence[int], row: Sequence[int]) -> Optional[list]:
    pinned = list(lists)
    for v, x in zip(vertices, row):
        if x not in pinned[v]:
            return None
        pinned[v] = frozenset((x,))
    return pinned


def _projection(g: Digraph, h: TargetGraph, lists, interface, cap) -> set[tuple]:
    found: set[tuple] = set()

    def walk(depth: int, current, prefix: tuple) -> None:
        narrowed = make_arc_consistent(g, current, h)
        if has_empty(narrowed):
            return
        if depth == len(interface):
            if exists_homomorphism(g, h, narrowed, max_vertices=cap):
                found.add(prefix)
            return
        v = interface[depth]
        for x in sorted(narrowed[v]):
            walk(depth + 1, _pin(narrowed, (v,), (x,)), prefix + (x,))

    walk(0, lists, ())
    return found


def interface_behavior(
    gadget: Gadget,
    h: TargetGraph,
    pinned: Optional[Mapping[int, int]] = None,
    max_vertices: Optional[int] = None,
) -> InterfaceBehavior:
    """Behavior of ``gadget`` under ``h`` in the mode of its expected
    behavior. ``pinned`` replaces the gadget's own pins."""
    g = gadget.digraph
    cap = settings.GADGET_MAX_VERTICES if max_vertices is None else max_vertices
    lists = pinned_lists(g.n, h, gadget.pinned if pinned is None else pinned)
    expected = gadget.expected

    if expected.mode is BehaviorMode.PROJECTION:
        allowed = _projection(g, h, lists, gadget.interface, cap)
    else:
        allowed = set()
        for row in sorted(expected.domain):
            trial = _pin(lists, gadget.interface, row)
            if trial is not None and exists_homomorphism(g, h, trial, max_vertices=cap):
                allowed.add(row)
    return InterfaceBehavior(h.name, expected.mode, expected.arity, frozenset(allowed), expected.domain)


def _rows(rows: Iterable[tuple]) -> list[list[int]]:
    return [list(r) for r in sorted(rows)]


def slack_audit(gadget: Gadget) -> list[SlackEntry]:
    """How many clause arcs each literal copy can take within (2, 2)."""
    g = gadget.digraph
    entries = []
    for v in gadget.literal_copies:
        out_slack = HARD_BOUND.max_out - len(g.out_adj[v])
        in_slack = HARD_BOUND.max_in - len(g.in_adj[v])
        absorbable = out_slack if gadget.attach is AttachDirection.OUT else in_slack
        entries.append(SlackEntry(
            vertex=v, label=g.label(v),
            out_slack=out_slack, in_slack=in_slack, absorbable=max(absorbable, 0),
        ))
    return entries


def verify_gadget(gadget: Gadget, h: Optional[TargetGraph] = None) -> GadgetReport:
    h = h or build_target(gadget.expected.target)
    computed = interface_behavior(gadget, h)
    expected = gadget.expected.allowed
    stats = degree_stats(gadget.digraph)

    slack: list[SlackEntry] = []
    audit = None
    if gadget.attach is not None:
        slack = slack_audit(gadget)
        audit = stats.within(HARD_BOUND) and all(e.absorbable >= 1 for e in slack)

    report = GadgetReport(
        kind=gadget.kind,
        target=h.name,
        mode=gadget.expected.mode.value,
        interface=list(gadget.interface_labels),
        pinned={gadget.digraph.label(v): x for v, x in sorted(gadget.pinned.items())},
        expected=_rows(expected),
        computed=_rows(computed.allowed),
        missing=_rows(expected - computed.allowed),
        unexpected=_rows(computed.allowed - expected),
        passed=computed.allowed == expected,
        vertices=gadget.digraph.n,
        arcs=len(gadget.digraph.arc_list),
        max_out=stats.max_out,
        max_in=stats.max_in,
        slack=slack,
        audit_passed=audit,
    )
    level = logging.DEBUG if report.ok else logging.WARNING
    logger.log(level, "gadget %s (%d vertices) under %s: %s",
               gadget.kind, gadget.digraph.n, h.name, "pass" if report.ok else "FAIL")
    return report


def verify_builtin(target: Optional[str] = None, sizes: Iterable[int] = (1, 2, 3)) -> list[GadgetReport]:
    return [verify_gadget(gadget) for gadget in builtin_gadgets(target, sizes)]


# ---------------------------------------------------------------------------
# Search fallback
# ---------------------------------------------------------------------------

EXHAUSTIVE_MAX_ARCS = 12
SEARCH_VERTEX_LIMIT = 8


def _candidate_arc_sets(pairs: list, rng: random.Random, samples: int):
    if len(pairs) <= EXHAUSTIVE_MAX_ARCS:
        for mask in sorted(range(1 << len(pairs)), key=lambda m: (bin(m).count("1"), m)):
            yield [p for i, p in enumerate(pairs) if mask >> i & 1]
        return
    seen = set()
    for _ in range(samples):
        density = rng.uniform(0.2, 0.6)
        arcs = tuple(p for p in pairs if rng.random() < density)
        if arcs in seen:
            continue
        seen.add(arcs)
        yield list(arcs)


def search_gadget(
    spec: InterfaceBehavior,
    max_vertices: Optional[int] = None,
    degree_bounds: Optional[DegreeStats] = None,
    seed: Optional[int] = None,
    samples: Optional[int] = None,
) -> Optional[Gadget]:
    """Smallest-first search for a loopless digraph whose first
    ``spec.arity`` vertices behave exactly as ``spec``.

    Graphs with at most 12 possible arcs are enumerated exhaustively,
    larger ones are sampled from a generator seeded with ``seed``.
    """
    max_vertices = settings.SEARCH_MAX_VERTICES if max_vertices is None else max_vertices
    if max_vertices > SEARCH_VERTEX_LIMIT:
        raise UsageError(f"gadget search is limited to {SEARCH_VERTEX_LIMIT} vertices")
    if spec.mode is BehaviorMode.PROJECTION and not spec.allowed:
        logger.info("empty projection cannot come from a colorable gadget")
        return None
    h = build_target(spec.target)
    rng = random.Random(settings.DEFAULT_SEED if seed is None else seed)
    samples = settings.SEARCH_SAMPLES if samples is None else samples
    interface = tuple(range(spec.arity))

    for n in range(max(spec.arity, 1), max_vertices + 1):
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
        tried = 0
        for arcs in _candidate_arc_sets(pairs, rng, samples):
            g = Digraph(n, arcs)
            if degree_bounds is not None and not degree_stats(g).within(degree_bounds):
                continue
            tried += 1
            if not exists_homomorphism(g, h, max_vertices=None):
                continue
            candidate = Gadget("search", g, interface, spec)
            if interface_behavior(candidate, h, max_vertices=None).allowed == spec.allowed:
                logger.info("search found a %d-vertex, %d-arc gadget", n, len(arcs))
                return candidate
        logger.debug("no match on %d vertices after %d candidates", n, tried)
    return None


# ---------------------------------------------------------------------------
# Fixtures and reports
# ---------------------------------------------------------------------------

FIXTURES_DIR = Path(__file__).resolve().parent.parent / "fixtures" / "gadgets"


def fixture_path(kind, directory: Optional[Path] = None) -> Path:
    return Path(directory or FIXTURES_DIR) / f"{GadgetKind(kind).value}.el"


def load_fixture(kind, directory: Optional[Path] = None) -> Digraph:
    return read_edge_list(fixture_path(kind, directory))


def write_fixtures(directory: Path) -> list[Path]:
    """Write the labeled edge-list of every fixed-size gadget."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for kind in SMALL_KINDS:
        path = fixture_path(kind, directory)
        path.write_text(format_edge_list(build_gadget(kind).digraph))
        written.append(path)
    logger.info("wrote %d gadget fixtures to %s", len(written), directory)
    return written


def format_reports(reports: Sequence[GadgetReport]) -> str:
    return render_template("gadget_report.txt.j2", reports=reports)
