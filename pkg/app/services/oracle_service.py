"""Exact list-homomorphism search for any digraph pair.

This is the ground truth the bounded solver, the gadgets and the reductions
are checked against.
"""

import itertools
import logging
from typing import Iterable, Iterator, Optional, Sequence

import z3

from app.config import settings
from app.errors import ColoringError, OracleLimitError
from app.services.consistency_service import (
    ColorLists,
    check_lists,
    has_empty,
    incident_arcs,
    make_arc_consistent,
    propagate,
)
from app.services.digraph_service import Digraph
from app.services.target_service import Coloring, TargetGraph, is_homomorphism

logger = logging.getLogger(__name__)

_DEFAULT = object()


def _cap(g: Digraph, max_vertices) -> None:
    limit = settings.ORACLE_MAX_VERTICES if max_vertices is _DEFAULT else max_vertices
    if limit is not None and g.n > limit:
        raise OracleLimitError(
            f"graph has {g.n} vertices, exact oracle cap is {limit}; "
            "use the bounded solver or raise the cap / set a limit"
        )


class _Search:
    """Backtracking over a fixed vertex order.

    With ``prune`` the search maintains arc consistency after every choice;
    without it, a choice is only checked against already-colored neighbours.
    """

    def __init__(self, g: Digraph, h: TargetGraph, lists: ColorLists, order: Sequence[int], prune: bool):
        self.g = g
        self.h = h
        self.lists = lists
        self.order = list(order)
        self.prune = prune
        self.incident = incident_arcs(g)

    def run(self) -> Iterator[Coloring]:
        domains = [set(x) for x in self.lists]
        if self.prune:
            if not propagate(self.g, self.h, domains, range(len(self.g.arc_list)),
                             self.incident, stop_on_empty=True):
                return
        coloring: list[Optional[int]] = [None] * self.g.n
        yield from self._extend(0, domains, coloring)

    def _compatible(self, v: int, x: int, coloring: list) -> bool:
        h = self.h
        for w in self.g.out_adj[v]:
            y = x if w == v else coloring[w]
            if y is not None and not h.has_arc(x, y):
                return False
        for w in self.g.in_adj[v]:
            y = x if w == v else coloring[w]
            if y is not None and not h.has_arc(y, x):
                return False
        return True

    def _extend(self, depth: int, domains: list[set], coloring: list) -> Iterator[Coloring]:
        if depth == len(self.order):
            yield tuple(coloring)
            return
        v = self.order[depth]
        for x in sorted(domains[v]):
            if not self._compatible(v, x, coloring):
                continue
            if self.prune:
                narrowed = [set(d) for d in domains]
                narrowed[v] = {x}
                if not propagate(self.g, self.h, narrowed, self.incident[v],
                                 self.incident, stop_on_empty=True):
                    continue
            else:
                narrowed = domains
            coloring[v] = x
            yield from self._extend(depth + 1, narrowed, coloring)
            coloring[v] = None


def _degree_order(g: Digraph) -> list[int]:
    return sorted(range(g.n), key=lambda v: (-g.degree(v), v))


def _any(literals: list, ctx: z3.Context):
    if not literals:
        return z3.BoolVal(False, ctx)
    return literals[0] if len(literals) == 1 else z3.Or(*literals)


def _smt_homomorphism(g: Digraph, h: TargetGraph, lists: ColorLists) -> Optional[Coloring]:
    """Decide with z3's SAT core on the support encoding.

    One boolean per (vertex, list color); exactly one per vertex; a chosen
    color needs a supporting color at the other end of every incident arc.
    """
    lists = make_arc_consistent(g, lists, h)
    if has_empty(lists):
        return None
    # z3 contexts are not thread-safe; one per call.
    ctx = z3.Context()
    picks = [
        {x: z3.Bool(f"v{v}c{x}", ctx) for x in sorted(lists[v])}
        for v in range(g.n)
    ]
    solver = z3.Solver(ctx=ctx)
    for choice in picks:
        literals = list(choice.values())
        solver.add(_any(literals, ctx))
        for a, b in itertools.combinations(literals, 2):
            solver.add(z3.Or(z3.Not(a), z3.Not(b)))
    for u, w in g.arc_list:
        for x, p in picks[u].items():
            solver.add(z3.Implies(p, _any([q for y, q in picks[w].items() if h.has_arc(x, y)], ctx)))
        for y, q in picks[w].items():
            solver.add(z3.Implies(q, _any([p for x, p in picks[u].items() if h.has_arc(x, y)], ctx)))

    verdict = solver.check()
    if verdict == z3.unsat:
        logger.debug("z3: no homomorphism for %d vertices", g.n)
        return None
    if verdict != z3.sat:
        raise OracleLimitError(f"z3 returned {verdict} on a {g.n}-vertex graph")
    model = solver.model()
    coloring = tuple(
        next(x for x, p in choice.items() if z3.is_true(model.eval(p, model_completion=True)))
        for choice in picks
    )
    if not is_homomorphism(g, h, coloring):
        raise ColoringError("z3 model does not decode to a homomorphism")
    return coloring


def iter_homomorphisms(
    g: Digraph,
    h: TargetGraph,
    lists: Optional[Sequence[Iterable[int]]] = None,
    prune: bool = True,
    max_vertices=_DEFAULT,
) -> Iterator[Coloring]:
    """Lazily yield list homomorphisms in lexicographic order."""
    _cap(g, max_vertices)
    lists = check_lists(g, h, lists)
    yield from _Search(g, h, lists, range(g.n), prune).run()


def enumerate_homomorphisms(
    g: Digraph,
    h: TargetGraph,
    lists: Optional[Sequence[Iterable[int]]] = None,
    limit: Optional[int] = None,
    prune: bool = True,
    max_vertices=_DEFAULT,
) -> list[Coloring]:
    found = []
    if limit is not None and limit <= 0:
        return found
    for f in iter_homomorphisms(g, h, lists, prune, max_vertices):
        found.append(f)
        if limit is not None and len(found) >= limit:
            break
    return found


def find_homomorphism(
    g: Digraph,
    h: TargetGraph,
    lists: Optional[Sequence[Iterable[int]]] = None,
    max_vertices=_DEFAULT,
) -> Optional[Coloring]:
    """Any list homomorphism. Small graphs are searched high-degree vertices
    first; graphs of SMT_MIN_VERTICES or more go to z3."""
    _cap(g, max_vertices)
    lists = check_lists(g, h, lists)
    if g.n >= settings.SMT_MIN_VERTICES:
        return _smt_homomorphism(g, h, lists)
    for f in _Search(g, h, lists, _degree_order(g), prune=True).run():
        return f
    return None


def exists_homomorphism(
    g: Digraph,
    h: TargetGraph,
    lists: Optional[Sequence[Iterable[int]]] = None,
    max_vertices=_DEFAULT,
) -> bool:
    return find_homomorphism(g, h, lists, max_vertices) is not None


def count_homomorphisms(
    g: Digraph,
    h: TargetGraph,
    lists: Optional[Sequence[Iterable[int]]] = None,
    prune: bool = True,
    max_vertices=_DEFAULT,
) -> int:
    return sum(1 for _ in iter_homomorphisms(g, h, lists, prune, max_vertices))
