"""Polynomial list H-coloring for digraphs with max out-degree 2 and max
in-degree 1, or the mirror bound (1, 2).

Steps: arc consistency over all arcs; stop on an empty list; otherwise
solve each weak component separately. Trees are colored by propagating one
choice. A component holding a directed cycle branches over the list of one
cycle vertex, re-runs arc consistency inside the component for each choice,
walks the cycle, then extends into the hanging trees.
"""

import logging
from collections import deque
from typing import Iterable, Optional, Sequence

from app.errors import DegreeBoundError
from app.services.consistency_service import (
    ColorLists,
    check_lists,
    has_empty,
    make_arc_consistent,
)
from app.services.digraph_service import (
    IN_BRANCHING,
    OUT_BRANCHING,
    ComponentShape,
    Digraph,
    ShapeKind,
    classify_component,
    degree_stats,
    reverse,
    weak_components,
)
from app.services.target_service import Coloring, TargetGraph, reverse_target

logger = logging.getLogger(__name__)


def _smallest_fit(w: int, lists: ColorLists, h: TargetGraph, g: Digraph, coloring: dict) -> Optional[int]:
    """Smallest color in L(w) compatible with every colored neighbour of w."""
    for y in sorted(lists[w]):
        ok = True
        for t in g.out_adj[w]:
            z = y if t == w else coloring.get(t)
            if z is not None and not h.has_arc(y, z):
                ok = False
                break
        if ok:
            for s in g.in_adj[w]:
                z = y if s == w else coloring.get(s)
                if z is not None and not h.has_arc(z, y):
                    ok = False
                    break
        if ok:
            return y
    return None


def _spread(g: Digraph, members: set, lists: ColorLists, h: TargetGraph, coloring: dict) -> bool:
    """Extend ``coloring`` breadth-first to every vertex of ``members``."""
    queue = deque(sorted(v for v in coloring if v in members))
    while queue:
        v = queue.popleft()
        for w in g.out_adj[v] + g.in_adj[v]:
            if w in coloring or w not in members:
                continue
            y = _smallest_fit(w, lists, h, g, coloring)
            if y is None:
                logger.debug("propagation dead-ends at vertex %d", w)
                return False
            coloring[w] = y
            queue.append(w)
    return len([v for v in members if v in coloring]) == len(members)


def solve_tree_component(
    g: Digraph, component: Sequence[int], lists: ColorLists, h: TargetGraph
) -> Optional[dict[int, int]]:
    """Color a tree component from arc-consistent lists: seed the smallest
    vertex with its smallest color and propagate."""
    members = set(component)
    if any(not lists[v] for v in members):
        return None
    seed = min(members)
    coloring = {seed: min(lists[seed])}
    if not _spread(g, members, lists, h, coloring):
        return None
    return coloring


def solve_cycle_component(
    g: Digraph,
    component: Sequence[int],
    shape: ComponentShape,
    lists: ColorLists,
    h: TargetGraph,
) -> Optional[dict[int, int]]:
    """Try every color of the smallest cycle vertex; first success wins."""
    members = set(component)
    cycle = shape.cycle
    seed = cycle[0]
    for x in sorted(lists[seed]):
        trial = list(lists)
        trial[seed] = frozenset((x,))
        narrowed = make_arc_consistent(g, trial, h, vertices=members)
        if any(not narrowed[v] for v in members):
            logger.debug("seed %d -> %d: arc consistency empties a list", seed, x)
            continue

        coloring = {seed: x}
        walked = True
        for prev, cur in zip(cycle, cycle[1:]):
            candidates = [y for y in sorted(narrowed[cur]) if h.has_arc(coloring[prev], y)]
            if not candidates:
                walked = False
                break
            coloring[cur] = candidates[0]
        if not walked or not h.has_arc(coloring[cycle[-1]], x):
            logger.debug("seed %d -> %d: cycle walk does not close", seed, x)
            continue

        if _spread(g, members, narrowed, h, coloring):
            return coloring
        logger.debug("seed %d -> %d: hanging-tree extension failed", seed, x)
    return None


def _solve_out_branching(g: Digraph, lists: ColorLists, h: TargetGraph) -> Optional[Coloring]:
    lists = make_arc_consistent(g, lists, h)
    if has_empty(lists):
        return None
    coloring: dict[int, int] = {}
    for component in weak_components(g):
        shape = classify_component(g, component, OUT_BRANCHING)
        if shape.kind is ShapeKind.TREE:
            part = solve_tree_component(g, component, lists, h)
        elif shape.kind is ShapeKind.CYCLE_WITH_TREES:
            part = solve_cycle_component(g, component, shape, lists, h)
        else:
            raise DegreeBoundError(f"component starting at {component[0]} is not supported")
        if part is None:
            logger.debug("component starting at %d has no list homomorphism", component[0])
            return None
        coloring.update(part)
    return tuple(coloring[v] for v in range(g.n))


def solve_bounded(
    g: Digraph,
    lists: Optional[Sequence[Iterable[int]]],
    h: TargetGraph,
) -> Optional[Coloring]:
    """A list homomorphism g -> h, or None when none exists.

    Raises DegreeBoundError unless g has (max_out, max_in) within (2, 1) or
    (1, 2). The (1, 2) case is solved on the reversed pair.
    """
    lists = check_lists(g, h, lists)
    stats = degree_stats(g)
    if stats.within(OUT_BRANCHING):
        return _solve_out_branching(g, lists, h)
    if stats.within(IN_BRANCHING):
        return _solve_out_branching(reverse(g), lists, reverse_target(h))
    raise DegreeBoundError(
        f"bounded solver needs max out/in degree within (2, 1) or (1, 2); "
        f"graph has ({stats.max_out}, {stats.max_in})"
    )
