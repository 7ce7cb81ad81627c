"""Arc consistency over list assignments L(v) subset of V(H)."""

import logging
from collections import deque
from typing import Iterable, Optional, Sequence

from app.errors import FormatError, ListsError
from app.services.digraph_service import Digraph
from app.services.target_service import TargetGraph, full_lists

logger = logging.getLogger(__name__)

ColorLists = tuple[frozenset, ...]


def check_lists(g: Digraph, h: TargetGraph, lists: Optional[Sequence[Iterable[int]]]) -> ColorLists:
    """Normalize lists to a tuple of frozensets; ``None`` means all full."""
    if lists is None:
        return full_lists(g.n, h)
    if len(lists) != g.n:
        raise ListsError(f"{len(lists)} lists given for {g.n} vertices")
    normalized = []
    for v, allowed in enumerate(lists):
        allowed = frozenset(allowed)
        stray = [x for x in allowed if not (isinstance(x, int) and 0 <= x < h.n)]
        if stray:
            raise ListsError(f"list of vertex {v} names non-target colors {sorted(map(str, stray))}")
        normalized.append(allowed)
    return tuple(normalized)


def incident_arcs(g: Digraph) -> list[list[int]]:
    incident: list[list[int]] = [[] for _ in range(g.n)]
    for arc_id, (u, v) in enumerate(g.arc_list):
        incident[u].append(arc_id)
        if v != u:
            incident[v].append(arc_id)
    return incident


def _revise(u: int, v: int, domains: list[set], h: TargetGraph) -> tuple[bool, bool]:
    out_sets, in_sets = h.out_sets, h.in_sets
    keep_u = {x for x in domains[u] if not out_sets[x].isdisjoint(domains[v])}
    changed_u = len(keep_u) != len(domains[u])
    if changed_u:
        domains[u] = keep_u
    keep_v = {z for z in domains[v] if not in_sets[z].isdisjoint(domains[u])}
    changed_v = len(keep_v) != len(domains[v])
    if changed_v:
        domains[v] = keep_v
    return changed_u, changed_v


def revise_arc(u: int, v: int, lists: Sequence[frozenset], h: TargetGraph) -> tuple[ColorLists, bool]:
    """Prune L(u) against L(v) along the arc u->v, then L(v) against L(u)."""
    domains = [set(x) for x in lists]
    changed_u, changed_v = _revise(u, v, domains, h)
    return tuple(frozenset(d) for d in domains), changed_u or changed_v


def propagate(
    g: Digraph,
    h: TargetGraph,
    domains: list[set],
    seeds: Iterable[int],
    incident: Sequence[Sequence[int]],
    active: Optional[frozenset] = None,
    stop_on_empty: bool = False,
) -> bool:
    """Run the arc worklist to a fixpoint, mutating ``domains`` in place.

    Returns False when some domain became empty. With ``stop_on_empty`` the
    run ends at the first empty domain instead of reaching the fixpoint.
    """
    arcs = g.arc_list
    queue = deque()
    queued = set()
    for arc_id in seeds:
        if arc_id not in queued and (active is None or arc_id in active):
            queued.add(arc_id)
            queue.append(arc_id)

    consistent = True
    while queue:
        arc_id = queue.popleft()
        queued.discard(arc_id)
        u, v = arcs[arc_id]
        changed_u, changed_v = _revise(u, v, domains, h)
        for w, changed in ((u, changed_u), (v, changed_v)):
            if not changed:
                continue
            if not domains[w]:
                consistent = False
                if stop_on_empty:
                    return False
            for other in incident[w]:
                if other not in queued and (active is None or other in active):
                    queued.add(other)
                    queue.append(other)
    return consistent


def make_arc_consistent(
    g: Digraph,
    lists: Optional[Sequence[Iterable[int]]],
    h: TargetGraph,
    vertices: Optional[Iterable[int]] = None,
    order: Optional[Sequence[int]] = None,
) -> ColorLists:
    """Arc-consistent lists at the fixpoint.

    ``vertices`` restricts propagation to arcs inside that vertex set;
    ``order`` overrides the initial arc-id schedule.
    """
    lists = check_lists(g, h, lists)
    domains = [set(x) for x in lists]
    active = None
    if vertices is not None:
        inside = set(vertices)
        active = frozenset(
            i for i, (u, v) in enumerate(g.arc_list) if u in inside and v in inside
        )
    seeds = order if order is not None else range(len(g.arc_list))
    propagate(g, h, domains, seeds, incident_arcs(g), active)
    return tuple(frozenset(d) for d in domains)


def has_empty(lists: Iterable[frozenset]) -> bool:
    return any(not allowed for allowed in lists)


# ---------------------------------------------------------------------------
# Lists file format: "v: c1 c2 c3", omitted vertices get the full list
# ---------------------------------------------------------------------------

def parse_lists(text: str, g: Digraph, h: TargetGraph) -> ColorLists:
    lists = list(full_lists(g.n, h))
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, sep, tail = line.partition(":")
        if not sep:
            raise FormatError(f"expected 'v: colors', got {line!r}", lineno)
        try:
            v = int(head)
            colors = [int(tok) for tok in tail.split()]
        except ValueError:
            raise FormatError(f"non-integer token in {line!r}", lineno) from None
        if not 0 <= v < g.n:
            raise FormatError(f"vertex {v} out of range 0..{g.n - 1}", lineno)
        if v in seen:
            raise FormatError(f"vertex {v} listed twice", lineno)
        for x in colors:
            if not 0 <= x < h.n:
                raise FormatError(f"color {x} is not a vertex of the target", lineno)
        seen.add(v)
        lists[v] = frozenset(colors)
    return tuple(lists)


def format_lists(lists: Sequence[frozenset]) -> str:
    return "".join(
        f"{v}:" + "".join(f" {x}" for x in sorted(allowed)) + "\n"
        for v, allowed in enumerate(lists)
    )
