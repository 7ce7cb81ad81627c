"""Target digraphs A, B, C, custom targets, and the homomorphism predicates."""

import itertools
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Sequence, Union

from app.errors import ColoringError, UsageError
from app.services.digraph_service import Digraph, read_edge_list, reverse

logger = logging.getLogger(__name__)

# Reconstructed from the prose constraints on each target; see candidate_targets.
TARGET_ARCS = {
    "A": ((0, 1), (1, 0), (0, 2), (2, 1)),
    "B": ((0, 1), (1, 0), (0, 2), (1, 2), (2, 1)),
    "C": ((0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)),
}

Coloring = tuple[int, ...]


@dataclass(frozen=True)
class TargetGraph:
    digraph: Digraph
    name: str = "custom"
    out_sets: tuple[frozenset, ...] = field(init=False, repr=False, compare=False)
    in_sets: tuple[frozenset, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        g = self.digraph
        object.__setattr__(self, "out_sets", tuple(frozenset(a) for a in g.out_adj))
        object.__setattr__(self, "in_sets", tuple(frozenset(a) for a in g.in_adj))

    @property
    def n(self) -> int:
        return self.digraph.n

    @property
    def vertices(self) -> range:
        return range(self.digraph.n)

    def has_arc(self, x: int, y: int) -> bool:
        return y in self.out_sets[x]

    def has_loop(self) -> bool:
        return any(x in self.out_sets[x] for x in self.vertices)


def build_target(name: str) -> TargetGraph:
    key = name.upper()
    if key not in TARGET_ARCS:
        raise UsageError(f"unknown target {name!r}; expected A, B or C")
    return TargetGraph(Digraph(3, TARGET_ARCS[key]), key)


def load_target(spec: Union[str, Path]) -> TargetGraph:
    """Resolve a target given by name (A, B, C) or by edge-list path."""
    text = str(spec)
    if text.upper() in TARGET_ARCS:
        return build_target(text)
    path = Path(text)
    return TargetGraph(read_edge_list(path), path.stem)


def reverse_target(h: TargetGraph) -> TargetGraph:
    return TargetGraph(reverse(h.digraph), f"{h.name}^R")


def check_total(g: Digraph, h: TargetGraph, f: Sequence[int]) -> None:
    if len(f) != g.n:
        raise ColoringError(f"coloring covers {len(f)} vertices, graph has {g.n}")
    for v, x in enumerate(f):
        if x is None or not (0 <= x < h.n):
            raise ColoringError(f"vertex {v} has color {x!r}, not a vertex of the target")


def is_homomorphism(g: Digraph, h: TargetGraph, f: Sequence[int]) -> bool:
    check_total(g, h, f)
    return all(h.has_arc(f[u], f[v]) for u, v in g.arc_list)


def respects_lists(f: Sequence[int], lists: Sequence[frozenset]) -> bool:
    if len(f) != len(lists):
        raise ColoringError("coloring and lists cover different vertex sets")
    return all(x in allowed for x, allowed in zip(f, lists))


def coloring_from_mapping(n: int, mapping: Mapping[int, int]) -> Coloring:
    missing = [v for v in range(n) if v not in mapping]
    if missing:
        raise ColoringError(f"coloring is not total; missing {missing[:5]}")
    return tuple(mapping[v] for v in range(n))


# ---------------------------------------------------------------------------
# Constraint search pinning A and B
# ---------------------------------------------------------------------------

_CYCLE3 = Digraph(3, ((0, 1), (1, 2), (2, 0)))
_CYCLE_PATTERN = {(0, 2, 1), (2, 1, 0), (1, 0, 2)}


def _cycle_colorings(h: Digraph) -> set[tuple[int, int, int]]:
    return {
        f for f in itertools.product(range(3), repeat=3)
        if all(h.has_arc(f[u], f[v]) for u, v in _CYCLE3.arc_list)
    }


def _digons(h: Digraph) -> set[frozenset]:
    return {frozenset((u, v)) for u, v in h.arc_list if u < v and h.has_arc(v, u)}


def satisfies_a_checklist(h: Digraph) -> bool:
    return (
        not any(h.has_arc(v, v) for v in range(3))
        and _digons(h) == {frozenset((0, 1))}
        and set(h.out_adj[1]) == {0}
        and _cycle_colorings(h) == _CYCLE_PATTERN
    )


def satisfies_b_checklist(h: Digraph) -> bool:
    return (
        not any(h.has_arc(v, v) for v in range(3))
        and not h.has_arc(2, 0)
        and {0, 1} <= set(h.in_adj[2])
        and len(h.out_adj[2]) == 1
        and _cycle_colorings(h) == _CYCLE_PATTERN
    )


CHECKLISTS = {"A": satisfies_a_checklist, "B": satisfies_b_checklist}


def candidate_targets(name: str) -> list[Digraph]:
    """All loopless digraphs on {0, 1, 2} passing the checklist for A or B."""
    check = CHECKLISTS.get(name.upper())
    if check is None:
        raise UsageError(f"no checklist for target {name!r}")
    possible = [(u, v) for u in range(3) for v in range(3) if u != v]
    found = []
    for mask in range(1 << len(possible)):
        arcs = [a for i, a in enumerate(possible) if mask >> i & 1]
        h = Digraph(3, arcs)
        if check(h):
            found.append(h)
    logger.debug("checklist %s admits %d digraph(s)", name, len(found))
    return found


def full_lists(n: int, h: TargetGraph) -> tuple[frozenset, ...]:
    everything = frozenset(h.vertices)
    return tuple(everything for _ in range(n))


def pinned_lists(
    n: int, h: TargetGraph, pins: Optional[Mapping[int, int]] = None
) -> tuple[frozenset, ...]:
    lists = list(full_lists(n, h))
    for v, x in (pins or {}).items():
        lists[v] = frozenset((x,))
    return tuple(lists)
