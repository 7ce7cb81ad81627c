"""Directed-graph value type, degree statistics, weak components, component
shapes, and the edge-list / DOT text formats."""

import logging
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, NamedTuple, Optional, Sequence

from jinja2 import Environment, FileSystemLoader

from app.errors import FormatError

logger = logging.getLogger(__name__)

TEMPLATES_DIR = Path(__file__).resolve().parent.parent / "templates"
_templates = Environment(
    loader=FileSystemLoader(str(TEMPLATES_DIR)),
    keep_trailing_newline=True,
    trim_blocks=True,
    lstrip_blocks=True,
)


def render_template(name: str, /, **context) -> str:
    return _templates.get_template(name).render(**context)


class Digraph:
    """Immutable digraph on vertices 0..n-1.

    Arcs are kept as a frozenset plus a sorted tuple; the position of an arc
    in ``arc_list`` is its arc id.
    """

    __slots__ = ("n", "arcs", "arc_list", "out_adj", "in_adj", "labels")

    def __init__(
        self,
        n: int,
        arcs: Iterable[tuple[int, int]] = (),
        labels: Optional[Sequence[str]] = None,
    ):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        arc_seq = [(int(u), int(v)) for u, v in arcs]
        arc_set = frozenset(arc_seq)
        if len(arc_set) != len(arc_seq):
            raise ValueError("duplicate arc")
        for u, v in arc_seq:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc ({u}, {v}) out of range for n={n}")
        if labels is not None and len(labels) != n:
            raise ValueError("labels must name every vertex")

        out_adj: list[list[int]] = [[] for _ in range(n)]
        in_adj: list[list[int]] = [[] for _ in range(n)]
        arc_list = tuple(sorted(arc_set))
        for u, v in arc_list:
            out_adj[u].append(v)
            in_adj[v].append(u)

        object.__setattr__(self, "n", n)
        object.__setattr__(self, "arcs", arc_set)
        object.__setattr__(self, "arc_list", arc_list)
        object.__setattr__(self, "out_adj", tuple(tuple(a) for a in out_adj))
        object.__setattr__(self, "in_adj", tuple(tuple(sorted(a)) for a in in_adj))
        object.__setattr__(self, "labels", tuple(labels) if labels is not None else None)

    def __setattr__(self, name, value):
        raise AttributeError("Digraph is immutable")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and self.arcs == other.arcs

    def __hash__(self) -> int:
        return hash((self.n, self.arcs))

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, arcs={list(self.arc_list)})"

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self.arcs

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def degree(self, v: int) -> int:
        return len(self.out_adj[v]) + len(self.in_adj[v])

    def with_labels(self, labels: Sequence[str]) -> "Digraph":
        return Digraph(self.n, self.arc_list, labels)


class DegreeStats(NamedTuple):
    max_out: int
    max_in: int

    def swap(self) -> "DegreeStats":
        return DegreeStats(self.max_in, self.max_out)

    def within(self, bound: "DegreeStats") -> bool:
        return self.max_out <= bound.max_out and self.max_in <= bound.max_in


OUT_BRANCHING = DegreeStats(2, 1)
IN_BRANCHING = DegreeStats(1, 2)
HARD_BOUND = DegreeStats(2, 2)


class ShapeKind(str, Enum):
    TREE = "tree"
    CYCLE_WITH_TREES = "cycle_with_trees"
    UNSUPPORTED = "unsupported"


@dataclass(frozen=True)
class ComponentShape:
    kind: ShapeKind
    cycle: tuple[int, ...] = ()


def degree_stats(g: Digraph) -> DegreeStats:
    if g.n == 0:
        return DegreeStats(0, 0)
    return DegreeStats(
        max(len(a) for a in g.out_adj),
        max(len(a) for a in g.in_adj),
    )


def weak_components(g: Digraph) -> list[tuple[int, ...]]:
    """Connected components of the underlying undirected graph, each sorted,
    ordered by smallest member."""
    seen = [False] * g.n
    components = []
    for start in range(g.n):
        if seen[start]:
            continue
        seen[start] = True
        stack = [start]
        members = []
        while stack:
            v = stack.pop()
            members.append(v)
            for w in g.out_adj[v] + g.in_adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        components.append(tuple(sorted(members)))
    return components


def component_arc_count(g: Digraph, component: Iterable[int]) -> int:
    return sum(len(g.out_adj[v]) for v in component)


def classify_component(
    g: Digraph, component: Sequence[int], bounds: DegreeStats
) -> ComponentShape:
    """Shape of one weak component: a tree, a single directed cycle with
    trees hanging off it, or unsupported.

    ``bounds`` is the degree bound the caller checks, (2, 1) or (1, 2).
    """
    members = sorted(component)
    arcs = component_arc_count(g, members)

    if arcs == len(members) - 1:
        return ComponentShape(ShapeKind.TREE)

    for v in members:
        if len(g.out_adj[v]) > bounds.max_out or len(g.in_adj[v]) > bounds.max_in:
            return ComponentShape(ShapeKind.UNSUPPORTED)
    if arcs != len(members):
        return ComponentShape(ShapeKind.UNSUPPORTED)

    if bounds.max_in <= 1:
        step, forward = g.in_adj, False
    elif bounds.max_out <= 1:
        step, forward = g.out_adj, True
    else:
        return ComponentShape(ShapeKind.UNSUPPORTED)

    # Every member has exactly one arc on the followed side; walk until repetition.
    order: dict[int, int] = {}
    v = members[0]
    while v not in order:
        order[v] = len(order)
        v = step[v][0]
    walk = sorted(order, key=order.get)
    cycle = walk[order[v]:]
    if not forward:
        cycle.reverse()
    pivot = cycle.index(min(cycle))
    cycle = cycle[pivot:] + cycle[:pivot]
    return ComponentShape(ShapeKind.CYCLE_WITH_TREES, tuple(cycle))


def reverse(g: Digraph) -> Digraph:
    return Digraph(g.n, ((v, u) for u, v in g.arc_list), g.labels)


def underlying_undirected_max_degree(g: Digraph) -> int:
    """Max number of distinct neighbours; a digon is one undirected edge and
    loops are ignored."""
    best = 0
    for v in range(g.n):
        neighbours = set(g.out_adj[v]) | set(g.in_adj[v])
        neighbours.discard(v)
        best = max(best, len(neighbours))
    return best


# ---------------------------------------------------------------------------
# Text formats
# ---------------------------------------------------------------------------

_LABEL_LINE = re.compile(r"^#\s*label\s+(\d+)\s+(.+?)\s*$")


def parse_edge_list(text: str) -> Digraph:
    """Parse ``n m`` followed by m ``u v`` lines. ``#`` lines are comments;
    ``# label <v> <name>`` comments carry vertex labels."""
    header: Optional[tuple[int, int]] = None
    arcs: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    labels: dict[int, str] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            match = _LABEL_LINE.match(line)
            if match:
                labels[int(match.group(1))] = match.group(2)
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"expected two integers, got {line!r}", lineno)
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError(f"non-integer token in {line!r}", lineno) from None

        if header is None:
            if a < 0 or b < 0:
                raise FormatError("negative vertex or arc count", lineno)
            header = (a, b)
            continue
        n = header[0]
        if not (0 <= a < n and 0 <= b < n):
            raise FormatError(f"vertex id out of range 0..{n - 1}", lineno)
        if (a, b) in seen:
            raise FormatError(f"duplicate arc {a} {b}", lineno)
        seen.add((a, b))
        arcs.append((a, b))

    if header is None:
        raise FormatError("missing 'n m' header")
    n, m = header
    if len(arcs) != m:
        raise FormatError(f"header declares {m} arcs, found {len(arcs)}")
    for v in labels:
        if v >= n:
            raise FormatError(f"label for unknown vertex {v}")
    label_seq = [labels.get(v, str(v)) for v in range(n)] if labels else None
    return Digraph(n, arcs, label_seq)


def format_edge_list(g: Digraph, with_labels: bool = True) -> str:
    lines = []
    if with_labels and g.labels is not None:
        lines.extend(f"# label {v} {g.labels[v]}" for v in range(g.n))
    lines.append(f"{g.n} {len(g.arc_list)}")
    lines.extend(f"{u} {v}" for u, v in g.arc_list)
    return "\n".join(lines) + "\n"


def read_edge_list(path: Path) -> Digraph:
    try:
        return parse_edge_list(Path(path).read_text())
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e.strerror}") from None


def to_dot(g: Digraph, name: str = "G") -> str:
    vertices = [
        {"id": v, "label": g.labels[v] if g.labels is not None else None}
        for v in range(g.n)
    ]
    return render_template("digraph.dot.j2", name=name, vertices=vertices, arcs=g.arc_list)


_DOT_HEADER = re.compile(r"^digraph\s+(\w+)\s*\{$")
_DOT_VERTEX = re.compile(r'^(\d+)(?:\s*\[label="((?:[^"\\]|\\.)*)"\])?\s*;$')
_DOT_ARC = re.compile(r"^(\d+)\s*->\s*(\d+)\s*;$")


def parse_dot(text: str) -> Digraph:
    """Read back the DOT subset written by :func:`to_dot`."""
    vertices: dict[int, Optional[str]] = {}
    arcs: list[tuple[int, int]] = []
    opened = closed = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("//"):
            continue
        if not opened:
            if not _DOT_HEADER.match(line):
                raise FormatError("expected 'digraph <name> {'", lineno)
            opened = True
            continue
        if line == "}":
            closed = True
            continue
        if closed:
            raise FormatError("content after closing brace", lineno)
        match = _DOT_ARC.match(line)
        if match:
            arc = (int(match.group(1)), int(match.group(2)))
            if arc in arcs:
                raise FormatError(f"duplicate arc {arc[0]} -> {arc[1]}", lineno)
            arcs.append(arc)
            continue
        match = _DOT_VERTEX.match(line)
        if match:
            label = match.group(2)
            vertices[int(match.group(1))] = label.replace('\\"', '"') if label else None
            continue
        raise FormatError(f"unsupported DOT statement {line!r}", lineno)

    if not closed:
        raise FormatError("missing closing brace")
    ids = set(vertices) | {u for u, _ in arcs} | {v for _, v in arcs}
    n = max(ids) + 1 if ids else 0
    labels = None
    if any(label is not None for label in vertices.values()):
        labels = [vertices.get(v) or str(v) for v in range(n)]
    return Digraph(n, arcs, labels)


class DigraphBuilder:
    """Accumulates labeled vertices and arcs, then freezes into a Digraph."""

    def __init__(self):
        self.labels: list[str] = []
        self.arcs: list[tuple[int, int]] = []
        self._arc_set: set[tuple[int, int]] = set()

    @property
    def n(self) -> int:
        return len(self.labels)

    def add_vertex(self, label: str) -> int:
        self.labels.append(label)
        return len(self.labels) - 1

    def add_arc(self, u: int, v: int) -> None:
        if (u, v) in self._arc_set:
            raise ValueError(f"duplicate arc {self.labels[u]} -> {self.labels[v]}")
        self._arc_set.add((u, v))
        self.arcs.append((u, v))

    def add_path(self, *vertices: int) -> None:
        for u, v in zip(vertices, vertices[1:]):
            self.add_arc(u, v)

    def build(self) -> Digraph:
        return Digraph(self.n, self.arcs, self.labels)
