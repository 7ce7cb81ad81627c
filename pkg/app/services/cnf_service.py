"""3-literal CNF formulas: DIMACS text, 3-SAT / 1-in-3-SAT evaluation and a
brute-force satisfiability oracle."""

import itertools
import logging
import random
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional, Sequence

from app.config import settings
from app.errors import AssignmentError, FormatError, OracleLimitError

logger = logging.getLogger(__name__)

CLAUSE_WIDTH = 3


class Semantics(str, Enum):
    THREE_SAT = "3sat"
    ONE_IN_THREE = "1in3"


@dataclass(frozen=True)
class Literal:
    variable: int
    positive: bool = True

    def __post_init__(self):
        if self.variable < 1:
            raise ValueError("variable index must be >= 1")

    @classmethod
    def from_int(cls, value: int) -> "Literal":
        return cls(abs(value), value > 0)

    def to_int(self) -> int:
        return self.variable if self.positive else -self.variable

    def value(self, assignment: Sequence[bool]) -> bool:
        return assignment[self.variable - 1] == self.positive

    def __str__(self) -> str:
        return f"x{self.variable}" if self.positive else f"~x{self.variable}"


Clause = tuple[Literal, Literal, Literal]
Assignment = tuple[bool, ...]


@dataclass(frozen=True)
class Formula:
    num_vars: int
    clauses: tuple[Clause, ...] = ()

    def __post_init__(self):
        for i, clause in enumerate(self.clauses):
            if len(clause) != CLAUSE_WIDTH:
                raise ValueError(f"clause {i} has {len(clause)} literals")
            for lit in clause:
                if lit.variable > self.num_vars:
                    raise ValueError(f"clause {i} mentions x{lit.variable} > {self.num_vars}")

    @classmethod
    def from_ints(cls, num_vars: int, clauses: Sequence[Sequence[int]]) -> "Formula":
        return cls(num_vars, tuple(tuple(Literal.from_int(x) for x in c) for c in clauses))

    def occurrences(self, variable: int) -> tuple[int, int]:
        """(positive, negative) occurrence counts of a variable."""
        pos = neg = 0
        for clause in self.clauses:
            for lit in clause:
                if lit.variable == variable:
                    if lit.positive:
                        pos += 1
                    else:
                        neg += 1
        return pos, neg

    def __str__(self) -> str:
        return " & ".join("(" + " | ".join(map(str, c)) + ")" for c in self.clauses) or "TRUE"


def parse_dimacs(text: str) -> Formula:
    """Parse DIMACS CNF with exactly three literals per clause.

    Clauses are 0-terminated and may span lines; ``c`` lines are comments.
    """
    header: Optional[tuple[int, int]] = None
    clauses: list[tuple[Literal, ...]] = []
    pending: list[int] = []
    pending_line = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise FormatError("second problem line", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormatError(f"expected 'p cnf <vars> <clauses>', got {line!r}", lineno)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise FormatError("non-integer counts in problem line", lineno) from None
            if header[0] < 0 or header[1] < 0:
                raise FormatError("negative counts in problem line", lineno)
            continue
        if line.startswith("%"):
            break
        if header is None:
            raise FormatError("clause before problem line", lineno)
        for token in line.split():
            try:
                value = int(token)
            except ValueError:
                raise FormatError(f"bad literal {token!r}", lineno) from None
            if value == 0:
                if len(pending) != CLAUSE_WIDTH:
                    raise FormatError(
                        f"clause has {len(pending)} literals, expected {CLAUSE_WIDTH}", pending_line or lineno
                    )
                clauses.append(tuple(Literal.from_int(x) for x in pending))
                pending = []
                pending_line = 0
                continue
            if abs(value) > header[0]:
                raise FormatError(f"literal {value} out of range 1..{header[0]}", lineno)
            if not pending:
                pending_line = lineno
            pending.append(value)

    if header is None:
        raise FormatError("missing problem line")
    if pending:
        raise FormatError("last clause is not 0-terminated", pending_line)
    if len(clauses) != header[1]:
        raise FormatError(f"problem line declares {header[1]} clauses, found {len(clauses)}")
    return Formula(header[0], tuple(clauses))


def format_dimacs(formula: Formula) -> str:
    lines = [f"p cnf {formula.num_vars} {len(formula.clauses)}"]
    lines.extend(" ".join(str(lit.to_int()) for lit in c) + " 0" for c in formula.clauses)
    return "\n".join(lines) + "\n"


def _check_total(formula: Formula, assignment: Sequence[bool]) -> None:
    if len(assignment) != formula.num_vars:
        raise AssignmentError(
            f"assignment covers {len(assignment)} variables, formula has {formula.num_vars}"
        )


def true_count(clause: Clause, assignment: Sequence[bool]) -> int:
    """True literal occurrences; repeated literals count once per occurrence."""
    return sum(lit.value(assignment) for lit in clause)


def evaluate(formula: Formula, assignment: Sequence[bool], semantics: Semantics) -> bool:
    _check_total(formula, assignment)
    if semantics is Semantics.ONE_IN_THREE:
        return all(true_count(c, assignment) == 1 for c in formula.clauses)
    return all(true_count(c, assignment) >= 1 for c in formula.clauses)


def assignments(num_vars: int) -> Iterator[Assignment]:
    """All assignments in lexicographic order with True before False."""
    return itertools.product((True, False), repeat=num_vars)


def brute_force_sat(
    formula: Formula, semantics: Semantics, max_vars: Optional[int] = None
) -> Optional[Assignment]:
    limit = settings.SAT_MAX_VARIABLES if max_vars is None else max_vars
    if formula.num_vars > limit:
        raise OracleLimitError(f"{formula.num_vars} variables exceed the brute-force cap of {limit}")
    for assignment in assignments(formula.num_vars):
        if evaluate(formula, assignment, semantics):
            return tuple(assignment)
    return None


def random_formula(rng: random.Random, num_vars: int, num_clauses: int) -> Formula:
    clauses = []
    for _ in range(num_clauses):
        clauses.append(tuple(
            Literal(rng.randint(1, num_vars), rng.random() < 0.5) for _ in range(CLAUSE_WIDTH)
        ))
    return Formula(num_vars, tuple(clauses))


def _canonical(clauses: Sequence[Sequence[int]], num_vars: int, flips: bool) -> tuple:
    """Smallest clause multiset over all variable renamings, and polarity
    flips too when ``flips`` is set."""
    best = None
    signs = itertools.product((1, -1), repeat=num_vars) if flips else [(1,) * num_vars]
    for perm, sign in itertools.product(itertools.permutations(range(1, num_vars + 1)), list(signs)):
        image = tuple(sorted(
            tuple(sorted(sign[abs(x) - 1] * perm[abs(x) - 1] * (1 if x > 0 else -1) for x in c))
            for c in clauses
        ))
        if best is None or image < best:
            best = image
    return best


def all_small_formulas(max_vars: int, max_clauses: int, flips: bool = False) -> Iterator[Formula]:
    """Every formula with at most ``max_clauses`` clauses over at most
    ``max_vars`` variables, one representative per class under variable
    renaming and literal/clause order. ``flips`` also merges formulas that
    differ by negating variables."""
    literals = [s * v for v in range(1, max_vars + 1) for s in (1, -1)]
    clause_pool = list(itertools.combinations_with_replacement(literals, CLAUSE_WIDTH))
    seen = set()
    for count in range(max_clauses + 1):
        for clauses in itertools.combinations_with_replacement(clause_pool, count):
            used = sorted({abs(x) for c in clauses for x in c})
            rename = {v: i + 1 for i, v in enumerate(used)}
            compact = [[rename[abs(x)] * (1 if x > 0 else -1) for x in c] for c in clauses]
            key = _canonical(compact, len(used), flips)
            if key in seen:
                continue
            seen.add(key)
            yield Formula.from_ints(len(used), key)
