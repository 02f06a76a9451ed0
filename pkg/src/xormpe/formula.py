"""XOR-CNF formulas with per-literal weights, and their text format.

File format (UTF-8, line oriented):

    c <comment>                 ignored
    p cnf <var_count> <clause_count>
    1 -2 0                      disjunctive clause (DIMACS)
    x 2 -4 0                    xor clause (x2 XOR not-x4)
    w <lit> <weight>            weight of a literal; a positive lit sets the
                                weight of assigning the variable 1, a negative
                                lit the weight of assigning 0

Exactly one header, before any clause. Weight lines may appear anywhere after
the header; the last occurrence of a literal wins, and unlisted literals weigh
1. Weights are nonnegative base-10 decimals; zero is allowed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping


class ParseError(Exception):
    """Malformed instance text; carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ClauseKind(enum.Enum):
    DISJUNCTION = "or"
    XOR = "xor"


@dataclass(frozen=True)
class Literal:
    var: int
    positive: bool

    def __post_init__(self):
        if self.var < 1:
            raise ValueError(f"variable index must be >= 1, got {self.var}")

    def to_int(self) -> int:
        return self.var if self.positive else -self.var

    @staticmethod
    def from_int(lit: int) -> "Literal":
        if lit == 0:
            raise ValueError("literal 0 is reserved as the clause terminator")
        return Literal(abs(lit), lit > 0)


@dataclass(frozen=True)
class Clause:
    kind: ClauseKind
    literals: tuple[Literal, ...]

    def __post_init__(self):
        if not self.literals:
            raise ValueError("empty clause")
        seen = set()
        for lit in self.literals:
            if lit.var in seen:
                raise ValueError(f"duplicate variable {lit.var} in clause")
            seen.add(lit.var)

    @property
    def variables(self) -> frozenset[int]:
        return frozenset(lit.var for lit in self.literals)


@dataclass
class Formula:
    """An XOR-CNF formula over variables 1..var_count.

    An empty clause list is legal and denotes the constant-true function over
    the declared variables. Variables declared in the header but absent from
    every clause still count as formula variables.
    """

    var_count: int
    clauses: list[Clause]

    def __post_init__(self):
        if self.var_count < 0:
            raise ValueError("negative variable count")
        for i, clause in enumerate(self.clauses):
            for lit in clause.literals:
                if lit.var > self.var_count:
                    raise ValueError(
                        f"clause {i}: variable {lit.var} exceeds declared count "
                        f"{self.var_count}"
                    )

    @property
    def variables(self) -> range:
        return range(1, self.var_count + 1)


def _check_weight(value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"weight must be finite, got {value}")
    if value < 0:
        raise ValueError(f"negative weight {value}")
    return value


class WeightFunction:
    """Per-variable weights for the two polarities.

    Unlisted variables weigh (1, 1); explicitly listed variables are tracked
    so printing reproduces exactly the listed set.
    """

    def __init__(self, pairs: Mapping[int, tuple[float, float]] | None = None):
        self._pairs: dict[int, tuple[float, float]] = {}
        if pairs:
            for var, (w_neg, w_pos) in pairs.items():
                self._pairs[int(var)] = (_check_weight(w_neg), _check_weight(w_pos))

    def set_literal(self, lit: int, weight: float) -> None:
        """Set the weight of one literal (positive lit: the 1-polarity)."""
        if lit == 0:
            raise ValueError("literal 0 has no weight")
        weight = _check_weight(weight)
        var = abs(lit)
        w_neg, w_pos = self._pairs.get(var, (1.0, 1.0))
        self._pairs[var] = (w_neg, weight) if lit > 0 else (weight, w_pos)

    def pair(self, var: int) -> tuple[float, float]:
        return self._pairs.get(var, (1.0, 1.0))

    def weight(self, var: int, value: bool) -> float:
        w_neg, w_pos = self.pair(var)
        return w_pos if value else w_neg

    def listed(self) -> list[tuple[int, float, float]]:
        """Explicitly listed variables, sorted by index."""
        return [(v, *self._pairs[v]) for v in sorted(self._pairs)]

    def __eq__(self, other) -> bool:
        return isinstance(other, WeightFunction) and self._pairs == other._pairs

    def __repr__(self) -> str:
        return f"WeightFunction({self._pairs!r})"


Assignment = Mapping[int, bool]


def parse_formula(source) -> tuple[Formula, WeightFunction]:
    """Parse instance text into a formula and its weight function.

    Accepts a str, bytes, or a file-like object. Raises ParseError with a
    line number on malformed input.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, (bytes, bytearray)):
        source = source.decode("utf-8")

    var_count: int | None = None
    declared_clauses = 0
    clauses: list[Clause] = []
    weights = WeightFunction()

    for lineno, raw in enumerate(source.splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        if tokens[0] == "p":
            if var_count is not None:
                raise ParseError("duplicate 'p cnf' header", lineno)
            if len(tokens) != 4 or tokens[1] != "cnf":
                raise ParseError(f"malformed header {raw!r}", lineno)
            var_count = _parse_int(tokens[2], lineno)
            declared_clauses = _parse_int(tokens[3], lineno)
            if var_count < 0 or declared_clauses < 0:
                raise ParseError("malformed header: negative count", lineno)
            continue
        if var_count is None:
            raise ParseError("clause or weight line before 'p cnf' header", lineno)
        if tokens[0] == "w":
            _parse_weight_line(tokens, weights, var_count, lineno)
            continue
        clauses.append(_parse_clause_line(tokens, var_count, lineno))

    if var_count is None:
        raise ParseError("missing 'p cnf' header")
    if len(clauses) != declared_clauses:
        raise ParseError(
            f"header declares {declared_clauses} clauses, found {len(clauses)}"
        )
    return Formula(var_count, clauses), weights


def _parse_int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"non-numeric token {token!r}", lineno) from None


def _parse_weight_line(tokens, weights, var_count, lineno):
    if len(tokens) < 3:
        raise ParseError("malformed weight line", lineno)
    lit = _parse_int(tokens[1], lineno)
    if lit == 0:
        raise ParseError("weight line names literal 0", lineno)
    if abs(lit) > var_count:
        raise ParseError(f"literal {lit} out of range", lineno)
    try:
        value = float(tokens[2])
    except ValueError:
        raise ParseError(f"non-numeric token {tokens[2]!r}", lineno) from None
    if not math.isfinite(value):
        raise ParseError(f"weight must be finite, got {tokens[2]!r}", lineno)
    if value < 0:
        raise ParseError(f"negative weight {tokens[2]}", lineno)
    if tokens[3:] not in ([], ["0"]):
        raise ParseError("malformed weight line", lineno)
    weights.set_literal(lit, value)


def _parse_clause_line(tokens, var_count, lineno) -> Clause:
    if tokens[0] == "x":
        kind = ClauseKind.XOR
        tokens = tokens[1:]
    else:
        kind = ClauseKind.DISJUNCTION
    if not tokens or tokens[-1] != "0":
        raise ParseError("clause not terminated by 0", lineno)
    lits: list[Literal] = []
    seen: set[int] = set()
    for token in tokens[:-1]:
        lit = _parse_int(token, lineno)
        if lit == 0:
            raise ParseError("literal 0 inside clause", lineno)
        if abs(lit) > var_count:
            raise ParseError(f"literal {lit} out of range", lineno)
        if abs(lit) in seen:
            raise ParseError(f"duplicate variable {abs(lit)} in clause", lineno)
        seen.add(abs(lit))
        lits.append(Literal.from_int(lit))
    if not lits:
        raise ParseError("empty clause", lineno)
    return Clause(kind, tuple(lits))


def format_formula(formula: Formula, weights: WeightFunction) -> str:
    """Print an instance; clauses in input order, weights sorted by variable
    then polarity (negative first). Reparsing yields an equal instance."""
    lines = [f"p cnf {formula.var_count} {len(formula.clauses)}"]
    for clause in formula.clauses:
        body = " ".join(str(lit.to_int()) for lit in clause.literals)
        prefix = "x " if clause.kind is ClauseKind.XOR else ""
        lines.append(f"{prefix}{body} 0")
    for var, w_neg, w_pos in weights.listed():
        lines.append(f"w {-var} {w_neg!r}")
        lines.append(f"w {var} {w_pos!r}")
    return "\n".join(lines) + "\n"


def evaluate_clause(clause: Clause, assignment: Assignment) -> bool:
    """Truth value of one clause; raises KeyError on an unbound variable."""
    if clause.kind is ClauseKind.DISJUNCTION:
        return any(assignment[lit.var] == lit.positive for lit in clause.literals)
    satisfied = sum(assignment[lit.var] == lit.positive for lit in clause.literals)
    return satisfied % 2 == 1


def evaluate_formula(formula: Formula, assignment: Assignment) -> bool:
    return all(evaluate_clause(c, assignment) for c in formula.clauses)


def evaluate_weight(weights: WeightFunction, assignment: Assignment) -> float:
    """Product of the chosen-polarity weights over all assigned variables."""
    product = 1.0
    for var in sorted(assignment):
        product *= weights.weight(var, assignment[var])
    return product
