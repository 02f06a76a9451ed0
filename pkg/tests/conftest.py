import pytest

from xormpe.formula import Clause, ClauseKind, Formula, Literal, WeightFunction
from xormpe.planner import ProjectJoinTree

MIXED6_TEXT = """p cnf 6 5
x 2 -4 0
1 6 0
1 0
x 3 5 0
-3 -5 0
"""


def lit(value: int) -> Literal:
    return Literal.from_int(value)


def disj(*lits: int) -> Clause:
    return Clause(ClauseKind.DISJUNCTION, tuple(lit(v) for v in lits))


def xor(*lits: int) -> Clause:
    return Clause(ClauseKind.XOR, tuple(lit(v) for v in lits))


@pytest.fixture
def mixed6() -> Formula:
    """Six variables, five clauses (two of them xor); satisfiable with eight
    models under unit weights."""
    return Formula(6, [xor(2, -4), disj(1, 6), disj(1), xor(3, 5), disj(-3, -5)])


@pytest.fixture
def mixed6_tree(mixed6) -> ProjectJoinTree:
    """Hand-built tree for the mixed6 instance, width 2.

    Leaves 0..4 map to the clauses in order; the first xor is handled alone,
    the two clauses over x3/x5 share a node, and x1 is projected above the
    three clauses that mention it.
    """
    tree = ProjectJoinTree(mixed6)
    n6 = tree.add_internal([0], {2, 4})
    n7 = tree.add_internal([1], {6})
    n8 = tree.add_internal([n6, n7, 2], {1})
    n9 = tree.add_internal([3, 4], {3, 5})
    tree.root = tree.add_internal([n8, n9], set())
    return tree


@pytest.fixture
def unit_weights() -> WeightFunction:
    return WeightFunction()
