import pytest

from xormpe.benchgen import gen_random
from xormpe.formula import (
    Clause,
    ClauseKind,
    Formula,
    Literal,
    ParseError,
    WeightFunction,
    evaluate_clause,
    evaluate_weight,
    format_formula,
    parse_formula,
)

from conftest import MIXED6_TEXT, disj, xor


def test_parse_minimal():
    formula, weights = parse_formula("p cnf 2 1\n1 -2 0\n")
    assert formula.var_count == 2
    assert len(formula.clauses) == 1
    clause = formula.clauses[0]
    assert clause.kind is ClauseKind.DISJUNCTION
    assert [l.to_int() for l in clause.literals] == [1, -2]
    assert weights == WeightFunction()
    assert weights.pair(1) == (1.0, 1.0)


def test_parse_mixed6():
    formula, weights = parse_formula(MIXED6_TEXT)
    assert formula.var_count == 6
    assert len(formula.clauses) == 5
    assert sum(c.kind is ClauseKind.XOR for c in formula.clauses) == 2
    assert formula.clauses[0].variables == {2, 4}


def test_parse_negative_weight_reports_line():
    with pytest.raises(ParseError) as err:
        parse_formula("p cnf 1 1\n1 0\nw 1 -0.5 1\n")
    assert "negative weight" in str(err.value)
    assert err.value.line == 3


@pytest.mark.parametrize("text, fragment", [
    ("p cnf x 1\n1 0\n", "non-numeric"),
    ("p wcnf 1 1\n1 0\n", "malformed header"),
    ("p cnf 1 1 1\n1 0\n", "malformed header"),
    ("1 0\np cnf 1 1\n", "before 'p cnf' header"),
    ("p cnf 1 1\np cnf 1 1\n1 0\n", "duplicate"),
    ("p cnf 1 1\n2 0\n", "out of range"),
    ("p cnf 2 1\n1 1 0\n", "duplicate variable"),
    ("p cnf 2 1\n1 -1 0\n", "duplicate variable"),
    ("p cnf 2 1\n1 two 0\n", "non-numeric"),
    ("p cnf 1 1\n1\n", "not terminated"),
    ("p cnf 1 1\n0\n", "empty clause"),
    ("p cnf 1 1\n1 0\nw 1 abc\n", "non-numeric"),
    ("p cnf 1 1\n1 0\nw 0 1.0\n", "literal 0"),
    ("p cnf 1 1\n1 0\nw 2 1.0\n", "out of range"),
    ("p cnf 1 1\n1 0\nw 1 0.5 7\n", "malformed weight"),
    ("p cnf 1 2\n1 0\n", "declares 2 clauses"),
    ("", "missing 'p cnf' header"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(ParseError) as err:
        parse_formula(text)
    assert fragment in str(err.value)


def test_parse_comments_and_blank_lines():
    text = "c a comment\n\np cnf 1 1\nc another\n1 0\nc\n"
    formula, _ = parse_formula(text)
    assert len(formula.clauses) == 1


def test_weight_last_occurrence_wins():
    _, weights = parse_formula("p cnf 1 1\n1 0\nw 1 2.0\nw 1 3.5\nw -1 0.25\n")
    assert weights.pair(1) == (0.25, 3.5)


def test_weight_line_with_trailing_zero_terminator():
    _, weights = parse_formula("p cnf 1 1\n1 0\nw 1 2.0 0\n")
    assert weights.pair(1) == (1.0, 2.0)


def test_parse_accepts_bytes_and_streams(tmp_path):
    formula, _ = parse_formula(MIXED6_TEXT.encode("utf-8"))
    assert formula.var_count == 6
    path = tmp_path / "inst.xcnf"
    path.write_text(MIXED6_TEXT)
    with open(path) as handle:
        formula, _ = parse_formula(handle)
    assert len(formula.clauses) == 5


def test_round_trip_random_instances():
    for seed in range(25):
        n = 1 + seed % 9
        formula, weights = gen_random(n, (seed * 3) % 12, max(1, min(n, 3)), 0.5, seed)
        text = format_formula(formula, weights)
        formula2, weights2 = parse_formula(text)
        assert formula2 == formula
        assert weights2 == weights
        assert format_formula(formula2, weights2) == text


def test_clause_rejects_duplicates_and_empty():
    with pytest.raises(ValueError):
        Clause(ClauseKind.DISJUNCTION, ())
    with pytest.raises(ValueError):
        disj(1, -1)


def test_formula_rejects_out_of_range_literal():
    with pytest.raises(ValueError):
        Formula(1, [disj(2)])


def test_empty_formula_is_legal():
    formula = Formula(3, [])
    assert list(formula.variables) == [1, 2, 3]


def test_evaluate_clause():
    assert evaluate_clause(xor(2, -4), {2: True, 4: True}) is True
    assert evaluate_clause(disj(1, 6), {1: False, 6: False}) is False
    assert evaluate_clause(xor(3, 5), {3: True, 5: True}) is False


def test_evaluate_clause_unbound():
    with pytest.raises(KeyError):
        evaluate_clause(disj(1, 2), {1: False})


def test_evaluate_weight():
    assert evaluate_weight(WeightFunction(), {1: True, 2: False}) == 1.0
    weights = WeightFunction({1: (10, 100), 2: (100, 10)})
    assert evaluate_weight(weights, {1: True, 2: True}) == 1000.0
    assert evaluate_weight(WeightFunction({1: (0, 5)}), {1: False}) == 0.0


def test_evaluate_weight_multiplicative_over_disjoint_sets():
    weights = WeightFunction({1: (2, 3), 2: (5, 7), 3: (0.5, 4)})
    left = {1: True}
    right = {2: False, 3: True}
    combined = dict(left) | dict(right)
    assert evaluate_weight(weights, combined) == pytest.approx(
        evaluate_weight(weights, left) * evaluate_weight(weights, right))


def test_weight_function_rejects_bad_values():
    with pytest.raises(ValueError):
        WeightFunction({1: (-1.0, 2.0)})
    weights = WeightFunction()
    with pytest.raises(ValueError):
        weights.set_literal(1, float("nan"))
    with pytest.raises(ValueError):
        weights.set_literal(0, 1.0)


def test_literal_from_int():
    assert Literal.from_int(-3) == Literal(3, False)
    with pytest.raises(ValueError):
        Literal.from_int(0)
