import pytest

from tuplecert.errors import ExpressionError, InputError, NegativeCoefficient
from tuplecert.expressions import parse_expression, parse_size, tokenize


def test_tokenize():
    assert tokenize("max(x, q.2) + 1/2") == [
        ("name", "max"), ("op", "("), ("name", "x"), ("op", ","), ("name", "q.2"), ("op", ")"),
        ("op", "+"), ("num", "1"), ("op", "/"), ("num", "2"),
    ]
    with pytest.raises(ExpressionError):
        tokenize("x ^ 2")


def test_precedence_and_parentheses():
    assert parse_expression("1 + 2 * x") == parse_expression("2 * x + 1")
    assert parse_expression("(1 + x) * 2") == parse_expression("2 * x + 2")
    assert parse_expression("x * (y + z)") == parse_expression("x * y + x * z")


def test_nested_max():
    value = parse_expression("max(x, max(y, 1)) + 1")
    assert value == parse_expression("max(x + 1, y + 1, 2)")


def test_negative_values_are_rejected():
    with pytest.raises(NegativeCoefficient):
        parse_expression("-1")
    with pytest.raises(NegativeCoefficient):
        parse_expression("x - y")
    # still an input error for the command line
    with pytest.raises(InputError):
        parse_expression("x + 2 * -y")


def test_denominators():
    assert parse_expression("1/2 * x").evaluate({"x": 4}) == 2
    assert parse_expression("4/2").evaluate({}) == 2
    with pytest.raises(ExpressionError):
        parse_expression("1/3 * x")
    with pytest.raises(ExpressionError):
        parse_expression("1/x")


def test_malformed_expressions():
    for text in ["", "x +", "max(x", "(x", "x y", "max()"]:
        with pytest.raises(ExpressionError):
            parse_expression(text)


@pytest.mark.parametrize("text", ["max", "max + 1", "2 * max", "max.1", "max x"])
def test_max_is_reserved(text):
    with pytest.raises(ExpressionError, match="max needs"):
        parse_expression(text)


def test_atoms_are_checked_against_argument_sorts():
    atoms = {"x": 1, "q": 2}
    assert parse_expression("x + q.1 * q.2", atoms).degree() == 2
    assert parse_expression("x.1", atoms) == parse_expression("x", atoms)
    with pytest.raises(ExpressionError):
        parse_expression("y", atoms)
    with pytest.raises(ExpressionError):
        parse_expression("q", atoms)
    with pytest.raises(ExpressionError):
        parse_expression("q.3", atoms)
    with pytest.raises(ExpressionError):
        parse_expression("x.2", atoms)


def test_parse_size():
    first, second = parse_size("(q.1 + 1, max(x, q.2))", 2, {"x": 1, "q": 2})
    assert str(first) == "q.1 + 1"
    assert second == parse_expression("max(q.2, x)")
    assert str(second) == "max(q.2, x)"
    assert parse_size("x + 1", 1) == (parse_expression("x + 1"),)
    assert parse_size("(x + 1)", 1) == (parse_expression("x + 1"),)


def test_parse_size_checks_component_count():
    with pytest.raises(ExpressionError):
        parse_size("(0, 0)", 1)
    with pytest.raises(ExpressionError):
        parse_size("0", 2)
