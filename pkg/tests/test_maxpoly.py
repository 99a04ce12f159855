import random
import time
from fractions import Fraction
from itertools import product

import pytest
import sympy

from tuplecert.errors import NegativeCoefficient, SearchTimeout, UnboundAtom, UninstantiatedParameter
from tuplecert.expressions import parse_expression
from tuplecert.maxpoly import (
    ONE,
    ZERO,
    MaxPoly,
    Mode,
    Outcome,
    atom,
    atom_name,
    compare,
    normalize,
    orient,
    parameter,
    time_limit,
)


def p(text: str) -> MaxPoly:
    return parse_expression(text)


def test_atom_names():
    assert atom_name("x", 1, 1) == "x"
    assert atom_name("q", 2, 2) == "q.2"


def test_max_is_outermost_and_dominated_branches_drop():
    value = p("max(x, y) + 1")
    assert len(value.branches) == 2
    assert str(value) == "max(x + 1, y + 1)"
    assert str(p("max(x, x + y, 2)")) == "max(2, x + y)"
    assert str(p("max(x, x)")) == "x"


def test_products_distribute_over_max():
    assert str(p("x * max(y, z)")) == "max(x * y, x * z)"


def test_formatting_reparses():
    texts = ["2 * q.1 + q.1 * q.2 + 1", "1/2 * q.1 * q.1 + 1/2 * q.1", "max(x, q.2)", "0", "x * x * y + 3"]
    for text in texts:
        value = p(text)
        assert p(str(value)) == value


def test_degree():
    assert p("3").degree() == 0
    assert p("x + y + 1").degree() == 1
    assert p("max(x, y * y * z)").degree() == 3


def test_evaluate():
    assert p("1/2 * x * x + 1/2 * x").evaluate({"x": 3}) == 6
    assert p("max(x, y) + 1").evaluate({"x": 2, "y": 5}) == 6
    with pytest.raises(UnboundAtom):
        p("x + y").evaluate({"x": 1})


def test_evaluate_refuses_parameters():
    with pytest.raises(UninstantiatedParameter):
        MaxPoly.of(parameter("a") * atom("x")).evaluate({"x": 1})


def test_instantiate_and_subs():
    template = MaxPoly.of(parameter("a") + parameter("b") * atom("x"))
    assert str(template.instantiate({"a": 1, "b": 2})) == "2 * x + 1"
    composed = p("x * y").subs({atom("x"): p("max(z, 1)"), atom("y"): p("z + 1")})
    assert composed == p("max(z * z + z, z + 1)")


def test_normalize_rejects_negatives():
    with pytest.raises(NegativeCoefficient):
        normalize(sympy.Integer(-1))
    assert normalize(sympy.Max(atom("x"), 2) * 2) == p("max(2 * x, 4)")


def test_arithmetic_constants():
    assert ZERO.is_zero
    assert (ONE + ONE) == MaxPoly.constant(2)
    assert (ZERO * p("x + 1")).is_zero


def test_compare_linear():
    assert compare(p("y + 1"), p("y"), Mode.STRICT_COST).proved
    assert compare(p("x + y"), p("x + y"), Mode.WEAK_SIZE).proved
    assert not compare(p("x + y"), p("x + y"), Mode.STRICT_COST).proved


def test_compare_with_max_needs_case_split():
    branchwise = compare(p("q.1 + 1 + max(x, q.2)"), p("x + 1"), Mode.WEAK_SIZE)
    assert branchwise.proved
    assert branchwise.trace == ()
    # neither 2x nor 2y alone dominates x + y
    result = compare(p("2 * max(x, y)"), p("x + y"), Mode.WEAK_SIZE)
    assert result.proved
    assert result.trace == ("split on x, y: 2 cases",)


def test_compare_rational_constant_is_strict():
    assert compare(p("1/2 * x * x + 1/2 * x + 1"), p("1/2 * x * x + 1/2 * x"), Mode.STRICT_COST).proved


def test_disproof_carries_witness():
    result = compare(p("x"), p("y"), Mode.WEAK_SIZE)
    assert result.outcome is Outcome.DISPROVED
    assert result.witness == {"x": 0, "y": 1}
    result = compare(p("0"), p("0"), Mode.STRICT_COST)
    assert result.outcome is Outcome.DISPROVED
    assert result.witness == {}


def test_compare_requires_parameter_free_operands():
    with pytest.raises(UninstantiatedParameter):
        compare(MaxPoly.of(parameter("a")), ZERO, Mode.WEAK_SIZE)


def test_orient_produces_parameter_constraints():
    a, b = parameter("a"), parameter("b")
    x = atom("x")
    orientation = orient(MaxPoly.of(a * x + b), MaxPoly.of(x), strict=True)
    formula = orientation.formula
    assert formula.subs({a: 1, b: 1}) == sympy.true
    assert formula.subs({a: 0, b: 1}) == sympy.false
    assert formula.subs({a: 1, b: 0}) == sympy.false


def _random_maxpoly(rng: random.Random, names) -> MaxPoly:
    branches = []
    for _ in range(rng.randint(1, 2)):
        expr = sympy.Integer(rng.randint(0, 2))
        for name in names:
            if rng.random() < 0.6:
                expr += rng.randint(1, 2) * atom(name) ** rng.randint(1, 2)
        branches.append(expr)
    return MaxPoly.of(*branches)


def test_normal_form_agrees_with_evaluation():
    rng = random.Random(7)
    names = ["x", "y"]
    for _ in range(1000):
        a, b = _random_maxpoly(rng, names), _random_maxpoly(rng, names)
        total, prod = a + b, a * b
        env = {"x": rng.randint(0, 5), "y": rng.randint(0, 5)}
        ea, eb = a.evaluate(env), b.evaluate(env)
        assert total.evaluate(env) == ea + eb
        assert prod.evaluate(env) == ea * eb
        assert a.max(b).evaluate(env) == max(ea, eb)


def test_proved_comparisons_hold_on_random_points():
    rng = random.Random(11)
    names = ["x", "y"]
    proved = 0
    for _ in range(1000):
        a, b = _random_maxpoly(rng, names), _random_maxpoly(rng, names)
        for mode in (Mode.WEAK_SIZE, Mode.STRICT_COST):
            result = compare(a, b, mode)
            delta = 1 if mode is Mode.STRICT_COST else 0
            if result.proved:
                proved += 1
                for _ in range(1000):
                    env = {"x": rng.randint(0, 50), "y": rng.randint(0, 50)}
                    assert a.evaluate(env) >= b.evaluate(env) + delta
            elif result.outcome is Outcome.DISPROVED:
                assert a.evaluate(result.witness) < b.evaluate(result.witness) + delta
    assert proved > 0


def test_grid_evaluation_of_fractions():
    value = p("1/2 * x")
    assert [value.evaluate({"x": n}) for n in range(3)] == [Fraction(0), Fraction(1, 2), Fraction(1)]
    assert all(p("x * y").evaluate({"x": i, "y": j}) == i * j for i, j in product(range(4), repeat=2))


def test_arithmetic_stops_past_the_deadline():
    left, right = p("max(x, y)"), p("max(x, 2 * y)")
    with time_limit(time.monotonic() - 1):
        with pytest.raises(SearchTimeout):
            left * right
    with time_limit(None):
        assert (left * right).degree() == 2
