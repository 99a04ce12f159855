import pytest

from tuplecert.algebra import NumericInterpretation, Valuation, interpret_term
from tuplecert.compat import RuleStatus, Verdict, check, check_rule, explain, format_env, rule_parts
from tuplecert.errors import MissingSymbol, ShapeMismatch
from tuplecert.expressions import parse_expression
from tuplecert.interpretation import SymbolicInterpretation, parse_interpretation
from tuplecert.maxpoly import Outcome
from tuplecert.parser import parse_term
from tuplecert.rewriting import StepKind, derivation_height
from tuplecert.terms import TermEnumerator


def test_toy_is_compatible(toy, toy_interp):
    result = check(toy, toy_interp)
    assert result.verdict is Verdict.COMPATIBLE
    assert result.summary == "Compatible (13/13 rules)"
    assert result.warnings == []


def test_uncorrected_sum_fails_on_empty_list(toy, toy_uncorrected):
    result = check(toy, toy_uncorrected)
    assert result.verdict is Verdict.INCOMPATIBLE
    failing = [r for r in result.rules if r.status is RuleStatus.COUNTER_EXAMPLE]
    assert [r.index for r in failing] == [3]
    assert str(failing[0].rule) == "sum nil -> 0"
    assert failing[0].witness == {}
    assert result.summary == "Incompatible (12/13 rules)"


def test_rule_parts_of_append(toy, toy_interp):
    parts = rule_parts(toy.rules[5], toy_interp)
    assert [label for label, *_ in parts] == ["cost", "size.1", "size.2"]
    label, lhs, rhs, strict = parts[0]
    assert strict
    assert lhs == parse_expression("q.1 + 2")
    assert rhs == parse_expression("q.1 + 1")


def test_counterexample_fills_unused_atoms(add_trs):
    text = "J 0 : cost = 0 ; size = 0\nJ s : cost = 0 ; size = x + 1\nJ add : cost = y + 1 ; size = y\n"
    interp = parse_interpretation(text, add_trs)
    result = check_rule(1, add_trs.rules[0], interp)
    assert result.status is RuleStatus.COUNTER_EXAMPLE
    # add x 0 -> x: size 0 against x
    assert result.witness == {"x": 1}
    size = [p for p in result.parts if p.label == "size"][0]
    assert size.comparison.outcome is Outcome.DISPROVED


def test_unknown_when_split_is_capped(toy, toy_interp):
    result = check(toy, toy_interp, split_cap=0)
    # sum (cons x q) needs a case split on x and q.2
    assert result.verdict is Verdict.UNKNOWN
    assert result.rules[3].status is RuleStatus.UNKNOWN
    assert all(r.status is not RuleStatus.COUNTER_EXAMPLE for r in result.rules)


def test_missing_interpretation(add_trs):
    interp = parse_interpretation("J 0 : cost = 0 ; size = 0\n", add_trs)
    with pytest.raises(MissingSymbol):
        check(add_trs, interp)


def test_shape_mismatch(toy, toy_interp):
    interp = SymbolicInterpretation({"nat": 1, "list": 1}, dict(toy_interp.symbols))
    with pytest.raises(ShapeMismatch):
        check(toy, interp)


def test_constructor_cost_warning(add_trs):
    text = "J 0 : cost = 0 ; size = 0\nJ s : cost = 1 ; size = x + 1\nJ add : cost = y + 1 ; size = x + y\n"
    result = check(add_trs, parse_interpretation(text, add_trs))
    assert result.warnings == ["constructor s has non-zero cost"]


def test_explain(toy, toy_uncorrected):
    result = check(toy, toy_uncorrected)
    text = explain(result)
    assert "[3] sum nil -> 0: counterexample" in text
    assert "    witness: {}" in text
    assert text.endswith("Incompatible (12/13 rules)\n")
    assert format_env({"x": 0, "q.1": 2}) == "{x = 0, q.1 = 2}"


def test_cost_bounds_derivation_height(toy, toy_interp):
    numeric = NumericInterpretation.from_symbolic(toy_interp)
    enumerator = TermEnumerator(toy)
    checked = 0
    for n in range(1, 8):
        for t in enumerator.basic_terms(n):
            dh = derivation_height(t, StepKind.INNERMOST, toy)
            assert dh.height <= interpret_term(t, numeric, Valuation()).cost, str(t)
            checked += 1
    assert checked > 0


def test_sum_bound_is_tight(toy, toy_interp):
    numeric = NumericInterpretation.from_symbolic(toy_interp)
    t = parse_term(toy, "sum (cons (s 0) (cons (s 0) nil))")
    assert interpret_term(t, numeric, Valuation()).cost == 7
    assert derivation_height(t, StepKind.INNERMOST, toy).height == 7
