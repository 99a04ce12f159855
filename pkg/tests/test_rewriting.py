import pytest

from tuplecert.parser import parse_term, parse_trs
from tuplecert.rewriting import RewriteEngine, StepKind, derivation_height, irc_oracle, is_normal_form, match, successors
from tuplecert.terms import TermEnumerator


def test_match_binds_variables(toy, term):
    bindings = {}
    assert match(term("add x (s y)"), term("add 0 (s (s 0))"), bindings)
    assert {name: str(t) for name, t in bindings.items()} == {"x": "0", "y": "s 0"}
    assert not match(term("add x 0"), term("add 0 (s 0)"), {})


def test_nonlinear_match():
    trs = parse_trs("SORTS o\nSIG a b : o\nSIG e : o => o => o\nVARS x : o\nRULES\ne x x -> a\n")
    assert match(trs.rules[0].lhs, parse_term(trs, "e a a"), {})
    assert not match(trs.rules[0].lhs, parse_term(trs, "e a b"), {})


def test_innermost_steps_only_at_innermost_redexes(toy, term):
    t = term("add (add 0 0) (s 0)")
    innermost = successors(t, StepKind.INNERMOST, toy)
    assert [(s.position, str(s.term)) for s in innermost] == [((0,), "add 0 (s 0)")]
    full = successors(t, StepKind.FULL, toy)
    assert sorted(str(s.term) for s in full) == ["add 0 (s 0)", "s (add (add 0 0) 0)"]


def test_normal_forms(toy, term):
    assert is_normal_form(term("cons (s 0) nil"), toy)
    assert not is_normal_form(term("s (add 0 0)"), toy)
    engine = RewriteEngine(toy)
    assert str(engine.normal_form(term("add (s 0) (s 0)"))) == "s (s 0)"
    assert str(engine.normal_form(term("rev (cons 0 (cons (s 0) nil))"))) == "cons (s 0) (cons 0 nil)"
    assert str(engine.normal_form(term("quot (s (s (s (s 0)))) (s (s 0))"))) == "s (s 0)"


def test_derivation_height_of_small_terms(toy, term):
    assert derivation_height(term("add (s 0) (s 0)"), StepKind.INNERMOST, toy).height == 2
    assert derivation_height(term("sum nil"), StepKind.INNERMOST, toy).height == 1
    assert derivation_height(term("s 0"), StepKind.INNERMOST, toy).height == 0


def test_sum_of_two_ones_takes_seven_steps(toy, term):
    result = derivation_height(term("sum (cons (s 0) (cons (s 0) nil))"), StepKind.INNERMOST, toy)
    assert result.height == 7
    assert not result.diverged
    # the witness is a longest derivation ending in a normal form
    assert len(result.witness) == 8
    assert str(result.witness[-1]) == "s (s 0)"


def test_toyama_loops_under_full_rewriting(toyama):
    start = parse_term(toyama, "f 0 1 (g 0 1)")
    result = derivation_height(start, StepKind.FULL, toyama, budget=50)
    assert result.diverged
    assert result.height is None
    assert result.witness[-1] in result.witness[:-1]


def test_toyama_terminates_innermost(toyama):
    start = parse_term(toyama, "f 0 1 (g 0 1)")
    result = derivation_height(start, StepKind.INNERMOST, toyama)
    assert result.height == 2


def test_toyama_innermost_terminates_from_every_ground_term(toyama):
    engine = RewriteEngine(toyama, StepKind.INNERMOST, budget=50)
    enumerator = TermEnumerator(toyama)
    for n in range(1, 8):
        for t in enumerator.all_ground_terms(n):
            assert not engine.derivation_height(t).diverged, str(t)


def test_loop_diverges():
    trs = parse_trs("SORTS nat\nSIG 0 : nat\nSIG f : nat => nat\nVARS x : nat\nRULES\nf x -> f x\n")
    assert derivation_height(parse_term(trs, "f 0"), StepKind.INNERMOST, trs).diverged


def test_budget_bounds_path_length(toy, term):
    result = derivation_height(term("sum (cons (s 0) (cons (s 0) nil))"), StepKind.INNERMOST, toy, budget=3)
    assert result.diverged
    assert result.budget == 3


def test_budget_must_be_positive(toy):
    with pytest.raises(ValueError):
        RewriteEngine(toy, budget=0)


def test_irc_oracle_for_addition(add_trs):
    table = irc_oracle(add_trs, 6)
    # add (s^i 0) (s^j 0) needs j + 1 steps and has size i + j + 3
    assert table.rows == [0, 0, 1, 2, 3, 4]
    assert not table.diverged
    assert str(table.witnesses[-1]) == "add 0 (s (s (s 0)))"


def test_irc_oracle_is_monotone(toy):
    table = irc_oracle(toy, 6)
    assert all(a <= b for a, b in zip(table.rows, table.rows[1:]))


def test_oracle_reports_divergence(toyama):
    table = irc_oracle(toyama, 8, budget=50, kind=StepKind.FULL, start="ground")
    assert table.diverged
    assert str(table.diverging_term) == "f 0 1 (g 0 1)"
    assert table.rows[:5] == [0, 0, 1, 1, 2]
    assert table.rows[5:] == [None, None, None]
    tsv = table.to_tsv()
    assert tsv.splitlines()[0] == "n\tirc(n)"
    assert "6\tdiverged" in tsv
    assert tsv.splitlines()[-1] == "# diverged: f 0 1 (g 0 1)"


def test_basic_start_terms_of_toyama_terminate_fully(toyama):
    table = irc_oracle(toyama, 7, budget=50, kind=StepKind.FULL)
    assert not table.diverged
