import pytest

from tuplecert.errors import TermTypeError
from tuplecert.terms import (
    App,
    TermEnumerator,
    Var,
    apply,
    apply_subst,
    compose_subst,
    compositions,
    is_basic,
    is_data,
    positions,
    replace_at,
    size,
    subterm_at,
    variables,
)


def test_size_counts_symbols_and_variables(term):
    assert size(term("0")) == 1
    assert size(term("s (s 0)")) == 3
    assert size(term("add x (s y)")) == 4
    assert size(term("sum (cons (s 0) (cons (s 0) nil))")) == 8


def test_variables_in_order_of_first_occurrence(term):
    assert [v.name for v in variables(term("add (add y x) y"))] == ["y", "x"]


def test_apply_checks_argument_sorts(toy):
    cons = App(toy.symbol("cons"))
    zero = App(toy.symbol("0"))
    nil = App(toy.symbol("nil"))
    assert str(apply(cons, zero, nil)) == "cons 0 nil"
    with pytest.raises(TermTypeError):
        apply(cons, nil, zero)
    with pytest.raises(TermTypeError):
        apply(App(toy.symbol("s")), zero, zero)


def test_partial_application_has_function_type(toy):
    partial = apply(App(toy.symbol("add")), App(toy.symbol("0")))
    assert str(partial.ty) == "nat => nat"


def test_positions_subterms_and_replacement(term):
    t = term("add (s x) y")
    assert [p for p, _ in positions(t)] == [(), (0,), (0, 0), (1,)]
    assert str(subterm_at(t, (0, 0))) == "x"
    assert str(replace_at(t, (0,), term("0"))) == "add 0 y"


def test_substitution_and_composition(term):
    t = term("add x y")
    first = {"x": term("s y")}
    second = {"y": term("0")}
    assert str(apply_subst(apply_subst(t, first), second)) == str(apply_subst(t, compose_subst(first, second)))
    assert str(apply_subst(t, compose_subst(first, second))) == "add (s 0) 0"


def test_substitution_rejects_wrong_sort(term):
    with pytest.raises(TermTypeError):
        apply_subst(term("add x y"), {"x": term("nil")})


def test_data_and_basic_terms(toy, term):
    assert is_data(term("cons (s 0) nil"), toy)
    assert not is_data(term("cons (add 0 0) nil"), toy)
    assert is_basic(term("add (s 0) 0"), toy)
    assert not is_basic(term("add (add 0 0) 0"), toy)
    assert not is_basic(term("add x 0"), toy)


def test_compositions():
    assert list(compositions(3, 2)) == [(1, 2), (2, 1)]
    assert list(compositions(0, 0)) == [()]
    assert list(compositions(2, 3)) == []


def test_enumerator_sizes_are_exact(toy):
    enumerator = TermEnumerator(toy)
    assert [str(t) for t in enumerator.data_terms("nat", 3)] == ["s (s 0)"]
    lists = enumerator.data_terms("list", 4)
    assert {str(t) for t in lists} == {"cons (s 0) nil"}
    for n in range(1, 7):
        for t in enumerator.basic_terms(n):
            assert size(t) == n
            assert is_basic(t, toy)


def test_basic_terms_of_size_three(toy):
    names = [str(t) for t in TermEnumerator(toy).basic_terms(3)]
    assert names == ["add 0 0", "append nil nil", "minus 0 0", "quot 0 0"]


def test_var_equality_uses_name_and_sort():
    assert Var("x", "nat") == Var("x", "nat")
    assert Var("x", "nat") != Var("x", "list")
