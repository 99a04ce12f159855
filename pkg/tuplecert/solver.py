"""Parameter constraints: bounded enumeration solver and SMT-LIB2 export."""
import logging
import re
import time
from dataclasses import dataclass, field
from math import lcm
from typing import Mapping, Optional, Union

import sympy
from sympy.logic.boolalg import Boolean, BooleanFalse, BooleanTrue

from tuplecert.errors import SearchTimeout, UninstantiatedParameter
from tuplecert.maxpoly import by_name

logger = logging.getLogger(__name__)

Constraint = Boolean


@dataclass(frozen=True)
class Model:
    values: dict[str, int]


@dataclass(frozen=True)
class Unsat:
    """No model with every parameter in 0..bound; says nothing outside the box."""

    bound: int


@dataclass
class _Atom:
    """`sum(coeff * prod(param ** exp)) >(=) 0` with integer coefficients."""

    terms: list[tuple[int, tuple[tuple[int, int], ...]]]
    strict: bool


@dataclass
class _Node:
    op: str  # "and" | "or"
    children: list = field(default_factory=list)


def _scaled_difference(rel) -> sympy.Expr:
    diff = sympy.expand(rel.lhs - rel.rhs)
    denominators = [term.as_coeff_Mul()[0].q for term in sympy.Add.make_args(diff)]
    return sympy.expand(diff * lcm(*denominators)) if denominators else diff


def atomic(rel) -> tuple[sympy.Expr, bool]:
    """(integer-coefficient difference, strict) for a relational, oriented as `difference >(=) 0`."""
    if isinstance(rel, (sympy.StrictLessThan, sympy.LessThan)):
        rel = (sympy.Gt if isinstance(rel, sympy.StrictLessThan) else sympy.Ge)(rel.rhs, rel.lhs, evaluate=False)
    if not isinstance(rel, (sympy.StrictGreaterThan, sympy.GreaterThan)):
        raise ValueError(f"unsupported constraint {rel}")
    return _scaled_difference(rel), isinstance(rel, sympy.StrictGreaterThan)


def _compile(formula, index: dict):
    if isinstance(formula, BooleanTrue):
        return True
    if isinstance(formula, BooleanFalse):
        return False
    if isinstance(formula, (sympy.And, sympy.Or)):
        return _Node("and" if isinstance(formula, sympy.And) else "or", [_compile(a, index) for a in formula.args])
    diff, strict = atomic(formula)
    symbols = sorted(diff.free_symbols, key=index.__getitem__)
    if not symbols:
        return bool(diff > 0) if strict else bool(diff >= 0)
    terms = [
        (int(coeff), tuple((index[s], e) for s, e in zip(symbols, monom) if e))
        for monom, coeff in sympy.Poly(diff, *symbols).terms()
    ]
    return _Atom(terms, strict)


def _interval(atom: _Atom, values: list[int], fixed: int, bound: int) -> tuple[int, int]:
    """Range of the atom's polynomial with parameters fixed..end free in 0..bound."""
    lo = hi = 0
    for coeff, factors in atom.terms:
        low = high = 1
        for i, e in factors:
            if i < fixed:
                v = values[i] ** e
                low *= v
                high *= v
            else:
                low = 0
                high *= bound**e
        if coeff >= 0:
            lo += coeff * low
            hi += coeff * high
        else:
            lo += coeff * high
            hi += coeff * low
    return lo, hi


def _evaluate(node, values: list[int], fixed: int, bound: int) -> Optional[bool]:
    """Three-valued: None while the free parameters can still go either way."""
    if isinstance(node, bool):
        return node
    if isinstance(node, _Atom):
        lo, hi = _interval(node, values, fixed, bound)
        if node.strict:
            return True if lo > 0 else False if hi <= 0 else None
        return True if lo >= 0 else False if hi < 0 else None
    unknown = False
    for child in node.children:
        result = _evaluate(child, values, fixed, bound)
        if result is None:
            unknown = True
        elif result == (node.op == "or"):
            return result
    return None if unknown else node.op == "and"


def parameters_of(formula: Constraint) -> list:
    return by_name(formula.free_symbols)


def solve(
    formula: Constraint,
    bound: int,
    extra: tuple = (),
    deadline: Optional[float] = None,
) -> Union[Model, Unsat]:
    """Lexicographically smallest model in [0, bound]^params, parameters ordered by name.

    `extra` lists parameters that must appear in the model even when the formula
    does not mention them (they get 0).
    """
    params = by_name(set(formula.free_symbols) | set(extra))
    index = {p: i for i, p in enumerate(params)}
    root = _compile(formula, index)
    values = [0] * len(params)
    nodes = 0

    def descend(fixed: int) -> bool:
        nonlocal nodes
        nodes += 1
        if deadline is not None and nodes % 64 == 0 and time.monotonic() > deadline:
            raise SearchTimeout("solver ran out of time")
        state = _evaluate(root, values, fixed, bound)
        if state is False:
            return False
        if fixed == len(params):
            return True
        free = params[fixed]
        # parameters the formula never mentions stay 0
        candidates = range(bound + 1) if free in formula.free_symbols else (0,)
        for value in candidates:
            values[fixed] = value
            if descend(fixed + 1):
                return True
        values[fixed] = 0
        return False

    found = descend(0)
    logger.debug("solver visited %d nodes over %d parameters (bound %d)", nodes, len(params), bound)
    if found:
        return Model({p.name: v for p, v in zip(params, values)})
    return Unsat(bound)


def check_model(formula: Constraint, model: Mapping[str, int]) -> bool:
    """Substitute the model and evaluate exactly."""
    missing = [p.name for p in parameters_of(formula) if p.name not in model]
    if missing:
        raise UninstantiatedParameter(f"model has no value for {', '.join(missing)}")
    result = formula.xreplace({p: sympy.Integer(model[p.name]) for p in parameters_of(formula)})
    return bool(result == sympy.true)


# SMT-LIB2
SIMPLE_SYMBOL = re.compile(r"[A-Za-z~!@$%^&*_+=<>.?/-][A-Za-z0-9~!@$%^&*_+=<>.?/-]*")


def smt_symbol(name: str) -> str:
    return name if SIMPLE_SYMBOL.fullmatch(name) else f"|{name}|"


def smt_term(expr: sympy.Expr) -> str:
    if expr.is_Integer:
        value = int(expr)
        return str(value) if value >= 0 else f"(- {-value})"
    if expr.is_Symbol:
        return smt_symbol(expr.name)
    if expr.is_Add:
        return "(+ " + " ".join(smt_term(a) for a in sympy.Add.make_args(expr)) + ")"
    if expr.is_Mul:
        return "(* " + " ".join(smt_term(a) for a in expr.args) + ")"
    if expr.is_Pow and expr.exp.is_Integer and expr.exp > 0:
        return "(* " + " ".join([smt_term(expr.base)] * int(expr.exp)) + ")"
    raise ValueError(f"cannot export {expr}")


def smt_formula(formula: Constraint) -> str:
    if isinstance(formula, BooleanTrue):
        return "true"
    if isinstance(formula, BooleanFalse):
        return "false"
    if isinstance(formula, (sympy.And, sympy.Or)):
        op = "and" if isinstance(formula, sympy.And) else "or"
        return f"({op} " + " ".join(smt_formula(a) for a in formula.args) + ")"
    diff, strict = atomic(formula)
    lhs, rhs = formula.lhs, formula.rhs
    if isinstance(formula, (sympy.StrictLessThan, sympy.LessThan)):
        lhs, rhs = rhs, lhs
    if not (_integral(lhs) and _integral(rhs)):
        lhs, rhs = diff, sympy.Integer(0)
    return f"({'>' if strict else '>='} {smt_term(lhs)} {smt_term(rhs)})"


def _integral(expr: sympy.Expr) -> bool:
    return all(term.as_coeff_Mul()[0].is_Integer for term in sympy.Add.make_args(sympy.expand(expr)))


def export_smtlib(formula: Constraint, comment: Optional[str] = None) -> str:
    lines = []
    if comment:
        lines.extend(f"; {line}" for line in comment.splitlines())
    lines.append("(set-logic QF_NIA)")
    params = parameters_of(formula)
    for p in params:
        lines.append(f"(declare-const {smt_symbol(p.name)} Int)")
    for p in params:
        lines.append(f"(assert (>= {smt_symbol(p.name)} 0))")
    conjuncts = formula.args if isinstance(formula, sympy.And) else (formula,)
    for conjunct in conjuncts:
        lines.append(f"(assert {smt_formula(conjunct)})")
    lines.append("(check-sat)")
    lines.append("(get-model)")
    return "\n".join(lines) + "\n"


DEFINE_FUN = re.compile(r"\(define-fun\s+(\|[^|]*\||\S+)\s+\(\)\s+Int\s+(\(\s*-\s*\d+\s*\)|-?\d+)\s*\)")
ASSIGNMENT = re.compile(r"^\s*([^\s=]+)\s*=\s*(-?\d+)\s*$", re.MULTILINE)


def parse_model(text: str) -> dict[str, int]:
    """Read `(define-fun p () Int v)` entries of an SMT model, or `p = v` lines."""
    model = {}
    for name, value in DEFINE_FUN.findall(text):
        digits = re.sub(r"[()\s]", "", value).replace("-", "")
        model[name.strip("|")] = -int(digits) if "-" in value else int(digits)
    if not model:
        for name, value in ASSIGNMENT.findall(text):
            model[name] = int(value)
    return model
