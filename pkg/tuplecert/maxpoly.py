"""Max-polynomials over size atoms.

A `MaxPoly` is a maximum over expanded sympy polynomials whose free symbols are size
atoms (`x`, `q.1`) and, inside templates, `Parameter` coefficients. Every value is
kept in normal form: the max is outermost, branches are expanded, duplicates and
dominated branches are removed.
"""
import logging
import time
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property, reduce
from itertools import permutations, product
from math import factorial
from typing import Iterable, Mapping, Optional, Union

import sympy

from tuplecert.config import GRID_MAX, SPLIT_CAP
from tuplecert.errors import (
    ExpressionError,
    NegativeCoefficient,
    SearchTimeout,
    UnboundAtom,
    UninstantiatedParameter,
)

logger = logging.getLogger(__name__)


class Parameter(sympy.Symbol):
    """An unknown natural coefficient of an interpretation template."""


def atom(name: str) -> sympy.Symbol:
    return sympy.Symbol(name, integer=True, nonnegative=True)


def parameter(name: str) -> Parameter:
    return Parameter(name, integer=True, nonnegative=True)


def atom_name(var: str, component: int, k: int) -> str:
    """`x` for single-component sorts, `q.2` otherwise."""
    return var if k == 1 else f"{var}.{component}"


def by_name(symbols: Iterable[sympy.Symbol]) -> list[sympy.Symbol]:
    return sorted(symbols, key=lambda s: s.name)


def free_atoms(expr: sympy.Expr) -> set[sympy.Symbol]:
    return {s for s in expr.free_symbols if not isinstance(s, Parameter)}


def free_parameters(expr: sympy.Expr) -> set[sympy.Symbol]:
    return {s for s in expr.free_symbols if isinstance(s, Parameter)}


def monomials(expr: sympy.Expr, atoms: list[sympy.Symbol]) -> list[tuple[tuple[int, ...], sympy.Expr]]:
    """(exponent vector, coefficient) pairs of `expr` seen as a polynomial in `atoms`."""
    if not atoms:
        return [((), expr)]
    return sympy.Poly(expr, *atoms).terms()


def nonnegative_coefficients(expr: sympy.Expr) -> bool:
    """All coefficients numeric and >= 0, over atoms and parameters alike."""
    check_deadline()
    expr = sympy.expand(expr)
    if expr.is_Number:
        return expr >= 0
    gens = by_name(expr.free_symbols)
    return all(coeff >= 0 for coeff in sympy.Poly(expr, *gens).coeffs())


# time.monotonic() past which arithmetic raises SearchTimeout
_deadline: ContextVar[Optional[float]] = ContextVar("maxpoly_deadline", default=None)


@contextmanager
def time_limit(deadline: Optional[float]):
    token = _deadline.set(deadline)
    try:
        yield
    finally:
        _deadline.reset(token)


def check_deadline() -> None:
    deadline = _deadline.get()
    if deadline is not None and time.monotonic() > deadline:
        raise SearchTimeout("time budget exhausted")


def _prune(exprs: list[sympy.Expr]) -> list[sympy.Expr]:
    unique = list(dict.fromkeys(exprs))
    if len(unique) > 1:
        kept = []
        for i, expr in enumerate(unique):
            check_deadline()
            if not any(j != i and nonnegative_coefficients(other - expr) for j, other in enumerate(unique)):
                kept.append(expr)
        unique = kept
    return sorted(unique, key=sympy.default_sort_key)


Number = Union[int, Fraction]


@dataclass(frozen=True)
class MaxPoly:
    branches: tuple[sympy.Expr, ...]

    @classmethod
    def of(cls, *branches) -> "MaxPoly":
        exprs = [sympy.expand(sympy.sympify(branch)) for branch in branches] or [sympy.Integer(0)]
        return cls(tuple(_prune(exprs)))

    @classmethod
    def constant(cls, value: Number) -> "MaxPoly":
        return cls.of(sympy.Rational(value))

    @classmethod
    def variable(cls, name: str) -> "MaxPoly":
        return cls.of(atom(name))

    @classmethod
    def maximum(cls, first: "MaxPoly", *rest: "MaxPoly") -> "MaxPoly":
        return cls.of(*first.branches, *(b for other in rest for b in other.branches))

    # Arithmetic
    def __add__(self, other) -> "MaxPoly":
        other = as_maxpoly(other)
        return MaxPoly.of(*(a + b for a, b in product(self.branches, other.branches)))

    __radd__ = __add__

    def __mul__(self, other) -> "MaxPoly":
        other = as_maxpoly(other)
        return MaxPoly.of(*(a * b for a, b in product(self.branches, other.branches)))

    __rmul__ = __mul__

    def max(self, *others: "MaxPoly") -> "MaxPoly":
        return MaxPoly.maximum(self, *others)

    def subs(self, mapping: Mapping[sympy.Symbol, "MaxPoly"]) -> "MaxPoly":
        """Compose: replace atoms by max-polynomials, distributing their max outward."""
        results = []
        for branch in self.branches:
            used = by_name(s for s in branch.free_symbols if s in mapping)
            for choice in product(*(mapping[s].branches for s in used)):
                check_deadline()
                results.append(branch.xreplace(dict(zip(used, choice))))
        return MaxPoly.of(*results)

    def instantiate(self, model: Mapping[str, int]) -> "MaxPoly":
        values = {p: sympy.Integer(model[p.name]) for p in self.parameters if p.name in model}
        return MaxPoly.of(*(branch.xreplace(values) for branch in self.branches))

    # Inspection
    @cached_property
    def atoms(self) -> frozenset[sympy.Symbol]:
        return frozenset(s for branch in self.branches for s in free_atoms(branch))

    @cached_property
    def parameters(self) -> frozenset[sympy.Symbol]:
        return frozenset(s for branch in self.branches for s in free_parameters(branch))

    @property
    def is_zero(self) -> bool:
        return self.branches == (sympy.Integer(0),)

    def degree(self) -> int:
        atoms = by_name(self.atoms)
        if not atoms:
            return 0
        return max(sympy.Poly(branch, *atoms).total_degree() for branch in self.branches)

    # Evaluation
    @cached_property
    def _compiled(self) -> tuple[list[str], list[list[tuple[tuple[int, ...], Fraction]]]]:
        atoms = by_name(self.atoms)
        compiled = []
        for branch in self.branches:
            compiled.append([(monom, Fraction(int(c.p), int(c.q))) for monom, c in monomials(branch, atoms)])
        return [a.name for a in atoms], compiled

    def evaluate(self, env: Mapping[str, Number]) -> Fraction:
        if self.parameters:
            names = ", ".join(sorted(p.name for p in self.parameters))
            raise UninstantiatedParameter(f"parameters {names} have no value")
        names, compiled = self._compiled
        try:
            values = [env[name] for name in names]
        except KeyError as exc:
            raise UnboundAtom(f"atom {exc.args[0]} has no value") from exc
        best = None
        for terms in compiled:
            total = Fraction(0)
            for monom, coeff in terms:
                term = coeff
                for value, power in zip(values, monom):
                    if power:
                        term *= value ** power
                total += term
            best = total if best is None or total > best else best
        return best

    def __str__(self) -> str:
        texts = [format_branch(branch) for branch in self.branches]
        return texts[0] if len(texts) == 1 else f"max({', '.join(texts)})"


def as_maxpoly(value) -> MaxPoly:
    if isinstance(value, MaxPoly):
        return value
    return MaxPoly.of(value)


ZERO = MaxPoly.constant(0)
ONE = MaxPoly.constant(1)


def sum_all(polys: Iterable[MaxPoly]) -> MaxPoly:
    return reduce(lambda a, b: a + b, polys, ZERO)


def _format_coeff(coeff: sympy.Expr) -> str:
    if coeff.is_Rational and not coeff.is_Integer:
        return f"{coeff.p}/{coeff.q}"
    if coeff.is_Number:
        return str(coeff)
    return f"({coeff})" if coeff.is_Add else str(coeff)


def format_branch(expr: sympy.Expr) -> str:
    """Render one polynomial in the interpretation expression grammar."""
    atoms = by_name(free_atoms(expr))
    terms = [(m, c) for m, c in monomials(expr, atoms) if c != 0]
    if not terms:
        return "0"
    terms.sort(key=lambda t: (-sum(t[0]), tuple(-e for e in t[0])))
    parts = []
    for monom, coeff in terms:
        factors = [a.name for a, power in zip(atoms, monom) for _ in range(power)]
        if coeff != 1 or not factors:
            factors.insert(0, _format_coeff(coeff))
        parts.append(" * ".join(factors))
    return " + ".join(parts)


def normalize(expr) -> MaxPoly:
    """Normal form of a sympy expression built from naturals, rationals, atoms, +, * and Max."""
    expr = sympy.sympify(expr)
    if isinstance(expr, sympy.Max):
        return MaxPoly.maximum(*(normalize(arg) for arg in expr.args))
    if expr.is_Add:
        return sum_all(normalize(arg) for arg in expr.args)
    if expr.is_Mul:
        return reduce(lambda a, b: a * b, (normalize(arg) for arg in expr.args), ONE)
    if expr.is_Pow:
        base, exp = expr.args
        if not (exp.is_Integer and exp >= 0):
            raise ExpressionError(f"unsupported exponent in {expr}")
        return reduce(lambda a, b: a * b, [normalize(base)] * int(exp), ONE)
    if expr.is_Number:
        if expr < 0:
            raise NegativeCoefficient(f"negative constant {expr}")
        return MaxPoly.of(expr)
    if expr.is_Symbol:
        return MaxPoly.of(expr)
    raise ExpressionError(f"unsupported expression {expr}")


# Comparison
class Mode(str, Enum):
    STRICT_COST = "strict"
    WEAK_SIZE = "weak"


class Outcome(str, Enum):
    PROVED = "proved"
    DISPROVED = "disproved"
    UNKNOWN = "unknown"


def _split_signs(coeff: sympy.Expr) -> tuple[sympy.Expr, sympy.Expr]:
    pos, neg = sympy.Integer(0), sympy.Integer(0)
    for term in sympy.Add.make_args(sympy.expand(coeff)):
        number, _ = term.as_coeff_Mul()
        if number < 0:
            neg -= term
        else:
            pos += term
    return pos, neg


def _integral(coeff: sympy.Expr) -> bool:
    return all(term.as_coeff_Mul()[0].is_Integer for term in sympy.Add.make_args(coeff))


def pair_condition(p: sympy.Expr, q: sympy.Expr, strict: bool) -> sympy.logic.boolalg.Boolean:
    """Coefficient-wise sufficient condition for p >= q (+1 when strict) at every point."""
    diff = sympy.expand(p - q)
    atoms = by_name(free_atoms(diff))
    constant = sympy.Integer(0)
    conditions = []
    for monom, coeff in monomials(diff, atoms):
        if not any(monom):
            constant = coeff
            continue
        pos, neg = _split_signs(coeff)
        conditions.append(sympy.Ge(pos, neg))
    pos, neg = _split_signs(constant)
    if not strict:
        conditions.append(sympy.Ge(pos, neg))
    elif _integral(constant):
        conditions.append(sympy.Gt(pos, neg))
    else:
        conditions.append(sympy.Ge(pos, neg + 1))
    return sympy.And(*conditions)


def _direct(lhs: Iterable[sympy.Expr], rhs: Iterable[sympy.Expr], strict: bool):
    lhs = list(lhs)
    return sympy.And(*(sympy.Or(*(pair_condition(l, r, strict) for l in lhs)) for r in rhs))


def split_atoms(p: MaxPoly, q: MaxPoly) -> list[sympy.Symbol]:
    """Atoms occurring in some but not all branches of a side with several branches."""
    found: set[sympy.Symbol] = set()
    for side in (p, q):
        if len(side.branches) > 1:
            per_branch = [free_atoms(b) for b in side.branches]
            found |= set.union(*per_branch) - set.intersection(*per_branch)
    return by_name(found)


@dataclass(frozen=True)
class Orientation:
    formula: sympy.logic.boolalg.Boolean
    split: tuple[str, ...] = ()
    capped: bool = False


def orient(p: MaxPoly, q: MaxPoly, strict: bool, split_cap: int = SPLIT_CAP) -> Orientation:
    """Reduce p >= q (+1 when strict) to a formula over the parameters.

    Max on the right is handled branch by branch; max on the left is first tried
    branch-wise and otherwise case-split on every ordering of the atoms the max
    ranges over, writing the ordered atoms as partial sums of fresh atoms.
    """
    direct = _direct(p.branches, q.branches, strict)
    if direct == sympy.true:
        return Orientation(direct)
    atoms = split_atoms(p, q)
    if not atoms:
        return Orientation(direct)
    if len(atoms) > split_cap:
        logger.debug("%d max atoms exceed the split cap %d", len(atoms), split_cap)
        return Orientation(direct, tuple(a.name for a in atoms), capped=True)
    fresh = [atom(f"_d{i}") for i in range(len(atoms))]
    cases = []
    for order in permutations(atoms):
        check_deadline()
        mapping = {a: sum(fresh[i:], sympy.Integer(0)) for i, a in enumerate(order)}
        lhs = [sympy.expand(b.xreplace(mapping)) for b in p.branches]
        rhs = [sympy.expand(b.xreplace(mapping)) for b in q.branches]
        case = _direct(lhs, rhs, strict)
        if case == sympy.false and not (p.parameters or q.parameters):
            break
        cases.append(case)
    else:
        return Orientation(sympy.And(*cases), tuple(a.name for a in atoms))
    return Orientation(sympy.false, tuple(a.name for a in atoms))


@dataclass(frozen=True)
class Comparison:
    outcome: Outcome
    witness: Optional[dict[str, int]] = None
    trace: tuple[str, ...] = ()

    @property
    def proved(self) -> bool:
        return self.outcome is Outcome.PROVED


def find_violation(p: MaxPoly, q: MaxPoly, strict: bool, grid_max: int = GRID_MAX) -> Optional[dict[str, int]]:
    """First grid point of {0..grid_max}^atoms where the inequality fails."""
    names = sorted(a.name for a in p.atoms | q.atoms)
    delta = 1 if strict else 0
    for values in product(range(grid_max + 1), repeat=len(names)):
        env = dict(zip(names, values))
        if p.evaluate(env) < q.evaluate(env) + delta:
            return env
    return None


def compare(p: MaxPoly, q: MaxPoly, mode: Mode, split_cap: int = SPLIT_CAP, grid_max: int = GRID_MAX) -> Comparison:
    """Sound comparison of parameter-free max-polynomials.

    PROVED means p >= q + 1 (strict) or p >= q (weak) for all naturals; DISPROVED
    carries a grid point violating it; anything else is UNKNOWN.
    """
    if p.parameters or q.parameters:
        raise UninstantiatedParameter("compare needs parameter-free operands; use orient for templates")
    strict = Mode(mode) is Mode.STRICT_COST
    orientation = orient(p, q, strict, split_cap)
    trace = []
    if orientation.split:
        cases = factorial(len(orientation.split))
        if orientation.capped:
            trace.append(f"split on {', '.join(orientation.split)} skipped (over cap {split_cap})")
        else:
            trace.append(f"split on {', '.join(orientation.split)}: {cases} cases")
    if orientation.formula == sympy.true:
        return Comparison(Outcome.PROVED, trace=tuple(trace))
    witness = find_violation(p, q, strict, grid_max)
    if witness is not None:
        return Comparison(Outcome.DISPROVED, witness, tuple(trace))
    trace.append(f"undecided: {p} vs {q}")
    return Comparison(Outcome.UNKNOWN, trace=tuple(trace))
