"""Numeric cost-size tuples, semantic application and the product order."""
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Callable, Mapping, Optional, Union

from tuplecert.config import GRID_MAX
from tuplecert.errors import NonIntegralValue, ShapeMismatch, UnboundVariable
from tuplecert.interpretation import SymbolInterpretation, SymbolicInterpretation
from tuplecert.maxpoly import atom_name
from tuplecert.terms import SimpleType, Term, Trs, Var, sort_type

logger = logging.getLogger(__name__)

SizeVec = tuple[int, ...]
# cost part of a function value: argument size -> (numeric cost, cost part of the rest)
CostFn = Callable[[SizeVec], tuple[int, Optional["CostFn"]]]
SizeFn = Callable[[SizeVec], Union[SizeVec, "SizeFn"]]


def natural(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise NonIntegralValue(f"{what} evaluates to {value}")
    return int(value)


@dataclass(frozen=True)
class CsValue:
    """⟨(cost, cost_fn), size⟩ of type `ty`; `ks` lists k of every argument sort, then of the result."""

    ty: SimpleType
    ks: tuple[int, ...]
    cost: int
    cost_fn: Optional[CostFn]
    size: Union[SizeVec, SizeFn]

    @property
    def is_sort(self) -> bool:
        return self.ty.is_sort


def sort_value(sort: str, cost: int, size: SizeVec) -> CsValue:
    return CsValue(sort_type(sort), (len(size),), cost, None, tuple(size))


def sem_apply(f: CsValue, x: CsValue) -> CsValue:
    """⟨(n, f^c), f^s⟩ · ⟨m, x^s⟩ = ⟨(n + m + k, h), f^s(x^s)⟩ where f^c(x^s) = (k, h)."""
    if f.is_sort:
        raise ShapeMismatch(f"a value of sort {f.ty} cannot be applied")
    if not x.is_sort or x.ty.result != f.ty.arg_sorts[0] or len(x.size) != f.ks[0]:
        raise ShapeMismatch(f"argument of type {x.ty} where {f.ty.arg_sorts[0]} is expected")
    extra, rest = f.cost_fn(x.size)
    return CsValue(f.ty.drop(1), f.ks[1:], f.cost + x.cost + extra, rest, f.size(x.size))


def symbol_value(si: SymbolInterpretation, kmap: Mapping[str, int]) -> CsValue:
    """Evaluable closures over the max-polynomials of one symbol interpretation."""
    sorts = si.symbol.ty.arg_sorts
    ks = tuple(kmap.get(s, 1) for s in sorts) + (kmap.get(si.symbol.ty.result, 1),)
    name = si.symbol.name

    def bind(env: dict, index: int, vec: SizeVec) -> dict:
        k = ks[index]
        if len(vec) != k:
            raise ShapeMismatch(f"argument {index + 1} of {name} needs {k} size components")
        env = dict(env)
        for c, value in enumerate(vec, start=1):
            env[atom_name(si.params[index], c, k)] = value
        return env

    def cost_fn(env: dict, index: int) -> Optional[CostFn]:
        if index == len(sorts):
            return None

        def apply(vec: SizeVec):
            inner = bind(env, index, vec)
            return natural(si.costs[index + 1].evaluate(inner), f"cost of {name}"), cost_fn(inner, index + 1)

        return apply

    def size_fn(env: dict, index: int):
        if index == len(sorts):
            return tuple(natural(s.evaluate(env), f"size of {name}") for s in si.size)
        return lambda vec: size_fn(bind(env, index, vec), index + 1)

    return CsValue(si.symbol.ty, ks, natural(si.costs[0].evaluate({}), f"cost of {name}"), cost_fn({}, 0), size_fn({}, 0))


@dataclass
class NumericInterpretation:
    kmap: dict[str, int]
    values: dict[str, CsValue]

    @classmethod
    def from_symbolic(cls, interp: SymbolicInterpretation) -> "NumericInterpretation":
        return cls(dict(interp.kmap), {name: symbol_value(si, interp.kmap) for name, si in interp.symbols.items()})

    def k(self, sort: str) -> int:
        return self.kmap.get(sort, 1)


class Valuation(dict):
    """Variable name -> zero-cost value of its sort."""

    def __init__(self, values: Mapping[str, CsValue] = ()):
        super().__init__(values)
        for name, value in self.items():
            if value.cost != 0:
                raise ValueError(f"valuation assigns {name} a tuple of cost {value.cost}")

    @classmethod
    def of_sizes(cls, sizes: Mapping[Var, SizeVec]) -> "Valuation":
        return cls({var.name: sort_value(var.sort, 0, vec) for var, vec in sizes.items()})


def interpret_term(term: Term, interp: NumericInterpretation, valuation: Mapping[str, CsValue]) -> CsValue:
    if isinstance(term, Var):
        try:
            return valuation[term.name]
        except KeyError:
            raise UnboundVariable(f"variable {term.name} has no value") from None
    value = interp.values[term.symbol.name]
    for arg in term.args:
        value = sem_apply(value, interpret_term(arg, interp, valuation))
    return value


class Relation(str, Enum):
    GREATER = "greater"
    GREATER_EQ = "greater-eq"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class ProductComparison:
    relation: Relation
    # functional parts were compared on grid points only
    sampled: bool = False


def grid(k: int, grid_max: int = GRID_MAX):
    return product(range(grid_max + 1), repeat=k)


def _functions_ge(a: CsValue, b: CsValue, grid_max: int) -> bool:
    """Pointwise cost and size comparison of two function values on the grid."""
    if a.is_sort:
        return all(x >= y for x, y in zip(a.size, b.size))
    for vec in grid(a.ks[0], grid_max):
        ca, rest_a = a.cost_fn(vec)
        cb, rest_b = b.cost_fn(vec)
        if ca < cb:
            return False
        ty = a.ty.drop(1)
        if not _functions_ge(
            CsValue(ty, a.ks[1:], 0, rest_a, a.size(vec)), CsValue(ty, b.ks[1:], 0, rest_b, b.size(vec)), grid_max
        ):
            return False
    return True


def product_compare(a: CsValue, b: CsValue, grid_max: int = GRID_MAX) -> ProductComparison:
    if a.ty != b.ty or a.ks != b.ks:
        raise ShapeMismatch(f"cannot compare values of types {a.ty} and {b.ty}")
    rest_ge = _functions_ge(a, b, grid_max)
    sampled = not a.is_sort
    if rest_ge and a.cost > b.cost:
        return ProductComparison(Relation.GREATER, sampled)
    if rest_ge and a.cost >= b.cost:
        return ProductComparison(Relation.GREATER_EQ, sampled)
    return ProductComparison(Relation.INCOMPARABLE, sampled)


def _zero_cost(value: CsValue, grid_max: int) -> bool:
    if value.cost_fn is None:
        return True
    for vec in grid(value.ks[0], grid_max):
        extra, rest = value.cost_fn(vec)
        if extra != 0:
            return False
        if not _zero_cost(CsValue(value.ty.drop(1), value.ks[1:], 0, rest, value.size(vec)), grid_max):
            return False
    return True


def check_zero_cost_data(interp: NumericInterpretation, trs: Trs, grid_max: int = GRID_MAX) -> bool:
    """Every constructor has cost 0 at every application depth (sampled on the grid)."""
    for name in sorted(trs.constructors):
        value = interp.values.get(name)
        if value is None:
            continue
        if value.cost != 0 or not _zero_cost(value, grid_max):
            logger.debug("constructor %s has non-zero cost", name)
            return False
    return True
