"""Bound classes of interpretations and the runtime complexity they induce."""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from tuplecert.compat import Verdict
from tuplecert.errors import PreconditionViolated, UninstantiatedParameter
from tuplecert.interpretation import SymbolInterpretation, SymbolicInterpretation
from tuplecert.maxpoly import MaxPoly, by_name, monomials, sum_all
from tuplecert.terms import Trs

logger = logging.getLogger(__name__)


class BoundKind(str, Enum):
    ADDITIVE = "additive"
    LINEAR = "linear"
    POLYNOMIAL = "polynomial"


@dataclass(frozen=True)
class BoundClass:
    kind: BoundKind
    degree: int
    # for additive functions: the constant a of `sum of components <= a + sum of atoms`
    constant: Optional[Fraction] = None

    @property
    def additive(self) -> bool:
        return self.kind is BoundKind.ADDITIVE

    @property
    def linear(self) -> bool:
        return self.kind in (BoundKind.ADDITIVE, BoundKind.LINEAR)

    def __str__(self) -> str:
        if self.kind is BoundKind.POLYNOMIAL:
            return f"polynomial({self.degree})"
        return self.kind.value


def _require_closed(polys: Sequence[MaxPoly]) -> None:
    params = {p for poly in polys for p in poly.parameters}
    if params:
        names = ", ".join(sorted(p.name for p in params))
        raise UninstantiatedParameter(f"cannot classify with free parameters {names}")


def _additive_constant(total: MaxPoly) -> Optional[Fraction]:
    """a when every branch is `a_b + sum of atoms with coefficient <= 1`, else None."""
    atoms = by_name(total.atoms)
    constant = Fraction(0)
    for branch in total.branches:
        for monom, coeff in monomials(branch, atoms):
            degree = sum(monom)
            if degree > 1 or (degree == 1 and coeff > 1):
                return None
            if degree == 0:
                constant = max(constant, Fraction(int(coeff.p), int(coeff.q)))
    return constant


def classify_size(size: Sequence[MaxPoly]) -> BoundClass:
    """Most specific class of a vector of max-polynomials over argument atoms."""
    _require_closed(size)
    degree = max((poly.degree() for poly in size), default=0)
    constant = _additive_constant(sum_all(size))
    if constant is not None:
        return BoundClass(BoundKind.ADDITIVE, degree, constant)
    if degree <= 1:
        return BoundClass(BoundKind.LINEAR, degree)
    return BoundClass(BoundKind.POLYNOMIAL, degree)


@dataclass(frozen=True)
class SymbolBounds:
    name: str
    summands: tuple[BoundClass, ...]
    cost: BoundClass
    size: BoundClass

    @property
    def additive(self) -> bool:
        return self.size.additive and self.cost.additive

    @property
    def zero_cost(self) -> bool:
        return self.cost.degree == 0 and self.cost.constant == 0


def classify_symbol(si: SymbolInterpretation) -> SymbolBounds:
    # the cost summands add up, so the whole cost is classified like a vector
    return SymbolBounds(
        si.symbol.name, tuple(classify_size([c]) for c in si.costs), classify_size(si.costs), classify_size(si.size)
    )


def classify_interpretation(interp: SymbolicInterpretation) -> dict[str, SymbolBounds]:
    return {name: classify_symbol(si) for name, si in interp.symbols.items()}


class IrcKind(str, Enum):
    LINEAR = "O(n)"
    POLYNOMIAL = "O(n^k)"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class IrcVerdict:
    kind: IrcKind
    degree: Optional[int] = None
    reason: str = ""
    # degree derived through tuple sizes (k > 1), possibly not tight
    upper_estimate: bool = False

    def __str__(self) -> str:
        if self.kind is IrcKind.POLYNOMIAL:
            return f"O(n^{self.degree})"
        return self.kind.value


def _loose_constructors(trs: Trs, classes: dict[str, SymbolBounds]) -> list[str]:
    return sorted(name for name in trs.constructors if not classes[name].size.additive)


def _costly_constructors(trs: Trs, classes: dict[str, SymbolBounds]) -> list[str]:
    return sorted(name for name in trs.constructors if not classes[name].zero_cost)


def _constructor_reason(trs: Trs, classes: dict[str, SymbolBounds]) -> Optional[str]:
    """Why data terms give no cost bound, or None.

    Normal forms are counted at cost 0 when rules are oriented, so a
    constructor with cost breaks the decrease on rules copying a variable.
    """
    costly = _costly_constructors(trs, classes)
    if costly:
        return f"constructor costs not zero: {', '.join(costly)}"
    loose = _loose_constructors(trs, classes)
    if loose:
        return f"constructor sizes not additive: {', '.join(loose)}"
    return None


def additive_constant(trs: Trs, classes: dict[str, SymbolBounds]) -> int:
    """b with the size components of every data term d summing to at most b * |d|."""
    reason = _constructor_reason(trs, classes)
    if reason:
        raise PreconditionViolated(reason)
    return max([1, *(math.ceil(classes[name].size.constant) for name in trs.constructors)])


def irc_bound(trs: Trs, interp: SymbolicInterpretation, verdict: Verdict) -> IrcVerdict:
    """Complexity class of irc induced by a compatible interpretation.

    Data terms of size n have sizes linear in n and cost 0 when every
    constructor is additive and free, so the cost of a basic term is a
    polynomial in n of the degree of its head's cost.
    """
    if verdict is not Verdict.COMPATIBLE:
        raise PreconditionViolated(f"irc bounds need a compatible interpretation, verdict was {verdict.value}")
    classes = classify_interpretation(interp)
    reason = _constructor_reason(trs, classes)
    if reason:
        logger.info("irc bound inconclusive, %s", reason)
        return IrcVerdict(IrcKind.INCONCLUSIVE, reason=reason)
    degree = max((classes[name].cost.degree for name in trs.defined), default=0)
    if degree <= 1:
        return IrcVerdict(IrcKind.LINEAR, 1)
    tuples = any(k > 1 for k in interp.kmap.values())
    return IrcVerdict(IrcKind.POLYNOMIAL, degree, upper_estimate=tuples)


def bound_function(trs: Trs, interp: SymbolicInterpretation):
    """n -> upper bound on irc(n), from the interpretation's costs at data sizes b * n."""
    classes = classify_interpretation(interp)
    b = additive_constant(trs, classes)
    defined = [interp.for_symbol(name) for name in sorted(trs.defined)]

    def bound(n: int) -> int:
        best = 0
        for si in defined:
            env = {}
            for summand in si.costs:
                env.update({a.name: b * n for a in summand.atoms})
            total = sum(summand.evaluate(env) for summand in si.costs)
            best = max(best, math.floor(total))
        return best

    return bound


def format_bounds(trs: Trs, classes: dict[str, SymbolBounds], verdict: IrcVerdict) -> str:
    lines = []
    for name in trs.signature:
        bounds = classes[name]
        lines.append(f"{name}: cost {bounds.cost}, size {bounds.size}")
    line = f"irc: {verdict}"
    if verdict.reason:
        line += f" ({verdict.reason})"
    lines.append(line)
    return "\n".join(lines) + "\n"
