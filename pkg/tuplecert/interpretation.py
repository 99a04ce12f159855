"""Symbolic cost-size interpretations: the file format and symbolic term interpretation.

    K list = 2
    J add x y : cost = y + 1 ; size = x + y
    J cons : cost = 0 ; size = (q.1 + 1, max(x, q.2))
    J f x y : cost = [0, x, y + 1] ; size = x

A symbol of arity m carries cost summands e0..em; `cost = e` is shorthand for
e0 = .. = e(m-1) = 0 and em = e. Summand ei may only mention the first i
arguments. Omitted argument names bind to the TRS variables of each argument sort,
in declaration order.
"""
import logging
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Union

from tuplecert.errors import ExpressionError, MissingSymbol, ParseError, ShapeMismatch
from tuplecert.expressions import ExpressionParser, parse_size
from tuplecert.maxpoly import ZERO, MaxPoly, atom, atom_name, sum_all
from tuplecert.parser import IDENTIFIER, strip_comment
from tuplecert.terms import SimpleType, Symbol, Term, Trs, Var

logger = logging.getLogger(__name__)

K_LINE = re.compile(r"K\s+(?P<sort>\S+)\s*=\s*(?P<k>\d+)\s*$")
J_LINE = re.compile(r"J\s+(?P<name>[^\s:]+)(?P<args>[^:]*):(?P<body>.*)$")


@dataclass(frozen=True)
class SymbolInterpretation:
    symbol: Symbol
    params: tuple[str, ...]
    costs: tuple[MaxPoly, ...]
    size: tuple[MaxPoly, ...]

    @property
    def cost(self) -> MaxPoly:
        """The last summand, which is the whole cost in shorthand form."""
        return self.costs[-1]

    @property
    def is_shorthand(self) -> bool:
        return all(c.is_zero for c in self.costs[:-1])

    @property
    def is_zero_cost(self) -> bool:
        return all(c.is_zero for c in self.costs)

    @property
    def parameters(self) -> frozenset:
        return frozenset(p for poly in (*self.costs, *self.size) for p in poly.parameters)

    def instantiate(self, model: Mapping[str, int]) -> "SymbolInterpretation":
        return replace(
            self,
            costs=tuple(c.instantiate(model) for c in self.costs),
            size=tuple(s.instantiate(model) for s in self.size),
        )


@dataclass
class SymbolicInterpretation:
    kmap: dict[str, int]
    symbols: dict[str, SymbolInterpretation] = field(default_factory=dict)

    def k(self, sort: str) -> int:
        return self.kmap.get(sort, 1)

    def for_symbol(self, name: str) -> SymbolInterpretation:
        try:
            return self.symbols[name]
        except KeyError:
            raise MissingSymbol(f"no interpretation for symbol {name}") from None

    @property
    def parameters(self) -> frozenset:
        return frozenset(p for si in self.symbols.values() for p in si.parameters)

    def instantiate(self, model: Mapping[str, int]) -> "SymbolicInterpretation":
        return SymbolicInterpretation(
            dict(self.kmap), {name: si.instantiate(model) for name, si in self.symbols.items()}
        )

    def require_total(self, trs: Trs) -> None:
        missing = [name for name in trs.signature if name not in self.symbols]
        if missing:
            raise MissingSymbol(f"no interpretation for {', '.join(missing)}")


def default_arg_names(symbol: Symbol, trs: Trs) -> tuple[str, ...]:
    """TRS variables of each argument sort in declaration order, then `<sort><i>`."""
    used: dict[str, int] = {}
    names = []
    for index, sort in enumerate(symbol.ty.arg_sorts, start=1):
        pool = trs.vars_of_sort(sort)
        n = used.get(sort, 0)
        used[sort] = n + 1
        names.append(pool[n].name if n < len(pool) else f"{sort}{index}")
    return tuple(names)


def atoms_of(params: Iterable[str], sorts: Iterable[str], interp_k) -> dict[str, int]:
    return {name: interp_k(sort) for name, sort in zip(params, sorts)}


def _read_j(match: re.Match, line_no: int, trs: Trs, kmap: dict[str, int]) -> SymbolInterpretation:
    name = match.group("name")
    if name not in trs.signature:
        raise ParseError(f"unknown symbol {name!r}", line_no, match.start("name") + 1)
    symbol = trs.symbol(name)
    params = tuple(match.group("args").split())
    if not params:
        params = default_arg_names(symbol, trs)
    elif len(params) != symbol.arity:
        raise ParseError(f"{name} takes {symbol.arity} arguments, {len(params)} named", line_no, match.start("args") + 1)
    for param in params:
        if not IDENTIFIER.fullmatch(param):
            raise ParseError(f"invalid argument name {param!r}", line_no, match.start("args") + 1)
    if len(set(params)) != len(params):
        raise ParseError(f"duplicate argument names for {name}", line_no, match.start("args") + 1)

    def k(sort: str) -> int:
        return kmap.get(sort, 1)

    sorts = symbol.ty.arg_sorts
    parts = {}
    for part in match.group("body").split(";"):
        key, eq, value = part.partition("=")
        key = key.strip()
        if not eq or key not in ("cost", "size"):
            raise ParseError(f"expected 'cost = ...' or 'size = ...', found {part.strip()!r}", line_no, match.start("body") + 1)
        if key in parts:
            raise ParseError(f"{key} given twice for {name}", line_no, match.start("body") + 1)
        parts[key] = value
    if set(parts) != {"cost", "size"}:
        raise ParseError(f"{name} needs both cost and size", line_no, match.start("body") + 1)

    try:
        costs = _read_costs(parts["cost"], params, sorts, k)
        size = parse_size(parts["size"], k(symbol.ty.result), atoms_of(params, sorts, k))
    except ExpressionError as exc:
        raise ExpressionError(f"line {line_no}: {exc}") from exc
    return SymbolInterpretation(symbol, params, costs, size)


def _read_costs(text: str, params, sorts, k) -> tuple[MaxPoly, ...]:
    arity = len(params)
    if text.strip().startswith("["):
        parser = ExpressionParser(text, None)
        summands = parser.bracket_list()
        parser.done()
        if len(summands) != arity + 1:
            raise ExpressionError(f"cost list needs {arity + 1} summands, got {len(summands)}")
        for index, summand in enumerate(summands):
            allowed = {
                atom(atom_name(p, c, k(s))) for p, s in zip(params[:index], sorts[:index]) for c in range(1, k(s) + 1)
            }
            stray = summand.atoms - allowed
            if stray:
                names = ", ".join(sorted(a.name for a in stray))
                raise ExpressionError(f"cost summand {index} may only use the first {index} arguments, found {names}")
        return tuple(summands)
    parser = ExpressionParser(text, atoms_of(params, sorts, k))
    cost = parser.expr()
    parser.done()
    return (ZERO,) * arity + (cost,)


def parse_interpretation(text: Union[bytes, str], trs: Trs) -> SymbolicInterpretation:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    kmap: dict[str, int] = {}
    pending = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = strip_comment(raw).strip()
        if not line:
            continue
        if line.startswith("K ") or line == "K":
            match = K_LINE.match(line)
            if not match:
                raise ParseError("expected 'K <sort> = <n>'", line_no)
            sort, k = match.group("sort"), int(match.group("k"))
            if sort not in trs.sorts:
                raise ParseError(f"undeclared sort {sort!r}", line_no, 3)
            if k < 1:
                raise ParseError("a sort needs at least one size component", line_no, match.start("k") + 1)
            kmap[sort] = k
        elif line.startswith("J "):
            match = J_LINE.match(line)
            if not match:
                raise ParseError("expected 'J <symbol> [args] : cost = ... ; size = ...'", line_no)
            pending.append((match, line_no))
        else:
            raise ParseError(f"unknown declaration {line.split()[0]!r}", line_no)
    for sort in trs.sorts:
        kmap.setdefault(sort, 1)
    interp = SymbolicInterpretation(kmap)
    # J lines are read after every K line, so K may come anywhere in the file
    for match, line_no in pending:
        si = _read_j(match, line_no, trs, kmap)
        if si.symbol.name in interp.symbols:
            raise ParseError(f"{si.symbol.name} interpreted twice", line_no)
        interp.symbols[si.symbol.name] = si
    logger.debug("read interpretations for %s", sorted(interp.symbols))
    return interp


def format_interpretation(interp: SymbolicInterpretation, trs: Trs) -> str:
    lines = [f"K {sort} = {interp.k(sort)}" for sort in trs.sorts]
    for name in trs.signature:
        if name not in interp.symbols:
            continue
        si = interp.symbols[name]
        head = " ".join(["J", name, *si.params])
        cost = str(si.cost) if si.is_shorthand else "[" + ", ".join(str(c) for c in si.costs) + "]"
        size = str(si.size[0]) if len(si.size) == 1 else "(" + ", ".join(str(s) for s in si.size) + ")"
        lines.append(f"{head} : cost = {cost} ; size = {size}")
    return "\n".join(lines) + "\n"


# Symbolic interpretation of terms
@dataclass(frozen=True)
class SymbolicCs:
    """Interpretation of a term with its variables as zero-cost size atoms.

    `cost` is the accumulated numeric cost. For a term of function type,
    `pending` holds the cost summands of the missing arguments and `size` is
    expressed over them; missing argument i is named `_a<i>` (or `_a<i>.<c>`).
    """

    ty: SimpleType
    cost: MaxPoly
    size: tuple[MaxPoly, ...]
    pending: tuple[MaxPoly, ...] = ()


def hole_name(index: int) -> str:
    return f"_a{index}"


def variable_size(var: Var, k: int) -> tuple[MaxPoly, ...]:
    return tuple(MaxPoly.variable(atom_name(var.name, c, k)) for c in range(1, k + 1))


def interpret_symbolic(term: Term, interp: SymbolicInterpretation) -> SymbolicCs:
    if isinstance(term, Var):
        return SymbolicCs(term.ty, ZERO, variable_size(term, interp.k(term.sort)))
    si = interp.for_symbol(term.symbol.name)
    sorts = term.symbol.ty.arg_sorts
    if len(si.size) != interp.k(term.symbol.ty.result):
        raise ShapeMismatch(f"{term.symbol.name} has {len(si.size)} size components, sort needs {interp.k(term.symbol.ty.result)}")
    args = [interpret_symbolic(arg, interp) for arg in term.args]
    mapping = {}
    for index, (param, sort) in enumerate(zip(si.params, sorts)):
        k = interp.k(sort)
        if index < len(args):
            values = args[index].size
            if len(values) != k:
                raise ShapeMismatch(f"argument {index + 1} of {term.symbol.name} has {len(values)} size components, expected {k}")
        else:
            values = variable_size(Var(hole_name(index - len(args) + 1), sort), k)
        for c, value in enumerate(values, start=1):
            mapping[atom(atom_name(param, c, k))] = value
    applied = len(args)
    cost = sum_all([*(arg.cost for arg in args), *(e.subs(mapping) for e in si.costs[: applied + 1])])
    return SymbolicCs(
        term.ty,
        cost,
        tuple(s.subs(mapping) for s in si.size),
        tuple(e.subs(mapping) for e in si.costs[applied + 1:]),
    )
