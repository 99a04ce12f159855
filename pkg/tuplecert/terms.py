"""Simply-typed applicative terms, rules and rewrite systems."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterator, Mapping, Union

from tuplecert.errors import TermTypeError


@dataclass(frozen=True)
class SimpleType:
    arg_sorts: tuple[str, ...]
    result: str

    @property
    def is_sort(self) -> bool:
        return not self.arg_sorts

    def drop(self, count: int) -> "SimpleType":
        return SimpleType(self.arg_sorts[count:], self.result)

    def __str__(self) -> str:
        return " => ".join([*self.arg_sorts, self.result])


def sort_type(sort: str) -> SimpleType:
    return SimpleType((), sort)


@dataclass(frozen=True)
class Symbol:
    name: str
    ty: SimpleType

    @property
    def arity(self) -> int:
        return len(self.ty.arg_sorts)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Var:
    name: str
    sort: str

    @property
    def ty(self) -> SimpleType:
        return sort_type(self.sort)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class App:
    """A symbol applied to zero or more arguments (curried application, flattened)."""

    symbol: Symbol
    args: tuple["Term", ...] = ()
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.symbol.name, self.args)))

    def __hash__(self) -> int:
        return self._hash

    @property
    def ty(self) -> SimpleType:
        return self.symbol.ty.drop(len(self.args))

    def __str__(self) -> str:
        if not self.args:
            return self.symbol.name
        parts = [self.symbol.name]
        for arg in self.args:
            text = str(arg)
            parts.append(f"({text})" if isinstance(arg, App) and arg.args else text)
        return " ".join(parts)


Term = Union[Var, App]
Position = tuple[int, ...]
Substitution = Mapping[str, Term]


def type_of(term: Term) -> SimpleType:
    return term.ty


def apply(head: Term, *args: Term) -> App:
    """Apply `head` to further arguments, checking every argument sort."""
    if isinstance(head, Var):
        raise TermTypeError(f"variable {head.name} : {head.sort} cannot be applied")
    expected = head.ty.arg_sorts
    if len(args) > len(expected):
        raise TermTypeError(
            f"{head.symbol.name} : {head.symbol.ty} applied to {len(head.args) + len(args)} arguments"
        )
    for arg, sort in zip(args, expected):
        ty = type_of(arg)
        if not ty.is_sort or ty.result != sort:
            raise TermTypeError(f"argument {arg} : {ty} where {sort} is expected in {head}")
    return App(head.symbol, head.args + tuple(args))


def size(term: Term) -> int:
    """Absolute size: number of symbol and variable occurrences."""
    if isinstance(term, Var):
        return 1
    return 1 + sum(size(arg) for arg in term.args)


def variables(term: Term) -> list[Var]:
    seen: dict[Var, None] = {}
    _collect_vars(term, seen)
    return list(seen)


def _collect_vars(term: Term, seen: dict[Var, None]) -> None:
    if isinstance(term, Var):
        seen.setdefault(term, None)
        return
    for arg in term.args:
        _collect_vars(arg, seen)


def var_occurrences(term: Term) -> Counter:
    if isinstance(term, Var):
        return Counter({term: 1})
    counts: Counter = Counter()
    for arg in term.args:
        counts.update(var_occurrences(arg))
    return counts


def symbols_of(term: Term) -> set[str]:
    if isinstance(term, Var):
        return set()
    names = {term.symbol.name}
    for arg in term.args:
        names |= symbols_of(arg)
    return names


def apply_subst(term: Term, subst: Substitution) -> Term:
    """Homomorphic replacement of variables; symbols are left unchanged."""
    if isinstance(term, Var):
        replacement = subst.get(term.name)
        if replacement is None:
            return term
        ty = type_of(replacement)
        if ty != term.ty:
            raise TermTypeError(f"substitution maps {term.name} : {term.sort} to {replacement} : {ty}")
        return replacement
    if not term.args:
        return term
    return App(term.symbol, tuple(apply_subst(arg, subst) for arg in term.args))


def compose_subst(first: Substitution, second: Substitution) -> dict[str, Term]:
    """The substitution applying `first` then `second`."""
    composed = {name: apply_subst(term, second) for name, term in first.items()}
    for name, term in second.items():
        composed.setdefault(name, term)
    return composed


def positions(term: Term, prefix: Position = ()) -> Iterator[tuple[Position, Term]]:
    """Pre-order walk: the root first, then arguments left to right."""
    yield prefix, term
    if isinstance(term, App):
        for index, arg in enumerate(term.args):
            yield from positions(arg, prefix + (index,))


def subterm_at(term: Term, position: Position) -> Term:
    for index in position:
        term = term.args[index]
    return term


def replace_at(term: Term, position: Position, replacement: Term) -> Term:
    if not position:
        return replacement
    index, rest = position[0], position[1:]
    args = list(term.args)
    args[index] = replace_at(args[index], rest, replacement)
    return App(term.symbol, tuple(args))


@dataclass(frozen=True)
class Rule:
    lhs: App
    rhs: Term

    def __str__(self) -> str:
        return f"{self.lhs} -> {self.rhs}"


@dataclass(frozen=True, eq=False)
class Trs:
    sorts: tuple[str, ...]
    symbols: tuple[Symbol, ...]
    variables: tuple[Var, ...]
    rules: tuple[Rule, ...]

    @cached_property
    def signature(self) -> dict[str, Symbol]:
        return {symbol.name: symbol for symbol in self.symbols}

    @cached_property
    def defined(self) -> frozenset[str]:
        return frozenset(rule.lhs.symbol.name for rule in self.rules)

    @cached_property
    def constructors(self) -> frozenset[str]:
        return frozenset(self.signature) - self.defined

    @cached_property
    def rules_by_head(self) -> dict[str, list[tuple[int, Rule]]]:
        grouped: dict[str, list[tuple[int, Rule]]] = {}
        for index, rule in enumerate(self.rules):
            grouped.setdefault(rule.lhs.symbol.name, []).append((index, rule))
        return grouped

    def symbol(self, name: str) -> Symbol:
        return self.signature[name]

    def vars_of_sort(self, sort: str) -> list[Var]:
        return [var for var in self.variables if var.sort == sort]

    def is_constructor(self, name: str) -> bool:
        return name in self.constructors


def is_data(term: Term, trs: Trs) -> bool:
    if isinstance(term, Var) or not trs.is_constructor(term.symbol.name):
        return False
    return type_of(term).is_sort and all(is_data(arg, trs) for arg in term.args)


def is_basic(term: Term, trs: Trs) -> bool:
    if isinstance(term, Var) or term.symbol.name not in trs.defined:
        return False
    return type_of(term).is_sort and all(is_data(arg, trs) for arg in term.args)


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered ways of writing `total` as a sum of `parts` positive integers."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


class TermEnumerator:
    """Enumerates data, basic and ground terms of a TRS by exact absolute size."""

    def __init__(self, trs: Trs):
        self.trs = trs
        self._data: dict[tuple[str, int], list[App]] = {}
        self._ground: dict[tuple[str, int], list[App]] = {}

    def data_terms(self, sort: str, n: int) -> list[App]:
        key = (sort, n)
        if key not in self._data:
            self._data[key] = self._build(sort, n, self.trs.constructors, self.data_terms)
        return self._data[key]

    def ground_terms(self, sort: str, n: int) -> list[App]:
        key = (sort, n)
        if key not in self._ground:
            self._ground[key] = self._build(sort, n, self.trs.signature, self.ground_terms)
        return self._ground[key]

    def basic_terms(self, n: int) -> list[App]:
        terms = []
        for name in sorted(self.trs.defined):
            symbol = self.trs.symbol(name)
            terms.extend(self._with_args(symbol, n, self.data_terms))
        return terms

    def all_ground_terms(self, n: int) -> list[App]:
        return [term for sort in self.trs.sorts for term in self.ground_terms(sort, n)]

    def _build(self, sort, n, names, children) -> list[App]:
        terms = []
        for name in sorted(names):
            symbol = self.trs.symbol(name)
            if symbol.ty.result == sort:
                terms.extend(self._with_args(symbol, n, children))
        return terms

    @staticmethod
    def _with_args(symbol: Symbol, n: int, children) -> list[App]:
        terms = []
        for split in compositions(n - 1, symbol.arity):
            pools = [children(sort, k) for sort, k in zip(symbol.ty.arg_sorts, split)]
            for args in product(*pools):
                terms.append(App(symbol, tuple(args)))
        return terms
