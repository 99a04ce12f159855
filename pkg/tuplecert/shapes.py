"""Parametric interpretation templates.

Coefficients are `Parameter` symbols named after the symbol they belong to:
`a_<c>_<j>` constant of size component j of constructor c, `b_<c>_<j>_<i>` 0/1
selector of argument atom i in that component, `c_<f>_<i>` cost coefficient of
basis term i of f and `d_<f>_<j>_<i>` size coefficient of basis term i in
component j.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations

import sympy

from tuplecert.interpretation import SymbolInterpretation, default_arg_names
from tuplecert.maxpoly import ONE, ZERO, MaxPoly, atom, atom_name, normalize, parameter
from tuplecert.terms import Symbol, Trs

logger = logging.getLogger(__name__)


class Shape(str, Enum):
    CONSTANT = "constant"
    ADDITIVE = "additive"
    LINEAR = "linear"
    SIMPLE = "simple"
    QUADRATIC = "quadratic"
    SIMPLE_QUADRATIC = "simple-quadratic"


@dataclass
class Template:
    """Parametric interpretations plus the side conditions their parameters must meet."""

    symbols: dict[str, SymbolInterpretation] = field(default_factory=dict)
    side: list = field(default_factory=list)

    @property
    def parameters(self) -> set:
        return {p for si in self.symbols.values() for p in si.parameters}

    def update(self, other: "Template") -> None:
        self.symbols.update(other.symbols)
        self.side.extend(other.side)


def argument_atoms(symbol: Symbol, params: tuple[str, ...], kmap: dict[str, int]) -> list[sympy.Symbol]:
    atoms = []
    for name, sort in zip(params, symbol.ty.arg_sorts):
        k = kmap.get(sort, 1)
        atoms.extend(atom(atom_name(name, c, k)) for c in range(1, k + 1))
    return atoms


def basis(shape: Shape, atoms: list[sympy.Symbol]) -> list[sympy.Expr]:
    """Basis terms of a shape; each gets its own coefficient."""
    terms = [sympy.Integer(1), *atoms]
    if shape in (Shape.CONSTANT, Shape.ADDITIVE):
        return terms
    pairs = list(combinations(atoms, 2))
    terms += [sympy.Max(a, b) for a, b in pairs]
    if shape is Shape.LINEAR:
        return terms
    terms += [a * b for a, b in pairs]
    if shape is Shape.SIMPLE:
        return terms
    terms += [a * a for a in atoms]
    if shape is Shape.QUADRATIC:
        return terms
    terms += [a * sympy.Max(b, c) for a in atoms for b, c in pairs]
    return terms


def _combination(terms: list[sympy.Expr], names: list[str]) -> tuple[MaxPoly, list]:
    coefficients = [parameter(name) for name in names]
    return normalize(sympy.Add(*(c * t for c, t in zip(coefficients, terms)))), coefficients


def constructor_template(symbol: Symbol, trs: Trs, kmap: dict[str, int]) -> Template:
    """Zero cost and additive size: a + sum of atoms, with 0/1 selectors when k > 1."""
    params = default_arg_names(symbol, trs)
    atoms = argument_atoms(symbol, params, kmap)
    k = kmap.get(symbol.ty.result, 1)
    name = symbol.name
    size, side = [], []
    if k == 1:
        size.append(MaxPoly.of(parameter(f"a_{name}_1") + sum(atoms, sympy.Integer(0))))
    else:
        selectors = {}
        for j in range(1, k + 1):
            chosen = [parameter(f"b_{name}_{j}_{i}") for i in range(1, len(atoms) + 1)]
            selectors[j] = chosen
            side.extend(sympy.Ge(1, s) for s in chosen)
            size.append(MaxPoly.of(parameter(f"a_{name}_{j}") + sum((s * a for s, a in zip(chosen, atoms)), sympy.Integer(0))))
        for i in range(len(atoms)):
            side.append(sympy.Ge(1, sum(selectors[j][i] for j in selectors)))
    costs = (ZERO,) * (symbol.arity + 1)
    return Template({name: SymbolInterpretation(symbol, params, costs, tuple(size))}, side)


def defined_template(symbol: Symbol, trs: Trs, kmap: dict[str, int], shape: Shape) -> Template:
    params = default_arg_names(symbol, trs)
    atoms = argument_atoms(symbol, params, kmap)
    k = kmap.get(symbol.ty.result, 1)
    name = symbol.name
    size_shape = Shape.ADDITIVE if shape is Shape.CONSTANT else shape
    if shape is Shape.CONSTANT:
        cost = ONE
    else:
        terms = basis(shape, atoms)
        cost, _ = _combination(terms, [f"c_{name}_{i}" for i in range(len(terms))])
    terms = basis(size_shape, atoms)
    size, side, per_atom = [], [], {}
    for j in range(1, k + 1):
        poly, coefficients = _combination(terms, [f"d_{name}_{j}_{i}" for i in range(len(terms))])
        size.append(poly)
        for i, c in enumerate(coefficients[1:], start=1):
            per_atom.setdefault(i, []).append(c)
    if size_shape is Shape.ADDITIVE:
        # every argument atom counted at most once over all components
        side.extend(sympy.Ge(1, sympy.Add(*cs)) for cs in per_atom.values())
    costs = (ZERO,) * symbol.arity + (cost,)
    return Template({name: SymbolInterpretation(symbol, params, costs, tuple(size))}, side)


def constructor_templates(trs: Trs, kmap: dict[str, int]) -> Template:
    template = Template()
    for name in sorted(trs.constructors):
        template.update(constructor_template(trs.symbol(name), trs, kmap))
    return template


def defined_templates(trs: Trs, names, kmap: dict[str, int], shape: Shape) -> Template:
    template = Template()
    for name in sorted(names):
        template.update(defined_template(trs.symbol(name), trs, kmap, shape))
    logger.debug("%s template for %s: %d parameters", shape.value, ", ".join(sorted(names)), len(template.parameters))
    return template
