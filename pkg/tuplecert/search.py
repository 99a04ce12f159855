"""Automatic search for compatible interpretations.

Defined symbols are split into strata (call-graph components, callees first) and
solved one stratum at a time: pick a shape, turn every rule of the stratum into
parameter constraints, solve them in a bounded box, freeze the solution and move
on. A stratum that runs out of shapes raises the number of size components k
of every sort and restarts, until k_max. Max-polynomial arithmetic and the
solver both stop with SearchTimeout once the time budget is spent.
"""
import logging
import random
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import networkx as nx
import sympy

from tuplecert.compat import CheckResult, Verdict, check, rule_parts
from tuplecert.config import DEFAULT_COEFF_BOUND, DEFAULT_KMAX, DEFAULT_TIME_BUDGET, SPLIT_CAP
from tuplecert.constants import SHAPE_ORDER
from tuplecert.errors import SearchTimeout, SimplificationFailed
from tuplecert.interpretation import SymbolicInterpretation
from tuplecert.maxpoly import check_deadline, orient, time_limit
from tuplecert.shapes import Shape, Template, constructor_templates, defined_templates
from tuplecert.solver import Model, solve
from tuplecert.terms import Rule, Trs, Var, symbols_of, var_occurrences

logger = logging.getLogger(__name__)


class StrategyKind(str, Enum):
    BLIND = "blind"
    PROGRESSIVE = "progressive"
    PATTERN = "pattern"


PROGRESSIVE = [Shape(name) for name in SHAPE_ORDER]


def is_projection(rule: Rule) -> bool:
    return isinstance(rule.rhs, Var)


def duplicates_variable(rule: Rule) -> bool:
    lhs = var_occurrences(rule.lhs)
    return any(count > lhs[var] for var, count in var_occurrences(rule.rhs).items())


class Strategy:
    """Orders candidate shapes and remembers which were tried per (stratum, k)."""

    def __init__(self, kind: StrategyKind = StrategyKind.PROGRESSIVE, seed: int = 0):
        self.kind = StrategyKind(kind)
        self.seed = seed
        self.marks: set[tuple[int, int, Shape]] = set()

    def candidates(self, index: int, rules: list[Rule], k: int) -> list[Shape]:
        if self.kind is StrategyKind.BLIND:
            shapes = list(PROGRESSIVE)
            random.Random(f"{self.seed}:{index}:{k}").shuffle(shapes)
            return shapes
        if self.kind is StrategyKind.PATTERN:
            if any(duplicates_variable(rule) for rule in rules):
                return [Shape.QUADRATIC, Shape.SIMPLE_QUADRATIC]
            if rules and all(is_projection(rule) for rule in rules):
                return [Shape.CONSTANT, *PROGRESSIVE]
        return list(PROGRESSIVE)

    def propose(self, index: int, rules: list[Rule], k: int) -> Optional[Shape]:
        for shape in self.candidates(index, rules, k):
            if (index, k, shape) not in self.marks:
                self.marks.add((index, k, shape))
                return shape
        return None


@dataclass
class SearchConfig:
    k_max: int = DEFAULT_KMAX
    coeff_bound: int = DEFAULT_COEFF_BOUND
    strategy: StrategyKind = StrategyKind.PROGRESSIVE
    seed: int = 0
    time_budget: float = DEFAULT_TIME_BUDGET
    split_cap: int = SPLIT_CAP

    def __post_init__(self):
        if self.k_max < 1 or self.coeff_bound < 1:
            raise ValueError("k_max and coeff_bound must be at least 1")


@dataclass
class StratumAttempt:
    index: int
    symbols: list[str]
    k: int
    shape: Shape
    constraints: sympy.logic.boolalg.Boolean
    solved: bool


@dataclass
class SearchResult:
    answer: str  # "YES" or "MAYBE"
    interpretation: Optional[SymbolicInterpretation] = None
    k: int = 1
    strata: list[list[str]] = field(default_factory=list)
    attempts: list[StratumAttempt] = field(default_factory=list)
    model: dict[str, int] = field(default_factory=dict)
    verification: Optional[CheckResult] = None
    timed_out: bool = False

    @property
    def yes(self) -> bool:
        return self.answer == "YES"

    def final_attempts(self) -> list[StratumAttempt]:
        """Last attempt of every stratum in the final pipeline run."""
        latest: dict[int, StratumAttempt] = {}
        for attempt in self.attempts:
            if attempt.k == self.k:
                latest[attempt.index] = attempt
        return [latest[i] for i in sorted(latest)]


def call_graph(trs: Trs) -> nx.DiGraph:
    """Edges point from callee to caller."""
    graph = nx.DiGraph()
    graph.add_nodes_from(sorted(trs.defined))
    for rule in trs.rules:
        caller = rule.lhs.symbol.name
        for name in symbols_of(rule.lhs) | symbols_of(rule.rhs):
            if name in trs.defined and name != caller:
                graph.add_edge(name, caller)
    return graph


def stratify(trs: Trs) -> list[list[str]]:
    """Strongly connected components of the call graph, callees first."""
    condensed = nx.condensation(call_graph(trs))
    order = nx.lexicographical_topological_sort(condensed, key=lambda n: min(condensed.nodes[n]["members"]))
    return [sorted(condensed.nodes[n]["members"]) for n in order]


def stratum_rules(trs: Trs, stratum) -> list[Rule]:
    return [rule for rule in trs.rules if rule.lhs.symbol.name in stratum]


def generate_constraints(
    rules: list[Rule], interp: SymbolicInterpretation, split_cap: int = SPLIT_CAP, deadline: Optional[float] = None
):
    """Conjunction over rules of strict cost and weak size orientation, as parameter formulas."""
    conjuncts = []
    with time_limit(deadline):
        for rule in rules:
            check_deadline()
            for label, lhs, rhs, strict in rule_parts(rule, interp):
                orientation = orient(lhs, rhs, strict, split_cap)
                if orientation.capped and orientation.formula == sympy.false:
                    raise SimplificationFailed(f"{rule} ({label}): too many max atoms to split")
                conjuncts.append(orientation.formula)
    return sympy.And(*conjuncts)


class _Escalate(Exception):
    pass


def _pipeline(trs: Trs, strata, k: int, cfg: SearchConfig, strategy: Strategy, deadline: float, result: SearchResult):
    kmap = {sort: k for sort in trs.sorts}
    constructors = constructor_templates(trs, kmap)
    solved: dict = {}
    frozen: list = []
    model: dict[str, int] = {}
    for index, stratum in enumerate(strata):
        rules = stratum_rules(trs, stratum)
        while True:
            shape = strategy.propose(index, rules, k)
            if shape is None:
                logger.info("stratum %s: shapes exhausted at k=%d", stratum, k)
                if k < cfg.k_max:
                    raise _Escalate()
                return None
            template = Template(dict(constructors.symbols), list(constructors.side))
            template.update(defined_templates(trs, stratum, kmap, shape))
            interp = SymbolicInterpretation(kmap, {**template.symbols, **solved})
            try:
                constraints = generate_constraints(rules, interp, cfg.split_cap, deadline)
            except SimplificationFailed as exc:
                logger.info("stratum %s, %s: %s", stratum, shape.value, exc)
                continue
            formula = sympy.And(constraints, *template.side, *frozen)
            answer = solve(formula, cfg.coeff_bound, tuple(template.parameters), deadline)
            result.attempts.append(StratumAttempt(index, stratum, k, shape, formula, isinstance(answer, Model)))
            if isinstance(answer, Model):
                logger.info("stratum %s solved with %s shape at k=%d", stratum, shape.value, k)
                model = answer.values
                own = {p: sympy.Integer(model[p.name]) for name in stratum for p in template.symbols[name].parameters}
                for name in stratum:
                    solved[name] = template.symbols[name].instantiate(model)
                frozen.append(constraints.xreplace(own))
                break
            logger.info("stratum %s: no %s model within bound %d at k=%d", stratum, shape.value, cfg.coeff_bound, k)
    if not strata:
        answer = solve(sympy.And(*constructors.side), cfg.coeff_bound, tuple(constructors.parameters), deadline)
        model = answer.values
    final = {name: si.instantiate(model) for name, si in constructors.symbols.items()}
    final.update(solved)
    result.model = model
    return SymbolicInterpretation(kmap, final)


def stratum_formulas(trs: Trs, shape: Shape, k: int, split_cap: int = SPLIT_CAP) -> list[tuple[list[str], sympy.logic.boolalg.Boolean]]:
    """Unsolved constraints of every stratum, all defined symbols under one template shape."""
    kmap = {sort: k for sort in trs.sorts}
    constructors = constructor_templates(trs, kmap)
    formulas = []
    strata = stratify(trs)
    defined = {name: defined_templates(trs, [name], kmap, shape) for stratum in strata for name in stratum}
    symbols = dict(constructors.symbols)
    for template in defined.values():
        symbols.update(template.symbols)
    interp = SymbolicInterpretation(kmap, symbols)
    for stratum in strata:
        side = list(constructors.side)
        for name in stratum:
            side.extend(defined[name].side)
        constraints = generate_constraints(stratum_rules(trs, stratum), interp, split_cap)
        formulas.append((stratum, sympy.And(constraints, *side)))
    return formulas


def search(trs: Trs, cfg: Optional[SearchConfig] = None) -> SearchResult:
    """YES with a verified interpretation, or MAYBE."""
    cfg = cfg or SearchConfig()
    strata = stratify(trs)
    strategy = Strategy(cfg.strategy, cfg.seed)
    deadline = time.monotonic() + cfg.time_budget
    result = SearchResult("MAYBE", strata=strata)
    logger.info("search: %d strata %s, strategy %s", len(strata), strata, strategy.kind.value)
    k = 1
    try:
        while True:
            result.k = k
            try:
                with time_limit(deadline):
                    interp = _pipeline(trs, strata, k, cfg, strategy, deadline, result)
            except _Escalate:
                k += 1
                logger.info("raising k to %d", k)
                continue
            break
    except SearchTimeout:
        logger.warning("search timed out after %.1fs", cfg.time_budget)
        result.timed_out = True
        return result
    if interp is None:
        return result
    verification = check(trs, interp, cfg.split_cap)
    result.verification = verification
    if verification.verdict is not Verdict.COMPATIBLE:
        logger.warning("found interpretation did not verify: %s", verification.summary)
        return result
    result.answer = "YES"
    result.interpretation = interp
    return result
