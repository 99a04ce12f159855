"""Innermost and full rewriting, derivation heights and the runtime complexity oracle."""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from tuplecert.config import DEFAULT_BUDGET
from tuplecert.terms import (
    App,
    Position,
    Term,
    TermEnumerator,
    Trs,
    Var,
    apply,
    apply_subst,
    replace_at,
)

logger = logging.getLogger(__name__)


class StepKind(str, Enum):
    INNERMOST = "innermost"
    FULL = "full"


@dataclass(frozen=True)
class Step:
    position: Position
    rule: int
    term: Term


@dataclass(frozen=True)
class DhResult:
    """Derivation height, or divergence when `height` is None.

    `witness` is a longest trace when the height is known, and the offending path
    (ending in the repeated term or at the budget) on divergence.
    """

    height: Optional[int]
    witness: tuple[Term, ...]
    budget: int

    @property
    def diverged(self) -> bool:
        return self.height is None


def match(pattern: Term, term: Term, bindings: dict[str, Term]) -> bool:
    """Syntactic first-order matching; extends `bindings` in place."""
    if isinstance(pattern, Var):
        bound = bindings.get(pattern.name)
        if bound is None:
            bindings[pattern.name] = term
            return True
        return bound == term
    if not isinstance(term, App) or term.symbol.name != pattern.symbol.name:
        return False
    if len(term.args) != len(pattern.args):
        return False
    return all(match(p, t, bindings) for p, t in zip(pattern.args, term.args))


class RewriteEngine:
    """One-step reducts, normal forms and derivation heights for a fixed TRS.

    Results are memoized per engine; terms are immutable so the caches stay valid.
    Finite rule sets make the relation finitely branching, so the max over
    successors in a derivation height is always well defined.
    """

    def __init__(self, trs: Trs, kind: StepKind = StepKind.INNERMOST, budget: int = DEFAULT_BUDGET):
        if budget <= 0:
            raise ValueError("budget must be positive")
        self.trs = trs
        self.kind = StepKind(kind)
        self.budget = budget
        self._normal: dict[Term, bool] = {}
        self._successors: dict[Term, list[Term]] = {}
        self._heights: dict[Term, int] = {}
        self._next: dict[Term, Optional[Term]] = {}

    # Redexes
    def root_redexes(self, term: App) -> list[tuple[int, int, Term]]:
        """(rule index, matched prefix length, reduct) for every rule matching at the root."""
        found = []
        for index, rule in self.trs.rules_by_head.get(term.symbol.name, []):
            prefix = len(rule.lhs.args)
            if prefix > len(term.args):
                continue
            bindings: dict[str, Term] = {}
            if all(match(p, t, bindings) for p, t in zip(rule.lhs.args, term.args[:prefix])):
                reduct = apply_subst(rule.rhs, bindings)
                if prefix < len(term.args):
                    reduct = apply(reduct, *term.args[prefix:])
                found.append((index, prefix, reduct))
        return found

    def _prefix_reducible(self, term: App, prefix: int) -> bool:
        head = App(term.symbol, term.args[:prefix])
        return any(p == prefix for _, p, _ in self.root_redexes(head))

    def _innermost_ok(self, term: App, prefix: int) -> bool:
        # every proper subterm of the redex, partial applications included, is normal
        if not all(self.is_normal_form(arg) for arg in term.args[:prefix]):
            return False
        return not any(self._prefix_reducible(term, j) for j in range(prefix))

    def is_normal_form(self, term: Term) -> bool:
        if isinstance(term, Var):
            return True
        cached = self._normal.get(term)
        if cached is None:
            cached = not self.root_redexes(term) and all(self.is_normal_form(arg) for arg in term.args)
            self._normal[term] = cached
        return cached

    def steps(self, term: Term) -> list[Step]:
        """All one-step reducts, paired with redex position and rule, in pre-order."""
        found: list[tuple[Position, int, Term]] = []
        self._collect(term, (), found)
        seen = set()
        steps = []
        for position, rule, reduct in found:
            if (position, rule) in seen:
                continue
            seen.add((position, rule))
            steps.append(Step(position, rule, replace_at(term, position, reduct)))
        return steps

    def _collect(self, term: Term, position: Position, found: list) -> None:
        if isinstance(term, Var) or self.is_normal_form(term):
            return
        for rule, prefix, reduct in self.root_redexes(term):
            if self.kind is StepKind.FULL or self._innermost_ok(term, prefix):
                found.append((position, rule, reduct))
        for index, arg in enumerate(term.args):
            self._collect(arg, position + (index,), found)

    def successors(self, term: Term) -> list[Term]:
        cached = self._successors.get(term)
        if cached is None:
            cached = list(dict.fromkeys(step.term for step in self.steps(term)))
            self._successors[term] = cached
        return cached

    # Derivation heights
    def derivation_height(self, term: Term) -> DhResult:
        if term not in self._heights:
            diverged = self._explore(term)
            if diverged is not None:
                return DhResult(None, diverged, self.budget)
        return DhResult(self._heights[term], self._trace(term), self.budget)

    def _explore(self, start: Term) -> Optional[tuple[Term, ...]]:
        """Iterative depth-first search filling the height memo.

        Returns the offending path when a cycle on the current path is found or the
        path reaches the budget.
        """
        path = [start]
        on_path = {start}
        stack = [iter(self.successors(start))]
        best: dict[Term, int] = {start: 0}
        while stack:
            node = path[-1]
            child = next(stack[-1], None)
            if child is None:
                stack.pop()
                path.pop()
                on_path.discard(node)
                self._heights[node] = best.pop(node)
                self._next.setdefault(node, None)
                if path:
                    self._offer(path[-1], node, best)
                continue
            if child in self._heights:
                self._offer(node, child, best)
                continue
            if child in on_path:
                logger.debug("cycle through %s", child)
                return tuple(path) + (child,)
            if len(path) > self.budget:
                logger.debug("budget %d reached from %s", self.budget, start)
                return tuple(path)
            path.append(child)
            on_path.add(child)
            best[child] = 0
            stack.append(iter(self.successors(child)))
        return None

    def _offer(self, parent: Term, child: Term, best: dict[Term, int]) -> None:
        height = self._heights[child] + 1
        if height > best[parent]:
            best[parent] = height
            self._next[parent] = child

    def _trace(self, term: Term) -> tuple[Term, ...]:
        trace = [term]
        while self._next.get(trace[-1]) is not None:
            trace.append(self._next[trace[-1]])
        return tuple(trace)

    def normal_form(self, term: Term) -> Term:
        """Follow the first reduct until a normal form (bounded by the budget)."""
        for _ in range(self.budget):
            successors = self.successors(term)
            if not successors:
                return term
            term = successors[0]
        raise RuntimeError(f"no normal form within {self.budget} steps")


def successors(term: Term, kind: StepKind, trs: Trs) -> list[Step]:
    return RewriteEngine(trs, kind).steps(term)


def is_normal_form(term: Term, trs: Trs) -> bool:
    return RewriteEngine(trs).is_normal_form(term)


def derivation_height(term: Term, kind: StepKind, trs: Trs, budget: int = DEFAULT_BUDGET) -> DhResult:
    return RewriteEngine(trs, kind, budget).derivation_height(term)


@dataclass
class IrcTable:
    kind: StepKind
    start: str
    # rows[n - 1] is irc(n); None once some start term of size <= n diverged
    rows: list[Optional[int]] = field(default_factory=list)
    witnesses: list[Optional[Term]] = field(default_factory=list)
    diverging_term: Optional[Term] = None
    divergence: Optional[DhResult] = None

    def irc(self, n: int) -> Optional[int]:
        return self.rows[n - 1]

    @property
    def diverged(self) -> bool:
        return self.diverging_term is not None

    def to_tsv(self) -> str:
        lines = ["n\tirc(n)"]
        for n, value in enumerate(self.rows, start=1):
            lines.append(f"{n}\t{'diverged' if value is None else value}")
        if self.diverged:
            lines.append(f"# diverged: {self.diverging_term}")
        return "\n".join(lines) + "\n"


def irc_oracle(
    trs: Trs,
    n_max: int,
    budget: int = DEFAULT_BUDGET,
    kind: StepKind = StepKind.INNERMOST,
    start: str = "basic",
) -> IrcTable:
    """Brute-force runtime complexity: max derivation height over start terms of size <= n.

    Start terms are the basic terms, or every well-sorted ground term with
    start="ground". Terms are visited smallest first; once a start term diverges all
    larger sizes are reported as diverged.
    """
    engine = RewriteEngine(trs, kind, budget)
    enumerator = TermEnumerator(trs)
    table = IrcTable(StepKind(kind), start)
    best, best_term = 0, None
    for n in range(1, n_max + 1):
        if not table.diverged:
            terms = enumerator.basic_terms(n) if start == "basic" else enumerator.all_ground_terms(n)
            for term in terms:
                result = engine.derivation_height(term)
                if result.diverged:
                    logger.info("start term %s diverges", term)
                    table.diverging_term, table.divergence = term, result
                    break
                if result.height > best:
                    best, best_term = result.height, term
        table.rows.append(None if table.diverged else best)
        table.witnesses.append(None if table.diverged else best_term)
    return table
