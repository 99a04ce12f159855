"""Compatibility of a TRS with a symbolic interpretation: rule by rule orientation."""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from tuplecert.config import GRID_MAX, SPLIT_CAP
from tuplecert.errors import ShapeMismatch
from tuplecert.interpretation import SymbolicInterpretation, interpret_symbolic
from tuplecert.maxpoly import Comparison, MaxPoly, Mode, Outcome, atom_name, compare
from tuplecert.terms import Rule, Trs, variables

logger = logging.getLogger(__name__)


class RuleStatus(str, Enum):
    ORIENTED = "oriented"
    COUNTER_EXAMPLE = "counterexample"
    UNKNOWN = "unknown"


class Verdict(str, Enum):
    COMPATIBLE = "Compatible"
    INCOMPATIBLE = "Incompatible"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Part:
    label: str
    lhs: MaxPoly
    rhs: MaxPoly
    strict: bool
    comparison: Comparison

    def __str__(self) -> str:
        relation = ">" if self.strict else "⊒"
        return f"{self.label}: {self.lhs} {relation} {self.rhs}"


@dataclass(frozen=True)
class RuleResult:
    index: int
    rule: Rule
    status: RuleStatus
    parts: tuple[Part, ...]
    witness: Optional[dict[str, int]] = None


@dataclass
class CheckResult:
    verdict: Verdict
    rules: list[RuleResult] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def oriented(self) -> int:
        return sum(1 for r in self.rules if r.status is RuleStatus.ORIENTED)

    @property
    def summary(self) -> str:
        return f"{self.verdict.value} ({self.oriented}/{len(self.rules)} rules)"


def rule_parts(rule: Rule, interp: SymbolicInterpretation) -> list[tuple[str, MaxPoly, MaxPoly, bool]]:
    """Components of the product order: strict numeric cost, weak cost summands and sizes."""
    lhs = interpret_symbolic(rule.lhs, interp)
    rhs = interpret_symbolic(rule.rhs, interp)
    if len(lhs.size) != len(rhs.size) or len(lhs.pending) != len(rhs.pending):
        raise ShapeMismatch(f"sides of {rule} have different shapes")
    parts = [("cost", lhs.cost, rhs.cost, True)]
    for i, (l, r) in enumerate(zip(lhs.pending, rhs.pending), start=1):
        parts.append((f"cost[{i}]", l, r, False))
    for c, (l, r) in enumerate(zip(lhs.size, rhs.size), start=1):
        parts.append(("size" if len(lhs.size) == 1 else f"size.{c}", l, r, False))
    return parts


def check_rule(
    index: int, rule: Rule, interp: SymbolicInterpretation, split_cap: int = SPLIT_CAP, grid_max: int = GRID_MAX
) -> RuleResult:
    parts = []
    for label, lhs, rhs, strict in rule_parts(rule, interp):
        mode = Mode.STRICT_COST if strict else Mode.WEAK_SIZE
        parts.append(Part(label, lhs, rhs, strict, compare(lhs, rhs, mode, split_cap, grid_max)))
    for part in parts:
        if part.comparison.outcome is Outcome.DISPROVED:
            witness = {
                atom_name(var.name, c, interp.k(var.sort)): 0
                for var in variables(rule.lhs)
                for c in range(1, interp.k(var.sort) + 1)
            }
            witness.update(part.comparison.witness)
            return RuleResult(index, rule, RuleStatus.COUNTER_EXAMPLE, tuple(parts), dict(sorted(witness.items())))
    if all(part.comparison.proved for part in parts):
        return RuleResult(index, rule, RuleStatus.ORIENTED, tuple(parts))
    return RuleResult(index, rule, RuleStatus.UNKNOWN, tuple(parts))


def check_shapes(trs: Trs, interp: SymbolicInterpretation) -> None:
    interp.require_total(trs)
    for name, symbol in trs.signature.items():
        si = interp.symbols[name]
        if len(si.costs) != symbol.arity + 1:
            raise ShapeMismatch(f"{name} needs {symbol.arity + 1} cost summands, has {len(si.costs)}")
        k = interp.k(symbol.ty.result)
        if len(si.size) != k:
            raise ShapeMismatch(f"{name} returns {symbol.ty.result} with {k} size components, has {len(si.size)}")


def lint(trs: Trs, interp: SymbolicInterpretation) -> list[str]:
    warnings = []
    for name in sorted(trs.constructors):
        si = interp.symbols.get(name)
        if si is not None and not si.is_zero_cost:
            warnings.append(f"constructor {name} has non-zero cost")
    return warnings


def check(trs: Trs, interp: SymbolicInterpretation, split_cap: int = SPLIT_CAP, grid_max: int = GRID_MAX) -> CheckResult:
    """Orient every rule by the product order; Incompatible only with a concrete witness."""
    check_shapes(trs, interp)
    result = CheckResult(Verdict.COMPATIBLE, warnings=lint(trs, interp))
    for warning in result.warnings:
        logger.warning(warning)
    for index, rule in enumerate(trs.rules, start=1):
        rule_result = check_rule(index, rule, interp, split_cap, grid_max)
        logger.debug("rule %d %s: %s", index, rule, rule_result.status.value)
        result.rules.append(rule_result)
    statuses = {r.status for r in result.rules}
    if RuleStatus.COUNTER_EXAMPLE in statuses:
        result.verdict = Verdict.INCOMPATIBLE
    elif RuleStatus.UNKNOWN in statuses:
        result.verdict = Verdict.UNKNOWN
    logger.info("check: %s", result.summary)
    return result


def format_env(env: dict[str, int]) -> str:
    if not env:
        return "{}"
    return "{" + ", ".join(f"{name} = {value}" for name, value in env.items()) + "}"


def explain(result: CheckResult) -> str:
    lines = []
    for warning in result.warnings:
        lines.append(f"warning: {warning}")
    for r in result.rules:
        lines.append(f"[{r.index}] {r.rule}: {r.status.value}")
        for part in r.parts:
            outcome = part.comparison.outcome
            suffix = "" if outcome is Outcome.PROVED else f"  ({outcome.value})"
            lines.append(f"    {part}{suffix}")
            for note in part.comparison.trace:
                lines.append(f"      {note}")
        if r.witness is not None:
            lines.append(f"    witness: {format_env(r.witness)}")
    lines.append(result.summary)
    return "\n".join(lines) + "\n"
