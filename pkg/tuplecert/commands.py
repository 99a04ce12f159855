"""The analyses behind every command, shared by the CLI and the HTTP routes.

Each `run_*` takes file contents plus their digests and returns a `RunReport`
whose `report` is the plain-text output. Input errors propagate to the caller.
"""
import logging
import time
from typing import Mapping, Optional

from tuplecert.bounds import bound_function, classify_interpretation, format_bounds, irc_bound
from tuplecert.compat import RuleStatus, Verdict, check, explain, format_env
from tuplecert.constants import EXIT_INCOMPATIBLE, EXIT_OK, EXIT_UNKNOWN
from tuplecert.errors import SimplificationFailed
from tuplecert.interpretation import format_interpretation, parse_interpretation
from tuplecert.parser import parse_trs
from tuplecert.rewriting import StepKind, irc_oracle
from tuplecert.schemas import RunReport
from tuplecert.search import SearchConfig, search, stratum_formulas
from tuplecert.shapes import Shape
from tuplecert.solver import check_model, export_smtlib, parameters_of, parse_model

logger = logging.getLogger(__name__)

VERDICT_EXIT = {
    Verdict.COMPATIBLE: EXIT_OK,
    Verdict.INCOMPATIBLE: EXIT_INCOMPATIBLE,
    Verdict.UNKNOWN: EXIT_UNKNOWN,
}


class _Timer:
    def __init__(self, command: str):
        self.command = command
        self.start = time.perf_counter()
        logger.info("%s: started", command)

    def finish(self, report: RunReport) -> RunReport:
        report.elapsed_ms = int((time.perf_counter() - self.start) * 1000)
        logger.info("%s: %s (exit %d, %d ms)", self.command, report.verdict, report.exit_code, report.elapsed_ms)
        return report


def run_check(trs_text: str, int_text: str, inputs: Mapping[str, str]) -> RunReport:
    timer = _Timer("check")
    trs = parse_trs(trs_text)
    interp = parse_interpretation(int_text, trs)
    result = check(trs, interp)
    rules = []
    for r in result.rules:
        entry = {"index": r.index, "rule": str(r.rule), "status": r.status.value}
        if r.status is RuleStatus.COUNTER_EXAMPLE:
            entry["witness"] = r.witness
        rules.append(entry)
    details = {"oriented": result.oriented, "total": len(result.rules), "rules": rules, "warnings": result.warnings}
    report = RunReport(
        command="check",
        inputs=dict(inputs),
        verdict=result.verdict.value,
        details=details,
        report=explain(result),
        exit_code=VERDICT_EXIT[result.verdict],
    )
    return timer.finish(report)


def run_search(trs_text: str, cfg: SearchConfig, inputs: Mapping[str, str], with_smt: bool = False) -> RunReport:
    timer = _Timer("search")
    trs = parse_trs(trs_text)
    result = search(trs, cfg)
    lines = ["strata: " + " ".join("{" + ", ".join(s) + "}" for s in result.strata)]
    for attempt in result.attempts:
        state = "solved" if attempt.solved else "no model"
        lines.append(f"stratum {attempt.index + 1}, {attempt.shape.value} at k={attempt.k}: {state}")
    details = {"strata": result.strata, "k": result.k, "timed_out": result.timed_out}
    if result.timed_out:
        lines.append(f"time budget of {cfg.time_budget:g}s exhausted")
    if result.verification is not None and not result.yes:
        lines.append(f"verification failed: {result.verification.summary}")
    lines.append(result.answer)
    if result.yes:
        text = format_interpretation(result.interpretation, trs)
        details["model"] = result.model
        details["interpretation"] = text
        lines.append(f"model: {format_env(dict(sorted(result.model.items())))}")
        lines.append(text.rstrip("\n"))
    if with_smt:
        details["smt"] = {
            f"stratum_{attempt.index + 1}.smt2": export_smtlib(
                attempt.constraints, f"stratum {attempt.index + 1}: {', '.join(attempt.symbols)} ({attempt.shape.value}, k={attempt.k})"
            )
            for attempt in result.final_attempts()
        }
    report = RunReport(
        command="search",
        inputs=dict(inputs),
        verdict=result.answer,
        details=details,
        report="\n".join(lines) + "\n",
        seed=cfg.seed,
        exit_code=EXIT_OK if result.yes else EXIT_UNKNOWN,
    )
    return timer.finish(report)


def run_bound(trs_text: str, int_text: str, inputs: Mapping[str, str], max_size: int = 0) -> RunReport:
    """Classify the interpretation; with `max_size` also tabulate the numeric irc bound."""
    timer = _Timer("bound")
    trs = parse_trs(trs_text)
    interp = parse_interpretation(int_text, trs)
    result = check(trs, interp)
    if result.verdict is not Verdict.COMPATIBLE:
        report = RunReport(
            command="bound",
            inputs=dict(inputs),
            verdict=f"not derived ({result.summary})",
            report=f"irc: not derived, interpretation is {result.summary}\n",
            exit_code=VERDICT_EXIT[result.verdict],
        )
        return timer.finish(report)
    classes = classify_interpretation(interp)
    verdict = irc_bound(trs, interp, result.verdict)
    text = format_bounds(trs, classes, verdict)
    details = {
        "symbols": {name: {"cost": str(c.cost), "size": str(c.size)} for name, c in classes.items()},
        "irc": str(verdict),
        "upper_estimate": verdict.upper_estimate,
    }
    if max_size and verdict.degree is not None:
        bound = bound_function(trs, interp)
        values = [bound(n) for n in range(1, max_size + 1)]
        details["bound"] = values
        text += "n\tbound(n)\n" + "".join(f"{n}\t{v}\n" for n, v in enumerate(values, start=1))
    report = RunReport(
        command="bound",
        inputs=dict(inputs),
        verdict=str(verdict),
        details=details,
        report=text,
        exit_code=EXIT_UNKNOWN if verdict.degree is None else EXIT_OK,
    )
    return timer.finish(report)


def default_start(relation: str) -> str:
    """Basic start terms for innermost rewriting, every ground term for full rewriting."""
    return "basic" if relation == StepKind.INNERMOST.value else "ground"


def run_oracle(
    trs_text: str, relation: str, max_size: int, budget: int, start: Optional[str], inputs: Mapping[str, str]
) -> RunReport:
    timer = _Timer("oracle")
    trs = parse_trs(trs_text)
    start = start or default_start(relation)
    table = irc_oracle(trs, max_size, budget, StepKind(relation), start)
    text = table.to_tsv()
    details = {"relation": relation, "start": start, "irc": table.rows}
    if table.diverged:
        trace = table.divergence.witness
        details["diverging_term"] = str(table.diverging_term)
        details["trace"] = [str(t) for t in trace]
        text += "# path: " + " -> ".join(str(t) for t in trace) + "\n"
    report = RunReport(
        command="oracle",
        inputs=dict(inputs),
        verdict="diverged" if table.diverged else "terminating",
        details=details,
        report=text,
        exit_code=EXIT_OK,
    )
    return timer.finish(report)


def run_export_smt(
    trs_text: str, shape: Shape, k: int, inputs: Mapping[str, str], model_text: Optional[str] = None
) -> RunReport:
    """SMT-LIB2 constraints of every stratum; with a model, check it against each of them."""
    timer = _Timer("export-smt")
    trs = parse_trs(trs_text)
    try:
        formulas = stratum_formulas(trs, shape, k)
    except SimplificationFailed as exc:
        report = RunReport(
            command="export-smt", inputs=dict(inputs), verdict="not exported", report=f"{exc}\n", exit_code=EXIT_UNKNOWN
        )
        return timer.finish(report)
    files = {}
    lines = []
    for index, (stratum, formula) in enumerate(formulas, start=1):
        name = f"stratum_{index}.smt2"
        files[name] = export_smtlib(formula, f"stratum {index}: {', '.join(stratum)} ({shape.value}, k={k})")
        lines.append(f"{name}: {', '.join(stratum)}, {len(parameters_of(formula))} parameters")
    details = {"files": files}
    verdict, exit_code = "exported", EXIT_OK
    if model_text is not None:
        model = parse_model(model_text)
        failed = []
        for index, (stratum, formula) in enumerate(formulas, start=1):
            missing = sorted(p.name for p in parameters_of(formula) if p.name not in model)
            if missing:
                lines.append(f"stratum {index}: model has no value for {', '.join(missing)}")
                failed.append(index)
            elif check_model(formula, model):
                lines.append(f"stratum {index}: model satisfies the constraints")
            else:
                lines.append(f"stratum {index}: model violates the constraints")
                failed.append(index)
        details["failed"] = failed
        verdict = "model rejected" if failed else "model accepted"
        exit_code = EXIT_INCOMPATIBLE if failed else EXIT_OK
    report = RunReport(
        command="export-smt",
        inputs=dict(inputs),
        verdict=verdict,
        details=details,
        report="\n".join(lines) + "\n",
        exit_code=exit_code,
    )
    return timer.finish(report)
