"""Command line: tuplecert check | search | bound | oracle | export-smt | serve."""
import logging
import logging.config
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

import click
import uvicorn

from tuplecert.config import DEFAULT_BUDGET, DEFAULT_COEFF_BOUND, DEFAULT_KMAX, DEFAULT_TIME_BUDGET, LOG_CONFIG
from tuplecert.commands import run_bound, run_check, run_export_smt, run_oracle, run_search
from tuplecert.constants import EXIT_PARSE, EXIT_UNKNOWN, EXIT_USAGE, RELATIONS, START_TERMS, STRATEGIES
from tuplecert.database import Base, SessionLocal, engine
from tuplecert.errors import InputError, TupleCertError
from tuplecert.models import Run
from tuplecert.schemas import ENVELOPE_FIELDS, RunReport
from tuplecert.search import SearchConfig, StrategyKind
from tuplecert.shapes import Shape
from tuplecert.utils import read_input

logger = logging.getLogger(__name__)

INPUT = click.Path(exists=True, dir_okay=False, path_type=Path)


def configure_logging(verbose: bool) -> None:
    if os.path.exists(LOG_CONFIG):
        logging.config.fileConfig(LOG_CONFIG, disable_existing_loggers=False)
    else:
        logging.basicConfig(format="%(levelname)-5.5s [%(name)s] %(message)s", stream=sys.stderr)
    if verbose:
        logging.getLogger("tuplecert").setLevel(logging.DEBUG)


def load(*paths: Path) -> tuple[list[str], dict[str, str]]:
    texts, inputs = [], {}
    for path in paths:
        text, sha = read_input(path)
        texts.append(text)
        inputs[path.name] = sha
    return texts, inputs


def record(report: RunReport) -> None:
    Base.metadata.create_all(bind=engine)
    with SessionLocal() as db:
        run = Run.from_report(report)
        db.add(run)
        db.commit()
        logger.info("recorded run %d", run.id)


def emit(ctx: click.Context, report: RunReport) -> int:
    if ctx.obj["json"]:
        click.echo(report.model_dump_json(include=ENVELOPE_FIELDS, indent=2))
    else:
        click.echo(report.report, nl=False)
    if ctx.obj["record"]:
        record(report)
    return report.exit_code


@click.group()
@click.option("--json", "as_json", is_flag=True, help="Print the JSON envelope instead of the text report.")
@click.option("--record", is_flag=True, help="Store the run in the run ledger.")
@click.option("--verbose", "-v", is_flag=True, help="Debug logging on stderr.")
@click.pass_context
def cli(ctx: click.Context, as_json: bool, record: bool, verbose: bool):
    """Termination and runtime complexity of rewrite systems by cost-size tuple interpretations."""
    configure_logging(verbose)
    ctx.obj = {"json": as_json, "record": record}


@cli.command()
@click.argument("trs_file", type=INPUT)
@click.argument("int_file", type=INPUT)
@click.pass_context
def check(ctx, trs_file: Path, int_file: Path):
    """Check a TRS against an interpretation file."""
    (trs, interp), inputs = load(trs_file, int_file)
    return emit(ctx, run_check(trs, interp, inputs))


@cli.command()
@click.argument("trs_file", type=INPUT)
@click.option("--strategy", type=click.Choice(STRATEGIES), default="progressive", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True, help="Seed of the blind strategy.")
@click.option("--kmax", type=click.IntRange(min=1), default=DEFAULT_KMAX, show_default=True)
@click.option("--coeff-bound", type=click.IntRange(min=1), default=DEFAULT_COEFF_BOUND, show_default=True)
@click.option("--time-budget", type=click.FloatRange(min=0, min_open=True), default=DEFAULT_TIME_BUDGET, show_default=True)
@click.option("--emit-int", type=click.Path(dir_okay=False, path_type=Path), help="Write the interpretation found here.")
@click.option("--emit-smt", type=click.Path(file_okay=False, path_type=Path), help="Write stratum_<i>.smt2 files here.")
@click.pass_context
def search(ctx, trs_file, strategy, seed, kmax, coeff_bound, time_budget, emit_int, emit_smt):
    """Search for a compatible interpretation."""
    (trs,), inputs = load(trs_file)
    cfg = SearchConfig(kmax, coeff_bound, StrategyKind(strategy), seed, time_budget)
    report = run_search(trs, cfg, inputs, with_smt=emit_smt is not None)
    if emit_int is not None and "interpretation" in report.details:
        emit_int.write_text(report.details["interpretation"], encoding="utf-8")
        logger.info("wrote %s", emit_int)
    if emit_smt is not None:
        write_files(emit_smt, report.details.pop("smt"))
    return emit(ctx, report)


@cli.command()
@click.argument("trs_file", type=INPUT)
@click.argument("int_file", type=INPUT)
@click.option("--max-size", type=click.IntRange(min=0), default=0, help="Also tabulate the numeric irc bound up to this size.")
@click.pass_context
def bound(ctx, trs_file, int_file, max_size):
    """Classify an interpretation and derive the irc complexity class."""
    (trs, interp), inputs = load(trs_file, int_file)
    return emit(ctx, run_bound(trs, interp, inputs, max_size))


@cli.command()
@click.argument("trs_file", type=INPUT)
@click.option("--relation", type=click.Choice(RELATIONS), default="innermost", show_default=True)
@click.option("--max-size", type=click.IntRange(min=1), default=6, show_default=True)
@click.option("--budget", type=click.IntRange(min=1), default=DEFAULT_BUDGET, show_default=True)
@click.option("--start", type=click.Choice(START_TERMS), help="Start terms [default: basic for innermost, ground for full].")
@click.pass_context
def oracle(ctx, trs_file, relation, max_size, budget, start):
    """Brute-force irc table by exhaustive rewriting."""
    (trs,), inputs = load(trs_file)
    return emit(ctx, run_oracle(trs, relation, max_size, budget, start, inputs))


@cli.command("export-smt")
@click.argument("trs_file", type=INPUT)
@click.option("--shape", type=click.Choice([s.value for s in Shape]), default="additive", show_default=True)
@click.option("--k", "k", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=Path("."), show_default=True)
@click.option("--model", "model_file", type=INPUT, help="Check this model against every stratum.")
@click.pass_context
def export_smt(ctx, trs_file, shape, k, out, model_file):
    """Write the constraints of every stratum as SMT-LIB2."""
    (trs,), inputs = load(trs_file)
    model = None
    if model_file is not None:
        (model,), extra = load(model_file)
        inputs.update(extra)
    report = run_export_smt(trs, Shape(shape), k, inputs, model)
    write_files(out, report.details.pop("files", {}))
    return emit(ctx, report)


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    uvicorn.run("tuplecert.main:app", host=host, port=port)
    return 0


def write_files(directory: Path, files: dict[str, str]) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (directory / name).write_text(text, encoding="utf-8")
        logger.info("wrote %s", directory / name)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        code = cli.main(args=list(argv) if argv is not None else None, prog_name="tuplecert", standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except click.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_USAGE
    except InputError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_PARSE
    except TupleCertError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_UNKNOWN
    except UnicodeDecodeError as exc:
        click.echo(f"error: input is not UTF-8: {exc}", err=True)
        return EXIT_PARSE
    return code if isinstance(code, int) else 0


def run() -> None:
    sys.exit(main())
