import logging
import os

import click

from src import settings
from src.algebra.families import FAMILIES, FamilySpec
from src.algebra.table_io import export_table
from src.services.verification.verification_run import COMMANDS, RunOptions, VerificationRun, default_field_mode
from src.utils.exceptions import FamilyError, FieldError, TableConstructionError, TableFormatError
from src.utils.json_utils import dump_report
from src.utils.report_tables import render_summary
from src.utils.singletons.table_registry import TableRegistry

EXIT_USAGE = 2

logger = logging.getLogger(__name__)


_RUN_OPTIONS = [
    click.option("--family", type=click.Choice(FAMILIES), default=None, help="Cartan-type family."),
    click.option("--n", "n", type=int, default=None, help="Number of odd generators."),
    click.option(
        "--table",
        "table_path",
        type=click.Path(dir_okay=False),
        default=None,
        help="Load a structure-constant file instead of constructing the family.",
    ),
    click.option(
        "--field",
        "field_mode",
        type=click.Choice(["exact", "modp"]),
        default=None,
        help="Defaults to modp for W(n), n ≥ 4, and to exact otherwise.",
    ),
    click.option("--prime", type=int, default=settings.PRIME, show_default=True),
    click.option("--parity", type=click.Choice(["even", "odd", "both"]), default="both"),
    click.option("--seed", type=int, default=settings.SEED, show_default=True),
    click.option(
        "--out",
        "out_path",
        type=click.Path(dir_okay=False),
        default=None,
        help="Report path; defaults to <out dir>/reports/<family>_<n>_<command>.json.",
    ),
    click.option(
        "--block-limit",
        type=int,
        default=settings.BLOCK_LIMIT,
        help="Rows streamed per block before it is aborted; 0 means no limit.",
    ),
    click.option("--workers", type=int, default=settings.WORKERS),
    click.option("--timings/--no-timings", default=False),
    click.option("--retain/--no-retain", default=True, help="Keep solution vectors of retained blocks."),
    click.option("--blocks/--no-blocks", "show_blocks", default=False, help="Print the nonzero block rows."),
    click.option("--progress/--no-progress", default=settings.PROGRESS),
]


def run_options(command):
    """
    Flags shared by every verification subcommand.
    """
    for option in reversed(_RUN_OPTIONS):
        command = option(command)
    return command


def _resolve_table(family: str | None, n: int | None, table_path: str | None):
    registry = TableRegistry()
    if table_path:
        table = registry.load(table_path)
        return table, registry.lprime_for(table)
    if family is None or n is None:
        raise click.UsageError("Either --family and --n, or --table, is required")
    spec = FamilySpec(family, n)
    table = registry.get_table(spec)
    return table, registry.lprime_for(table)


def _execute(ctx: click.Context, command: str, commands: tuple[str, ...], **kwargs) -> None:
    configure = ctx.obj.get("configure_logging", True) if ctx.obj else True
    if configure:
        settings.configure_logging(settings.OUT_DIR)

    try:
        table, lprime = _resolve_table(kwargs["family"], kwargs["n"], kwargs["table_path"])
        options = RunOptions(
            field=kwargs["field_mode"] or default_field_mode(table.family, table.n),
            prime=kwargs["prime"],
            parity=kwargs["parity"],
            seed=kwargs["seed"],
            block_limit=kwargs["block_limit"],
            workers=kwargs["workers"],
            retain=kwargs["retain"],
            timings=kwargs["timings"],
            progress=kwargs["progress"],
        )
        run = VerificationRun(table, commands, options, lprime, command)
        report = run.start()
    except (FamilyError, FieldError, TableFormatError, TableConstructionError) as error:
        logger.error("Error at %s: %s", command, str(error))
        click.echo(f"Error: {error}", err=True)
        ctx.exit(EXIT_USAGE)

    out_path = kwargs["out_path"] or os.path.join(
        settings.OUT_DIR, "reports", f"{report.family}_{report.n}_{command}.json"
    )
    dump_report(report, out_path)
    click.echo(render_summary(report, blocks=kwargs["show_blocks"]))
    click.echo(f"Report: {out_path}")
    ctx.exit(report.exit_code)


@click.group()
@click.pass_context
def cli(ctx: click.Context) -> None:
    """
    Verify derivations and super-biderivations of Cartan-type Lie superalgebras.
    """
    ctx.ensure_object(dict)


@cli.command()
@run_options
@click.pass_context
def info(ctx, **kwargs):
    """Dimensions, gradings and the root system."""
    _execute(ctx, "info", ("info",), **kwargs)


@cli.command()
@run_options
@click.pass_context
def jacobi(ctx, **kwargs):
    """Exhaustive super-Jacobi and table invariants."""
    _execute(ctx, "jacobi", ("jacobi",), **kwargs)


@cli.command()
@run_options
@click.pass_context
def der(ctx, **kwargs):
    """Superderivations compared with ad L′."""
    _execute(ctx, "der", ("der",), **kwargs)


@cli.command()
@run_options
@click.pass_context
def bder(ctx, **kwargs):
    """Super-biderivations, blocked by weight and degree."""
    _execute(ctx, "bder", ("bder",), **kwargs)


@cli.command()
@run_options
@click.pass_context
def lemmas(ctx, **kwargs):
    """Structural checks on the grading, L′ and L₀."""
    _execute(ctx, "lemmas", ("lemmas",), **kwargs)


@cli.command(name="all")
@run_options
@click.pass_context
def run_all(ctx, **kwargs):
    """Every check above; the verdict is their conjunction."""
    _execute(ctx, "all", COMMANDS, **kwargs)


@cli.command()
@click.option("--family", type=click.Choice(FAMILIES), required=True)
@click.option("--n", "n", type=int, required=True)
@click.option("--lprime/--no-lprime", default=False, help="Export L′ instead of L.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def export(ctx, family, n, lprime, out_path):
    """Write the structure constants of a family to a text file."""
    try:
        spec = FamilySpec(family, n, lprime)
        table = TableRegistry().get_table(spec)
    except FamilyError as error:
        click.echo(f"Error: {error}", err=True)
        ctx.exit(EXIT_USAGE)

    if out_path:
        path = export_table(table, out_path)
    else:
        path = TableRegistry().export(table, settings.OUT_DIR, f"{spec.label}.tbl")
    click.echo(f"{spec.label}: dim {table.dim}, written to {path}")
