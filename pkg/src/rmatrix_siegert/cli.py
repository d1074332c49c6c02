"""Command-line front end writing CSV tables.

Examples::

    rmatrix-siegert phaseshift bargmann:b=2,c=-1 --a 5 --n 25 --E 0.1 --E 1
    rmatrix-siegert poles bargmann:b=2,c=-1 --a 5 --n 25 --out poles.csv
    rmatrix-siegert table3 --a 5 --n 25
    rmatrix-siegert check

Exit status is 0 on success, 1 on a usage error and 2 on a numerical failure.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import os
import sys
import tempfile

import click

from .checks import run_checks
from .errors import InvalidArgumentError, NumericalError
from .potentials import parse_potential
from .tables import (
    TABLE3_ENERGIES,
    TABLE3_RADII,
    TABLE3_SIZES,
    fig1_rows,
    phaseshift_rows,
    poles_rows,
    table2_rows,
    table3_rows,
    wavefunction_rows,
)

__all__ = ["cli", "main", "format_value", "write_csv"]

EXIT_USAGE = 1
EXIT_NUMERICAL = 2
DEFAULT_ENERGIES = (0.1, 1.0, 10.0)


class NumericalFailure(click.ClickException):
    exit_code = EXIT_NUMERICAL


def format_value(value) -> str:
    """Ten significant digits for reals; empty for missing values."""
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, int)) and not isinstance(value, float):
        return str(int(value))
    x = float(value)
    if math.isnan(x):
        return "nan"
    text = "%.10g" % x
    return "0" if text == "-0" else text


def write_csv(header, rows, out: str) -> None:
    """Write a CSV file in one step so that a failure never leaves a partial file."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows([format_value(v) for v in row] for row in rows)
    if out == "-":
        sys.stdout.write(buf.getvalue())
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", suffix=".csv", dir=directory)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(buf.getvalue())
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _potential(spec: str):
    try:
        return parse_potential(spec)
    except InvalidArgumentError as exc:
        raise click.BadParameter(str(exc), param_hint="POTENTIAL") from None


def _run(builder, out, **kwargs):
    try:
        header, rows = builder(**kwargs)
    except InvalidArgumentError as exc:
        raise click.UsageError(str(exc)) from None
    except (NumericalError, ArithmeticError, FloatingPointError) as exc:
        raise NumericalFailure(f"numerical failure: {exc}") from None
    write_csv(header, rows, out)


radius_opt = click.option("--a", "a", type=float, default=5.0, show_default=True, help="Channel radius.")
size_opt = click.option("--n", "n", type=click.IntRange(min=1), default=25, show_default=True, help="Mesh size N.")
wave_opt = click.option("--l", "l", type=click.IntRange(min=0), default=0, show_default=True, help="Partial wave.")
energy_opt = click.option("--E", "energies", type=float, multiple=True, help="Energy (repeatable).")
overlap_opt = click.option(
    "--gauss-overlap", "gauss_overlap", type=click.BOOL, default=True, show_default=True,
    help="Use the identity as overlap matrix (true) or the exact overlap (false).",
)
out_opt = click.option("--out", "out", type=click.Path(dir_okay=False), default="-", help="Output CSV (default stdout).")


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def cli(verbose):
    """R-matrix and Siegert-pseudostate scattering on a Lagrange mesh."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(levelname)s: %(message)s")


@cli.command()
@click.argument("potential")
@radius_opt
@size_opt
@wave_opt
@energy_opt
@overlap_opt
@out_opt
def phaseshift(potential, a, n, l, energies, gauss_overlap, out):
    """Phase shifts from the R-matrix and the pole product."""
    _run(
        phaseshift_rows, out, potential=_potential(potential), l=l, a=a, n=n,
        energies=energies or DEFAULT_ENERGIES, gauss_overlap=gauss_overlap,
    )


@cli.command()
@click.argument("potential")
@radius_opt
@size_opt
@wave_opt
@overlap_opt
@out_opt
def poles(potential, a, n, l, gauss_overlap, out):
    """All 2N pseudostate wave numbers with residual and classification."""
    _run(poles_rows, out, potential=_potential(potential), l=l, a=a, n=n, gauss_overlap=gauss_overlap)


@cli.command()
@click.argument("potential")
@radius_opt
@size_opt
@wave_opt
@energy_opt
@overlap_opt
@out_opt
def wavefunction(potential, a, n, l, energies, gauss_overlap, out):
    """Internal wave function from the R-matrix and from the pole sum."""
    _run(
        wavefunction_rows, out, potential=_potential(potential), l=l, a=a, n=n,
        energies=energies or (1.0,), gauss_overlap=gauss_overlap,
    )


@cli.command()
@radius_opt
@size_opt
@out_opt
def table2(a, n, out):
    """Bargmann pseudostate poles next to the exact poles of the truncated potential."""
    _run(table2_rows, out, a=a, n=n)


@cli.command()
@click.option("--a", "a", type=float, default=None, help="Restrict to one channel radius.")
@click.option("--n", "n", type=click.IntRange(min=1), default=None, help="Restrict to one mesh size.")
@energy_opt
@out_opt
def table3(a, n, energies, out):
    """Bargmann phase shifts on the energy x radius x size grid."""
    _run(
        table3_rows, out,
        energies=energies or TABLE3_ENERGIES,
        radii=(a,) if a is not None else TABLE3_RADII,
        sizes=(n,) if n is not None else TABLE3_SIZES,
    )


@cli.command()
@radius_opt
@size_opt
@out_opt
def fig1(a, n, out):
    """Scatter data of the pole sets: exact, exact overlap and Gauss overlap."""
    _run(fig1_rows, out, a=a, n=n)


@cli.command()
@out_opt
def check(out):
    """Run the invariant suite and report pass/fail counts."""
    results = run_checks()
    write_csv(
        ["check", "passed", "value", "tolerance"],
        [[r.name, "pass" if r.passed else "FAIL", r.value, r.tolerance] for r in results],
        out,
    )
    failed = sum(not r.passed for r in results)
    click.echo(f"{len(results) - failed} passed, {failed} failed", err=True)
    if failed:
        sys.exit(EXIT_NUMERICAL)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="rmatrix-siegert", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except NumericalFailure as exc:
        exc.show()
        return EXIT_NUMERICAL
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    return 0


if __name__ == "__main__":
    sys.exit(main())
