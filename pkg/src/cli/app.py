"""
Command line surface: solve, verify, normalize, bins-check,
dispatch-report, brute and random.

Exit codes: 0 success or verified, 2 Unsolved or a failed check,
1 usage or input error.
"""

import json
import logging
import sys
from pathlib import Path
from typing import Optional

import click
from tabulate import tabulate

from src.ramified_zeros.common.constants import DEFAULT_BUDGET, DEFAULT_SEED, TOOL_NAME, TOOL_VERSION
from src.ramified_zeros.common.custom_typing import valuation_to_json
from src.ramified_zeros.common.errors import RamifiedZeroError
from src.ramified_zeros.form.form import FormHelper, LevelProfile
from src.ramified_zeros.oracle.oracle import brute_force_zero, dispatch_coverage, random_form
from src.ramified_zeros.pairing.bins import exhaustive_check, random_check
from src.ramified_zeros.ring.field import make_field
from src.ramified_zeros.solver.config import SolverConfig
from src.ramified_zeros.solver.pipeline import solve as solve_form

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_UNSOLVED = 2

logger = logging.getLogger(__name__)


def _configure_logging(verbose: bool):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise click.UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except UnicodeDecodeError as exc:
        raise click.UsageError(f"cannot read {path}: not valid UTF-8 ({exc.reason})") from exc


def _write(path: str, payload: dict):
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def _header(seed: Optional[int] = None, field=None) -> dict:
    header = {"tool": TOOL_NAME, "version": TOOL_VERSION}
    if field is not None:
        header["field"] = field.to_dict()
    if seed is not None:
        header["seed"] = seed
    return header


def _emit(as_json: bool, payload: dict, rows: list):
    if as_json:
        click.echo(json.dumps(payload, indent=2))
    else:
        click.echo(tabulate(rows, tablefmt="plain"))


@click.group()
@click.option("--verbose", is_flag=True, help="Log solver decisions at DEBUG level.")
@click.version_option(TOOL_VERSION, prog_name=TOOL_NAME)
def cli(verbose: bool):
    """Find and certify nontrivial zeros of additive forms over ramified 2-adic fields."""
    _configure_logging(verbose)


@cli.command()
@click.option("--input", "input_path", required=True, help="Form file.")
@click.option("--precision", type=int, default=None, help="Working precision in pi-digits.")
@click.option("--budget", type=int, default=DEFAULT_BUDGET, show_default=True)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--n-target", type=int, default=None, help="Certificate valuation target.")
@click.option("--report", "report_path", default=None, help="Write the solve report here.")
@click.option("--certificate", "certificate_path", default=None, help="Write the certificate here.")
@click.option("--json", "as_json", is_flag=True)
# pylint: disable=too-many-arguments
def solve(input_path, precision, budget, seed, n_target, report_path, certificate_path, as_json):
    """Solve a form and print the strategy and certificate."""
    form = FormHelper.load(_read(input_path))
    config = SolverConfig(precision=precision, budget=budget, seed=seed, n_target=n_target)
    report = solve_form(form, config)

    payload = _header(seed, form.field)
    payload.update(report.to_dict(form))
    if report_path:
        _write(report_path, payload)
    if certificate_path and report.solved:
        _write(certificate_path, report.certificate.to_dict(form))

    rows = [
        ["form", str(form)],
        ["rotation", report.rotation],
        ["strategy", str(report.strategy)],
        ["fallback", report.used_fallback],
        ["contractions", len(report.contraction_log)],
        ["hensel iterations", report.hensel_iterations],
        ["result", "certificate" if report.solved else "Unsolved"],
    ]
    if report.solved:
        rows.append(["support", report.certificate.support()])
        rows.append(["pivot", report.certificate.pivot])
    _emit(as_json, payload, rows)
    return EXIT_OK if report.solved else EXIT_UNSOLVED


@cli.command()
@click.option("--input", "input_path", required=True, help="Form file.")
@click.option("--certificate", "certificate_path", required=True, help="Certificate file.")
@click.option("--json", "as_json", is_flag=True)
def verify(input_path, certificate_path, as_json):
    """Check a certificate against a form."""
    form = FormHelper.load(_read(input_path))
    certificate = FormHelper.load_certificate(_read(certificate_path), form)
    verification = form.verify_certificate(certificate)

    payload = _header(field=form.field)
    payload.update(
        {
            "valuation": valuation_to_json(verification.valuation),
            "n_target": certificate.n_target,
            "pivot_is_unit": verification.pivot_is_unit,
            "passed": verification.passed,
        }
    )
    rows = [[key, value] for key, value in payload.items() if key not in ("tool", "field")]
    _emit(as_json, payload, rows)
    return EXIT_OK if verification.passed else EXIT_UNSOLVED


@cli.command()
@click.option("--input", "input_path", required=True, help="Form file.")
@click.option("--json", "as_json", is_flag=True)
def normalize(input_path, as_json):
    """Print the rotation that normalizes a form and both profiles."""
    form = FormHelper.load(_read(input_path))
    rotation, normalized, record = form.normalize()
    payload = _header(field=form.field)
    payload.update(
        {
            "rotation": rotation,
            "profile": list(form.profile().counts),
            "normalized_profile": list(normalized.profile().counts),
            "shifts": list(record.shifts),
        }
    )
    rows = [
        ["rotation", rotation],
        ["profile", payload["profile"]],
        ["normalized", payload["normalized_profile"]],
    ]
    _emit(as_json, payload, rows)
    return EXIT_OK


@cli.command("bins-check")
@click.option("--m", "m", type=int, required=True, help="Number of bins.")
@click.option("--n", "n", type=int, required=True, help="Number of objects.")
@click.option("--exhaustive", is_flag=True)
@click.option("--samples", type=int, default=10**5, show_default=True)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--json", "as_json", is_flag=True)
# pylint: disable=too-many-arguments
def bins_check(m, n, exhaustive, samples, seed, as_json):
    """Check that two disjoint pairs share a bin in every assignment."""
    if exhaustive:
        result = exhaustive_check(n, m)
        payload = _header()
    else:
        result = random_check(n, m, samples, seed)
        payload = _header(seed)
    payload.update({"checked": result.checked, "failures": result.failures})
    _emit(as_json, payload, [["checked", result.checked], ["failures", result.failures]])
    return EXIT_OK if result.failures == 0 else EXIT_UNSOLVED


@cli.command("dispatch-report")
@click.option("--d", "d", type=int, required=True)
@click.option("--s", "s", type=int, required=True)
@click.option("--m", "m", type=int, default=None, help="Defaults to d / 2.")
@click.option("--e", "e", type=int, default=1, show_default=True)
@click.option("--out", "out_path", default=None, help="Write the report here.")
@click.option("--json", "as_json", is_flag=True)
# pylint: disable=too-many-arguments
def dispatch_report(d, s, m, e, out_path, as_json):
    """Classify every normalized profile by the strategy dispatch picks."""
    report = dispatch_coverage(d, s, m if m is not None else d // 2, e)
    payload = _header()
    payload.update(report.to_dict())
    if out_path:
        _write(out_path, payload)

    rows = [[kind, count] for kind, count in sorted(report.covered_by.items())]
    rows.append(["total", report.total])
    _emit(as_json, payload, rows)
    return EXIT_OK


@cli.command()
@click.option("--input", "input_path", required=True, help="Form file.")
@click.option("--n-small", type=int, default=4, show_default=True)
@click.option("--support", "support_cap", type=int, default=8, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def brute(input_path, n_small, support_cap, as_json):
    """List every zero modulo pi^n-small with bounded support."""
    form = FormHelper.load(_read(input_path))
    zeros = brute_force_zero(form, n_small, support_cap)
    payload = _header(field=form.field)
    payload.update({"n_small": n_small, "support": support_cap, "count": len(zeros)})
    if as_json:
        payload["zeros"] = [[list(value) for value in zero] for zero in zeros]
    _emit(as_json, payload, [["zeros", len(zeros)]])
    return EXIT_OK if zeros else EXIT_UNSOLVED


@cli.command("random")
@click.option("--e", "e", type=int, required=True)
@click.option("--eisenstein", required=True, help="Comma separated c_0, ..., c_{e-1}.")
@click.option("--d", "d", type=int, required=True)
@click.option("--s", "s", type=int, required=True)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--profile", default=None, help="Comma separated level counts.")
@click.option("--precision", type=int, default=None)
@click.option("--out", "out_path", required=True, help="Write the form here.")
# pylint: disable=too-many-arguments
def random_command(e, eisenstein, d, s, seed, profile, precision, out_path):
    """Write a reproducible random form."""
    try:
        coefficients = [int(c) for c in eisenstein.split(",")]
        counts = None if profile is None else tuple(int(c) for c in profile.split(","))
    except ValueError as exc:
        raise click.UsageError(f"expected comma separated integers: {exc}") from exc

    field = make_field(e, coefficients, precision)
    form = random_form(field, d, s, seed, None if counts is None else LevelProfile(counts))
    _write(out_path, form.to_dict())
    click.echo(f"wrote {form} to {out_path}")
    return EXIT_OK


def run(args: Optional[list] = None) -> int:
    """
    Run the command line and return its exit code.
    """
    try:
        code = cli.main(args=args, prog_name=TOOL_NAME, standalone_mode=False)
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return EXIT_INPUT_ERROR
    except click.Abort:
        return EXIT_INPUT_ERROR
    except RamifiedZeroError as exc:
        click.echo(f"error: {exc.error_code.name}: {exc.message}", err=True)
        return EXIT_INPUT_ERROR
    return code if isinstance(code, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(run())
