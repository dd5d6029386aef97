# backend/cli.py
"""
Command-line front door.

    python cli.py classify --field 7^1 --msc "[[5,0,0,0],[1,3,2,0]]"
    python cli.py isom --field 7^1 --msc ... --msc2 ...
    python cli.py census --field 2^1 --format table
    python cli.py verify --suite traces --suite idempotence

Results go to standard out, diagnostics to standard error. Exit codes:
0 success or verdict, 1 verification failure, 2 usage error.
"""
import functools
import json
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence

import click

import config
from exceptions import CanonicalizationError, CanonixError, MalformedInputError
from models import MSC, FamilyLabel
from services import canonicalizer, oracle, verifier
from services.fields import Field, field_from_name

logger = logging.getLogger(__name__)

FORMATS = click.Choice(["json", "table"])


class FieldType(click.ParamType):
    name = "p^k"

    def convert(self, value, param, ctx):
        if isinstance(value, Field):
            return value
        try:
            return field_from_name(value)
        except ValueError as e:
            self.fail(str(e), param, ctx)


FIELD = FieldType()


def domain_errors(f):
    """Turn library errors into click exceptions with the right exit code."""
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except CanonicalizationError as e:
            raise click.ClickException(f"internal consistency check failed: {e}")
        except (ValueError, CanonixError) as e:
            raise click.UsageError(str(e))
    return wrapper


def _load_json(text: str, what: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedInputError(f"{what} is not valid JSON: {e}")


def _load_msc(text: str, field: Field) -> MSC:
    return MSC.from_dict(_load_json(text, "--msc"), field)


def _emit(data: Dict[str, Any], fmt: str, table_lines: Optional[List[str]] = None) -> None:
    if fmt == "json" or table_lines is None:
        click.echo(json.dumps(data, indent=2))
    else:
        for line in table_lines:
            click.echo(line)


def _witness_text(rows: Sequence[Sequence[str]]) -> str:
    return "[" + "; ".join(" ".join(row) for row in rows) + "]"


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Debug logging on standard error.")
def cli(verbose: bool):
    """Canonical forms of two-dimensional algebras over finite fields."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


@cli.command()
@click.option("--field", "field", type=FIELD, required=True)
@click.option("--msc", "msc_text", required=True, help='JSON, e.g. "[[1,0,0,0],[0,1,0,0]]".')
@click.option("--format", "fmt", type=FORMATS, default="json", show_default=True)
@domain_errors
def classify(field: Field, msc_text: str, fmt: str):
    """Canonical family, witness and result field of one MSC."""
    A = _load_msc(msc_text, field)
    result = canonicalizer.canonicalize(A)
    _emit(result.to_dict(), fmt, [
        f"input:     {A}",
        f"label:     {result.label}",
        f"field:     GF({result.field.name})",
        f"witness:   {_witness_text(result.witness.to_rows())}",
        f"canonical: {result.canonical}",
    ])


@cli.command()
@click.option("--field", "field", type=FIELD, required=True)
@click.option("--msc", "msc_text", required=True)
@click.option("--msc2", "msc2_text", required=True)
@click.option("--brute", is_flag=True, help="Search GL(2) over --field instead of comparing canonical forms.")
@click.option("--max-q", type=int, default=None, help="Override the enumeration bound.")
@click.option("--format", "fmt", type=FORMATS, default="json", show_default=True)
@domain_errors
def isom(field: Field, msc_text: str, msc2_text: str, brute: bool, max_q: Optional[int], fmt: str):
    """Decide whether two MSCs are isomorphic and print a witness."""
    A, B = _load_msc(msc_text, field), _load_msc(msc2_text, field)
    if brute:
        witness = oracle.brute_isomorphic(A, B, field, max_q=max_q)
    else:
        witness = canonicalizer.is_isomorphic(A, B)
    data = {
        "isomorphic": witness is not None,
        "witness": None if witness is None else witness.to_rows(),
        "field": field.name if witness is None else witness.field.name,
    }
    verdict = "isomorphic" if witness is not None else "not isomorphic"
    lines = [verdict]
    if witness is not None:
        lines.append(f"witness over GF({witness.field.name}): {_witness_text(witness.to_rows())}")
    _emit(data, fmt, lines)


@cli.command()
@click.option("--field", "field", type=FIELD, required=True)
@click.option("--msc", "msc_text", required=True)
@click.option("--max-q", type=int, default=None, help="Override the enumeration bound.")
@click.option("--format", "fmt", type=FORMATS, default="json", show_default=True)
@domain_errors
def orbit(field: Field, msc_text: str, max_q: Optional[int], fmt: str):
    """Orbit size, least representative and label by brute force."""
    report = oracle.orbit(_load_msc(msc_text, field), max_q=max_q)
    _emit(report.to_dict(), fmt, [
        f"representative: {report.representative}",
        f"size:           {report.size}",
        f"subset:         {report.subset.index}",
        f"label:          {report.label} over GF({report.label_field.name})",
    ])


@cli.command()
@click.option("--field", "field", type=FIELD, required=True)
@click.option("--max-q", type=int, default=None, help="Override the full-census bound.")
@click.option("--sample", type=int, default=None, help="Only the orbits of this many random matrices.")
@click.option("--seed", type=int, default=None, help=f"Sampling seed (default {config.DEFAULT_SEED}).")
@click.option("--format", "fmt", type=click.Choice(["json", "table", "csv"]), default="json", show_default=True)
@domain_errors
def census(field: Field, max_q: Optional[int], sample: Optional[int], seed: Optional[int], fmt: str):
    """Orbit partition of all MSCs over a small field, checked against the canonicalizer."""
    table = oracle.census(field, max_q=max_q, sample=sample, seed=seed)
    if fmt == "csv":
        click.echo(table.to_csv(), nl=False)
    else:
        lines = [f"{'#':>4}  {'size':>6}  {'subset':>6}  label"]
        for i, row in enumerate(table.rows):
            lines.append(f"{i:>4}  {row.size:>6}  {row.subset.index:>6}  {row.label} [{str(row.representative)}]")
        lines.append(f"{len(table.rows)} orbits, {table.total} matrices")
        if table.shared_labels:
            lines.append(f"shared labels: {[list(group) for group in table.shared_labels]}")
        if table.inhomogeneous:
            lines.append(f"INHOMOGENEOUS: {list(table.inhomogeneous)}")
        _emit(table.to_dict(), fmt, lines)
    if table.inhomogeneous:
        click.get_current_context().exit(1)


@cli.command()
@click.option("--field", "field", type=FIELD, required=True)
@click.option("--family", required=True, help="A1 .. A12; the class follows the characteristic.")
@click.option("--params", "params_text", default="[]", show_default=True, help="JSON list of field elements.")
@click.option("--format", "fmt", type=FORMATS, default="json", show_default=True)
@domain_errors
def materialize(field: Field, family: str, params_text: str, fmt: str):
    """The canonical MSC of a family member."""
    params = _load_json(params_text, "--params")
    if not isinstance(params, list):
        raise MalformedInputError("--params must be a JSON list")
    label = FamilyLabel(
        canonicalizer.char_class_of(field),
        canonicalizer.family_from_name(family),
        tuple(field.parse(x) for x in params),
    )
    A = canonicalizer.materialize(label, field)
    _emit(A.to_dict(), fmt, [str(A)])


@cli.command()
@click.option("--suite", "suites", multiple=True, type=click.Choice(list(verifier.SUITES)),
              help="Repeatable; all suites when omitted.")
@click.option("--field", "fields", type=FIELD, multiple=True, help="Repeatable; per-suite defaults when omitted.")
@click.option("--samples", type=int, default=None, help=f"Random cases per field (default {config.DEFAULT_SAMPLES}).")
@click.option("--seed", type=int, default=None, help=f"Seed (default {config.DEFAULT_SEED}).")
@click.option("--format", "fmt", type=FORMATS, default="json", show_default=True)
@domain_errors
def verify(suites, fields, samples: Optional[int], seed: Optional[int], fmt: str):
    """Run property suites; exit 1 if any check fails."""
    reports = verifier.run_suites(suites or None, list(fields) or None, samples, seed)
    ok = all(report.ok for report in reports)
    lines = [f"{'suite':<12} {'passed':>7} {'failed':>7} {'skipped':>7}"]
    for report in reports:
        lines.append(f"{report.name:<12} {report.passed:>7} {report.failed:>7} {report.skipped:>7}")
        lines.extend(f"  {failure}" for failure in report.failures)
    lines.append("OK" if ok else "FAILED")
    _emit({"ok": ok, "suites": [report.to_dict() for report in reports]}, fmt, lines)
    if not ok:
        click.get_current_context().exit(1)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point returning the exit code instead of exiting."""
    try:
        rv = cli.main(args=list(argv) if argv is not None else None, prog_name="canonix", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 1
    return rv if isinstance(rv, int) else 0


if __name__ == "__main__":
    sys.exit(run())
