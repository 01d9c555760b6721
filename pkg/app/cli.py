# app/cli.py
"""
Command-line interface for cgentropy.

Usage:
    python -m app.cli cg 1/2 1/2 1/2 -1/2 1 0      # one CG coefficient
    python -m app.cli threej 1 1 1 0 0 0           # one 3-j symbol
    python -m app.cli table 5/2 2                  # bistochastic matrix (CSV)
    python -m app.cli verify 3 5/2 --q 0.1:3:0.1   # entropic inequalities
    python -m app.cli sweep-tsallis 5/2 2 9/2 1/2  # Tsallis information vs q
    python -m app.cli hahn-check 5/2 2             # Hahn backend equivalence
    python -m app.cli orthogonality 2 3/2          # exact orthogonality

Exit codes: 0 success / all checks pass, 1 usage or domain error,
2 a verified relation or inequality does not hold.
"""

from __future__ import annotations

import logging
import sys
from typing import List, Optional, Sequence

import click
from pydantic import ValidationError

from app.cg import CouplingLabel, clebsch_gordan, three_j, verify_orthogonality
from app.config import configure_logging, get_settings
from app.entropy import q_grid, tsallis_sweep, verify_inequalities
from app.errors import CGEntropyError, ConfigError
from app.formatters import (
    coefficient_record,
    matrix_payload,
    render_coefficient_csv,
    render_equivalence_csv,
    render_inequality_csv,
    render_json,
    render_matrix_csv,
    render_orthogonality_csv,
    render_sweep_csv,
)
from app.hahn import check_equivalence
from app.prob import build_bistochastic, column_joint
from app.schemas import CliConfig, Command, OutputFormat, QRange, SweepReport, SweepRow

__all__ = [
    "cli",
    "run",
]

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VIOLATION = 2

DEFAULT_VERIFY_Q = "0.1,0.5,0.9,1,1.1,2,3"
DEFAULT_SWEEP_Q = "0.05:3:0.05"

# negative projections ("-1/2") must reach the arguments, not the option parser
COMMAND_SETTINGS = {"ignore_unknown_options": True}


def parse_q(text: str) -> List[float]:
    """"min:max:step" grid or comma-separated values"""
    text = text.strip()
    if ":" in text:
        try:
            q_range = QRange.parse(text)
        except ValidationError as e:
            raise ConfigError(f"invalid q range {text!r}: {e.errors()[0]['msg']}")
        except ValueError as e:
            raise ConfigError(str(e))
        return q_grid(q_range.q_min, q_range.q_max, q_range.q_step)
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"invalid q values {text!r}")


def build_config(command: Command, spins: Sequence[str], q_values: Sequence[float] = (),
                 log_base: Optional[str] = None, output_format: Optional[str] = None,
                 out: Optional[str] = None, default_format: OutputFormat = OutputFormat.json) -> CliConfig:
    """Validate one invocation; pydantic errors become ConfigError"""
    settings = get_settings()
    try:
        config = CliConfig(
            command=command,
            spins=list(spins),
            q_values=list(q_values),
            log_base=log_base or settings.log_base,
            output_format=output_format or default_format,
            out=out,
        )
    except ValidationError as e:
        raise ConfigError("; ".join(err["msg"] for err in e.errors()))
    config.half_ints()  # enforces the spin limit
    return config


def emit(text: str, config: CliConfig) -> None:
    """Single writer: a file when --out is given, stdout otherwise"""
    if config.out:
        try:
            with open(config.out, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
        except OSError as e:
            raise ConfigError(f"cannot write {config.out}: {e.strerror or e}")
        logger.info(f"Wrote {config.command.value} output to {config.out}")
    else:
        click.echo(text, nl=False)


def output_options(func):
    func = click.option("--out", "out", default=None, help="Output file (default: stdout)")(func)
    func = click.option("--format", "output_format", type=click.Choice(["json", "csv"]), default=None,
                        help="Output format")(func)
    return func


def log_base_option(func):
    return click.option("--log-base", "log_base", type=click.Choice(["e", "2"]), default=None,
                        help="Logarithm base (default from CGENTROPY_LOG_BASE, else e)")(func)


@click.group()
def cli():
    """Exact Clebsch-Gordan coefficients and their entropic inequalities."""


@cli.command("cg", context_settings=COMMAND_SETTINGS)
@click.argument("j1")
@click.argument("m1")
@click.argument("j2")
@click.argument("m2")
@click.argument("j")
@click.argument("m")
@output_options
def cmd_cg(j1, m1, j2, m2, j, m, output_format, out) -> int:
    """Clebsch-Gordan coefficient <j1 m1 j2 m2 | j m>."""
    config = build_config(Command.cg, [j1, m1, j2, m2, j, m], output_format=output_format, out=out)
    label = CouplingLabel.of(*config.half_ints())
    record = coefficient_record("cg", str(label), clebsch_gordan(label))
    emit(render_coefficient_csv(record) if config.output_format is OutputFormat.csv else render_json(record), config)
    return EXIT_OK


@cli.command("threej", context_settings=COMMAND_SETTINGS)
@click.argument("j1")
@click.argument("j2")
@click.argument("j3")
@click.argument("m1")
@click.argument("m2")
@click.argument("m3")
@output_options
def cmd_threej(j1, j2, j3, m1, m2, m3, output_format, out) -> int:
    """Wigner 3-j symbol (j1 j2 j3; m1 m2 m3)."""
    config = build_config(Command.threej, [j1, j2, j3, m1, m2, m3], output_format=output_format, out=out)
    values = config.half_ints()
    label = "({} {} {}; {} {} {})".format(*values)
    record = coefficient_record("threej", label, three_j(*values))
    emit(render_coefficient_csv(record) if config.output_format is OutputFormat.csv else render_json(record), config)
    return EXIT_OK


@cli.command("table")
@click.argument("j1")
@click.argument("j2")
@output_options
def cmd_table(j1, j2, output_format, out) -> int:
    """Bistochastic matrix of squared coefficients."""
    config = build_config(Command.table, [j1, j2], output_format=output_format, out=out,
                          default_format=OutputFormat.csv)
    matrix = build_bistochastic(*config.half_ints())
    if config.output_format is OutputFormat.csv:
        emit(render_matrix_csv(matrix), config)
    else:
        emit(render_json(matrix_payload(matrix)), config)
    return EXIT_OK


@cli.command("verify")
@click.argument("j1")
@click.argument("j2")
@click.option("--q", "q_text", default=DEFAULT_VERIFY_Q, show_default=True,
              help="Entropic indices: min:max:step or comma-separated")
@log_base_option
@output_options
def cmd_verify(j1, j2, q_text, log_base, output_format, out) -> int:
    """Subadditivity, Araki-Lieb and Tsallis margins for every column."""
    config = build_config(Command.verify, [j1, j2], q_values=parse_q(q_text), log_base=log_base,
                          output_format=output_format, out=out)
    report = verify_inequalities(*config.half_ints(), q_values=config.q_values, log_base=config.log_base)
    emit(render_inequality_csv(report) if config.output_format is OutputFormat.csv else render_json(report), config)
    return EXIT_OK if report.passed else EXIT_VIOLATION


@cli.command("sweep-tsallis", context_settings=COMMAND_SETTINGS)
@click.argument("j1")
@click.argument("j2")
@click.argument("j")
@click.argument("m")
@click.option("--q", "q_text", default=DEFAULT_SWEEP_Q, show_default=True,
              help="q grid as min:max:step")
@output_options
def cmd_sweep_tsallis(j1, j2, j, m, q_text, output_format, out) -> int:
    """Tsallis information I_q of one column over a grid of q."""
    config = build_config(Command.sweep_tsallis, [j1, j2, j, m], q_values=parse_q(q_text),
                          output_format=output_format, out=out, default_format=OutputFormat.csv)
    hj1, hj2, hj, hm = config.half_ints()
    joint = column_joint(hj1, hj2, hj, hm)
    report = SweepReport(
        j1=hj1, j2=hj2, j=hj, m=hm,
        rows=[SweepRow(q=q, tsallis_information=value) for q, value in tsallis_sweep(joint, config.q_values)],
    )
    emit(render_sweep_csv(report) if config.output_format is OutputFormat.csv else render_json(report), config)
    return EXIT_OK


@cli.command("hahn-check")
@click.argument("j1")
@click.argument("j2")
@output_options
def cmd_hahn_check(j1, j2, output_format, out) -> int:
    """Compare the Hahn-polynomial backend with the Racah sum."""
    config = build_config(Command.hahn_check, [j1, j2], output_format=output_format, out=out)
    report = check_equivalence(*config.half_ints())
    emit(render_equivalence_csv(report) if config.output_format is OutputFormat.csv else render_json(report), config)
    return EXIT_OK if report.passed else EXIT_VIOLATION


@cli.command("orthogonality")
@click.argument("j1")
@click.argument("j2")
@output_options
def cmd_orthogonality(j1, j2, output_format, out) -> int:
    """Check both orthogonality relations exactly."""
    config = build_config(Command.orthogonality, [j1, j2], output_format=output_format, out=out)
    report = verify_orthogonality(*config.half_ints())
    emit(render_orthogonality_csv(report) if config.output_format is OutputFormat.csv else render_json(report), config)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command and return its exit code"""
    configure_logging()
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        result = cli.main(args=args, prog_name="cgentropy", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return EXIT_ERROR
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_ERROR
    except CGEntropyError as e:
        logger.error(f"{type(e).__name__}: {e}")
        click.echo(f"Error: {e}", err=True)
        return EXIT_ERROR
    if isinstance(result, int):
        return result
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(run())
