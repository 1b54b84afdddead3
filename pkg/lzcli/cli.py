"""Command-line front end for lztimes.

Usage:
    lztimes trace --omega 0.5 --basis d --tau-min -10 --tau-max 30
    lztimes times --omega-min 0.03 --omega-max 10 --points 60 --format json
    lztimes figures --out figures/
    lztimes validate --out report.json --format json

Data goes to stdout (or --out); tables, progress and logs go to stderr.
Exit status: 0 on success, 1 on computation/config/IO failure or a failed
check, 2 on invalid flags.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Iterator, Optional

import click

from lztimes import __version__
from lztimes.config import Settings
from lztimes.errors import ConfigError, DomainError, LzError
from lztimes.logger import (
    clear_cached_diagnostics,
    configure_logging,
    diagnostic_counts,
    get_cached_diagnostics,
    get_logger,
)
from lztimes.validation import get_registry, run_checks

from .config import RunSpec, build_run_spec
from .figures import build_figures, write_figures
from .tables import TIMES_COLUMNS, sweep_trace_rows, times_rows, trace_columns
from .terminal import fmt_table, print_dim, print_error, print_ok, status_label
from .writers import render, write_output

logger = get_logger(__name__, component="cli")

REPORT_COLUMNS = ("name", "passed", "measured", "threshold", "detail")


@dataclass
class CliState:
    settings: Settings


# ---------------------------------------------------------------------------
# Shared plumbing
# ---------------------------------------------------------------------------


def _resolve(ctx: click.Context, command: str, config_path: Optional[Path], flags: dict[str, Any]) -> RunSpec:
    """Build the RunSpec, mapping bad flags to usage errors."""
    state: CliState = ctx.obj
    if "omega" in flags and not flags["omega"]:
        flags["omega"] = None
    try:
        return build_run_spec(
            command,
            config_path=config_path,
            flags=flags,
            defaults={"epsilon": state.settings.epsilon},
        )
    except ConfigError as exc:
        raise click.ClickException(str(exc)) from exc
    except DomainError as exc:
        raise click.UsageError(str(exc), ctx=ctx) from exc


@contextmanager
def _failures_as_exit() -> Iterator[None]:
    """Library and IO failures become exit status 1 with a one-line message."""
    try:
        yield
    except LzError as exc:
        logger.error("command_failed", error=str(exc))
        raise click.ClickException(str(exc)) from exc
    except ArithmeticError as exc:
        logger.error("command_failed", error=repr(exc))
        raise click.ClickException(f"numeric failure: {exc}") from exc
    except OSError as exc:
        raise click.ClickException(f"cannot write output: {exc}") from exc


def _common_options(fn: Callable[..., Any]) -> Callable[..., Any]:
    options = [
        click.option("--config", "config_path", type=click.Path(path_type=Path, dir_okay=False),
                     help="Flat YAML file with option values (flags override it)."),
        click.option("--epsilon", type=float, help="Threshold epsilon in (0, 1), default 0.1."),
        click.option("--rel-tol", type=float, help="Integrator relative tolerance."),
        click.option("--abs-tol", type=float, help="Integrator absolute tolerance."),
        click.option("--format", "fmt", type=click.Choice(["csv", "json"]), help="Output format (default csv)."),
        click.option("--workers", "max_workers", type=int, help="Worker threads for sweeps."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _omega_options(fn: Callable[..., Any]) -> Callable[..., Any]:
    options = [
        click.option("--omega", "omega", type=float, multiple=True, help="Coupling omega (repeatable)."),
        click.option("--omega-min", type=float, help="Lower end of an omega range."),
        click.option("--omega-max", type=float, help="Upper end of an omega range."),
        click.option("--points", type=int, help="Points in the omega range (default 20)."),
        click.option("--spacing", "omega_spacing", type=click.Choice(["log", "linear"]),
                     help="Spacing of the omega range (default log)."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


# ---------------------------------------------------------------------------
# Group
# ---------------------------------------------------------------------------


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
              help="Log level (default from LZTIMES_LOG_LEVEL or WARNING).")
@click.option("--log-json/--log-console", default=None, help="JSON log lines instead of console rendering.")
@click.version_option(__version__, prog_name="lztimes")
@click.pass_context
def cli(ctx: click.Context, log_level: Optional[str], log_json: Optional[bool]) -> None:
    """Landau-Zener transition probabilities and transition times."""
    try:
        settings = Settings()
    except ValueError as exc:
        raise click.ClickException(f"invalid LZTIMES_* environment: {exc}") from exc
    configure_logging(
        json_output=settings.log_json if log_json is None else log_json,
        log_level=(log_level or settings.log_level).upper(),
    )
    ctx.obj = CliState(settings=settings)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


@cli.command()
@_omega_options
@click.option("--basis", type=click.Choice(["d", "a", "both"]), help="Basis (default both).")
@click.option("--tau-min", type=float, help="Start of the tau range (default -10).")
@click.option("--tau-max", type=float, help="End of the tau range (default 30).")
@click.option("--tau-step", type=float, help="Grid step (default 0.01).")
@click.option("--tau-over-omega/--tau-absolute", "tau_over_omega", default=None,
              help="Read the tau range in units of tau/omega and use it as the abscissa.")
@click.option("--out", type=click.Path(path_type=Path, dir_okay=False), help="Output file (default stdout).")
@_common_options
@click.pass_context
def trace(ctx: click.Context, config_path: Optional[Path], **flags: Any) -> None:
    """Engine and closed-form P(tau) for each omega and basis."""
    state: CliState = ctx.obj
    spec = _resolve(ctx, "trace", config_path, _rename(flags))
    with _failures_as_exit():
        rows = sweep_trace_rows(
            spec.omega_grid(),
            spec.bases(),
            spec.tau_min,
            spec.tau_max,
            spec.tau_step,
            spec.integrator(state.settings),
            tau_over_omega=spec.tau_over_omega,
            valid_threshold=state.settings.valid_threshold,
            max_workers=spec.workers(state.settings),
        )
        text = render(spec.format, trace_columns(spec.tau_over_omega), rows, {"spec": spec.echo()})
        write_output(text, spec.out)
    if spec.out:
        print_dim(f"wrote {len(rows)} rows to {spec.out}")


@cli.command()
@_omega_options
@click.option("--out", type=click.Path(path_type=Path, dir_okay=False), help="Output file (default stdout).")
@_common_options
@click.pass_context
def times(ctx: click.Context, config_path: Optional[Path], **flags: Any) -> None:
    """Closed-form jump and relaxation times per omega."""
    state: CliState = ctx.obj
    spec = _resolve(ctx, "times", config_path, _rename(flags))
    with _failures_as_exit():
        rows = times_rows(spec.omega_grid(), spec.epsilon, max_workers=spec.workers(state.settings))
        text = render(spec.format, TIMES_COLUMNS, rows, {"spec": spec.echo()})
        write_output(text, spec.out)
    if spec.out:
        print_dim(f"wrote {len(rows)} rows to {spec.out}")


@cli.command()
@click.option("--out", type=click.Path(path_type=Path, file_okay=False),
              help="Directory for the figure files (default figures/).")
@_common_options
@click.pass_context
def figures(ctx: click.Context, config_path: Optional[Path], **flags: Any) -> None:
    """Data for the standard figure set, one file per figure."""
    state: CliState = ctx.obj
    spec = _resolve(ctx, "figures", config_path, _rename(flags))
    with _failures_as_exit():
        bundle = build_figures(
            spec.integrator(state.settings),
            epsilon=spec.epsilon,
            fmt=spec.format,
            max_workers=spec.workers(state.settings),
        )
        written = write_figures(spec.out or Path("figures"), bundle)
    for path in written:
        print_dim(f"wrote {path}")


@cli.command()
@click.option("--check", "checks", multiple=True, help="Run only this check (repeatable).")
@click.option("--match", "match", help="Select checks whose name, description or keywords mention these words.")
@click.option("--tolerance-scale", type=float, help="Multiply every threshold by this factor (>= 1).")
@click.option("--quick", "include_slow", flag_value=False, default=None, help="Skip the slow checks.")
@click.option("--list", "list_only", is_flag=True, help="List the registered checks and exit.")
@click.option("--out", type=click.Path(path_type=Path, dir_okay=False), help="Report file (default stdout).")
@_common_options
@click.pass_context
def validate(
    ctx: click.Context, config_path: Optional[Path], list_only: bool, match: Optional[str], **flags: Any
) -> None:
    """Run the acceptance checks; exit status 0 iff all pass."""
    state: CliState = ctx.obj
    registry = get_registry()
    entries = registry.search(match) if match else registry.list_all()
    if match and not entries:
        raise click.ClickException(f"no check matches {match!r}")
    if list_only:
        rows = [(e.name, e.category, f"{e.threshold:g}", "slow" if e.slow else "") for e in entries]
        click.echo(fmt_table(rows, ("check", "category", "threshold", "")))
        return

    flags = _rename(flags)
    flags["checks"] = list(flags["checks"]) or None
    spec = _resolve(ctx, "validate", config_path, flags)
    selected = spec.checks or None
    if match:
        # Explicit --check names run first, then the matches in rank order.
        matched = [e.name for e in entries if spec.include_slow or not e.slow]
        selected = list(dict.fromkeys([*(spec.checks or []), *matched]))
    clear_cached_diagnostics()
    with _failures_as_exit():
        results = run_checks(
            selected,
            tolerance_scale=spec.tolerance_scale,
            cfg=spec.integrator(state.settings),
            epsilon=spec.epsilon,
            include_slow=spec.include_slow,
            max_workers=spec.workers(state.settings),
        )
        meta = {
            "spec": spec.echo(),
            "match": match,
            "diagnostics": get_cached_diagnostics(),
            "diagnostic_counts": diagnostic_counts(),
        }
        text = render(spec.format, REPORT_COLUMNS, [r.as_record() for r in results], meta)
        write_output(text, spec.out)

    table = [
        (r.name, status_label(r.passed), f"{r.measured:.3g}", f"{r.threshold:.3g}", r.detail)
        for r in results
    ]
    click.echo(fmt_table(table, ("check", "status", "measured", "threshold", "detail")), err=True)
    failed = [r.name for r in results if not r.passed]
    if failed:
        print_error(f"{len(failed)} of {len(results)} checks failed: {', '.join(failed)}")
        ctx.exit(1)
    print_ok(f"all {len(results)} checks passed")


def _rename(flags: dict[str, Any]) -> dict[str, Any]:
    """Map click parameter names onto RunSpec fields."""
    out = dict(flags)
    if "fmt" in out:
        out["format"] = out.pop("fmt")
    return out


def main() -> None:
    cli(prog_name="lztimes")


__all__ = ["cli", "main"]
