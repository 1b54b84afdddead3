"""stderr messages and plain-text tables for the CLI; stdout carries data only."""

from __future__ import annotations

import os
import sys
from typing import Any, Sequence

import click


def colour_enabled() -> bool:
    return sys.stderr.isatty() and "NO_COLOR" not in os.environ


def paint(text: str, **style: Any) -> str:
    return click.style(text, **style) if style and colour_enabled() else text


def print_error(msg: str) -> None:
    click.echo(paint(msg, fg="red"), err=True)


def print_ok(msg: str) -> None:
    click.echo(paint(msg, fg="green"), err=True)


def print_dim(msg: str) -> None:
    click.echo(paint(msg, dim=True), err=True)


def status_label(passed: bool) -> str:
    return paint("PASS", fg="green", bold=True) if passed else paint("FAIL", fg="red", bold=True)


def fmt_table(rows: Sequence[Sequence[Any]], headers: Sequence[str]) -> str:
    """Left-aligned columns; styled cells are padded by their visible width."""
    cells = [[str(c) for c in row] for row in rows]
    widths = [len(h) for h in headers]
    for row in cells:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(click.unstyle(cell)))

    def _line(row: Sequence[str]) -> str:
        padded = (cell + " " * (widths[i] - len(click.unstyle(cell))) for i, cell in enumerate(row))
        return ("  " + "  ".join(padded)).rstrip()

    rule = "  " + "  ".join("-" * w for w in widths)
    return "\n".join([paint(_line(list(headers)), bold=True), paint(rule, dim=True), *map(_line, cells)])


__all__ = ["colour_enabled", "paint", "print_error", "print_ok", "print_dim", "status_label", "fmt_table"]
