"""CSV / JSON emitters for traces, time tables and validation reports.

CSV layout::

    # {"meta": {...}, "schema": "lztimes/1"}
    col_a,col_b,...
    1.5,NA,...

Floats are written with 12 significant digits; absent or non-finite values
are ``NA`` in CSV and ``null`` in JSON. Output for a fixed spec is
byte-identical across runs.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Mapping, Optional, Sequence

import click
import numpy as np

SCHEMA_VERSION = "lztimes/1"
NA = "NA"


def format_cell(value: Any) -> str:
    if value is None:
        return NA
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return f"{value:.12g}" if math.isfinite(value) else NA
    return str(value)


def _json_value(value: Any) -> Any:
    if value is None:
        return None
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        # Same rounding as the CSV so both formats carry identical numbers.
        return float(f"{value:.12g}") if math.isfinite(value) else None
    return value


def _header(meta: Mapping[str, Any]) -> str:
    return json.dumps({"schema": SCHEMA_VERSION, "meta": meta}, sort_keys=True, separators=(",", ":"), default=str)


def render_csv(columns: Sequence[str], rows: Sequence[Mapping[str, Any]], meta: Mapping[str, Any]) -> str:
    buf = io.StringIO()
    buf.write(f"# {_header(meta)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(row.get(col)) for col in columns])
    return buf.getvalue()


def render_json(columns: Sequence[str], rows: Sequence[Mapping[str, Any]], meta: Mapping[str, Any]) -> str:
    document = {
        "schema": SCHEMA_VERSION,
        "meta": meta,
        "columns": list(columns),
        "rows": [{col: _json_value(row.get(col)) for col in columns} for row in rows],
    }
    return json.dumps(document, indent=2, default=str) + "\n"


def render(
    fmt: str, columns: Sequence[str], rows: Sequence[Mapping[str, Any]], meta: Mapping[str, Any]
) -> str:
    if fmt == "csv":
        return render_csv(columns, rows, meta)
    if fmt == "json":
        return render_json(columns, rows, meta)
    raise ValueError(f"unknown output format {fmt!r}")


def write_output(text: str, out: Optional[Path]) -> None:
    """Write to *out* atomically, or to stdout when *out* is None."""
    if out is None:
        click.echo(text, nl=False)
        return
    out = Path(out)
    fd, tmp = tempfile.mkstemp(prefix=f".{out.name}.", dir=out.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


__all__ = [
    "SCHEMA_VERSION",
    "NA",
    "format_cell",
    "render_csv",
    "render_json",
    "render",
    "write_output",
]
