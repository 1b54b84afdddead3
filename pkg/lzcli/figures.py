"""Preset bundle that regenerates the data behind the standard figures.

diabatic_traces   diabatic traces for six couplings, tau abscissa
diabatic_times    diabatic jump and relaxation times against omega
adiabatic_traces  adiabatic traces for the same couplings, tau/omega abscissa
adiabatic_detail  adiabatic trace at omega = 2 with envelopes and the jump/relax markers
adiabatic_times   adiabatic jump and relaxation times against omega
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from lztimes.config import DEFAULT_EPSILON, IntegratorConfig
from lztimes.logger import get_logger
from lztimes.model import Basis, LzParams, p_infinity
from lztimes.times import jump_time_adiabatic_large, relax_time_adiabatic, tangent_window_diabatic
from lztimes.validation import CheckEntry, Measurement, get_registry

from .sweep import run_sweep
from .tables import times_rows, trace_columns, trace_rows
from .writers import render, write_output

logger = get_logger(__name__, component="figures")

FIGURE_OMEGAS = (0.03, 0.1, 0.3, 1.0, 3.0, 10.0)
DETAIL_OMEGA = 2.0
TIMES_GRID = tuple(np.round(np.geomspace(0.01, 10.0, 61), 12).tolist())


@dataclass(frozen=True)
class Window:
    start: float
    stop: float
    step: float


# tau windows for the diabatic traces; strong coupling scales with omega.
DIABATIC_WINDOWS = {
    0.03: Window(-10.0, 20.0, 0.01),
    0.1: Window(-10.0, 20.0, 0.01),
    0.3: Window(-10.0, 20.0, 0.01),
    1.0: Window(-10.0, 20.0, 0.01),
    3.0: Window(-9.0, 18.0, 0.01),
    10.0: Window(-30.0, 60.0, 0.02),
}

# tau/omega windows for the adiabatic traces.
ADIABATIC_WINDOWS = {
    0.03: Window(-5.0, 10.0, 0.01),
    0.1: Window(-5.0, 10.0, 0.01),
    0.3: Window(-5.0, 10.0, 0.01),
    1.0: Window(-5.0, 10.0, 0.01),
    3.0: Window(-3.0, 3.0, 0.005),
    10.0: Window(-3.0, 3.0, 0.002),
}

DETAIL_WINDOW = Window(-5.0, 40.0, 0.01)

FIGURE_FILES = (
    "diabatic_traces",
    "diabatic_times",
    "adiabatic_traces",
    "adiabatic_detail",
    "adiabatic_times",
)


def build_figures(
    cfg: IntegratorConfig,
    *,
    epsilon: float = DEFAULT_EPSILON,
    fmt: str = "csv",
    max_workers: int = 1,
) -> dict[str, str]:
    """Render every figure file; returns {file name: contents}."""
    base_meta = {"epsilon": epsilon, "rel_tol": cfg.rel_tol, "abs_tol": cfg.abs_tol}
    bundle: dict[str, str] = {}
    ext = fmt

    # Diabatic traces
    rows = _window_rows(DIABATIC_WINDOWS, Basis.DIABATIC, cfg, False, max_workers)
    tangents = {
        f"{w:g}": list(tangent_window_diabatic(LzParams(w))) for w in DIABATIC_WINDOWS
    }
    p_inf = {f"{w:g}": p_infinity(LzParams(w), Basis.DIABATIC) for w in DIABATIC_WINDOWS}
    bundle[f"diabatic_traces.{ext}"] = render(
        fmt, trace_columns(False), rows,
        {**base_meta, "figure": "diabatic_traces", "tangent_windows": tangents, "p_inf": p_inf},
    )

    # Diabatic times
    times = times_rows(TIMES_GRID, epsilon, max_workers=max_workers)
    bundle[f"diabatic_times.{ext}"] = render(
        fmt, ("omega", "jump_d", "relax_d"), times, {**base_meta, "figure": "diabatic_times"}
    )

    # Adiabatic traces
    rows = _window_rows(ADIABATIC_WINDOWS, Basis.ADIABATIC, cfg, True, max_workers)
    bundle[f"adiabatic_traces.{ext}"] = render(
        fmt, trace_columns(True), rows, {**base_meta, "figure": "adiabatic_traces"}
    )

    # Adiabatic detail
    params = LzParams(DETAIL_OMEGA)
    rows = trace_rows(
        DETAIL_OMEGA, Basis.ADIABATIC, DETAIL_WINDOW.start, DETAIL_WINDOW.stop, DETAIL_WINDOW.step, cfg
    )
    detail_inf = p_infinity(params, Basis.ADIABATIC)
    large = jump_time_adiabatic_large(params, epsilon)
    markers = {
        "p_inf": detail_inf,
        "upper_band": (1.0 + epsilon) * detail_inf,
        "lower_band": (1.0 - epsilon) * detail_inf,
        "jump_initial": large.jump_initial,
        "jump_final": large.jump_final,
        "relax": relax_time_adiabatic(params, epsilon),
    }
    bundle[f"adiabatic_detail.{ext}"] = render(
        fmt, trace_columns(False), rows, {**base_meta, "figure": "adiabatic_detail", "markers": markers}
    )

    # Adiabatic times
    bundle[f"adiabatic_times.{ext}"] = render(
        fmt,
        ("omega", "jump_a_small", "jump_a_large", "jump_a_initial", "jump_a_final", "relax_a", "jump_a"),
        times,
        {**base_meta, "figure": "adiabatic_times"},
    )
    logger.info("figures_built", files=len(bundle))
    return bundle


def _window_rows(
    windows: dict[float, Window], basis: Basis, cfg: IntegratorConfig, tau_over_omega: bool, max_workers: int
) -> list[dict[str, Any]]:
    """All windows of one basis, one sweep task per coupling, in coupling order."""

    def _one(item: tuple[float, Window]) -> list[dict[str, Any]]:
        omega, win = item
        return trace_rows(omega, basis, win.start, win.stop, win.step, cfg, tau_over_omega=tau_over_omega)

    blocks = run_sweep(_one, list(windows.items()), max_workers=max_workers, label="figures")
    return [row for block in blocks for row in block]


def write_figures(out_dir: Path, bundle: dict[str, str]) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in bundle.items():
        path = out_dir / name
        write_output(text, path)
        written.append(path)
    return written


# ---------------------------------------------------------------------------
# Validation hook
# ---------------------------------------------------------------------------


def check_figures_byte_stable(cfg: IntegratorConfig, epsilon: float) -> Measurement:
    """Build the bundle twice (threaded, then sequential); count differing files."""
    first = build_figures(cfg, epsilon=epsilon, max_workers=4)
    second = build_figures(cfg, epsilon=epsilon, max_workers=1)
    differing = sorted(name for name in first if first[name] != second.get(name))
    detail = f"{len(first)} files compared"
    if differing:
        detail += f"; differing: {', '.join(differing)}"
    return Measurement(float(len(differing)), detail)


get_registry().register(CheckEntry(
    name="figures_byte_stable",
    description="The figure bundle renders byte-identically across runs and worker counts.",
    category="output",
    threshold=0.0,
    factory="lzcli.figures:check_figures_byte_stable",
    slow=True,
    keywords=["figures", "csv", "golden"],
))


__all__ = [
    "FIGURE_OMEGAS",
    "DETAIL_OMEGA",
    "FIGURE_FILES",
    "Window",
    "DIABATIC_WINDOWS",
    "ADIABATIC_WINDOWS",
    "build_figures",
    "write_figures",
    "check_figures_byte_stable",
]
