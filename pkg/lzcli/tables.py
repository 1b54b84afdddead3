"""Row builders shared by the trace/times commands and the figure bundle."""

from __future__ import annotations

from typing import Any, Sequence

import numpy as np

from lztimes.approx import approx_for
from lztimes.config import DEFAULT_VALID_THRESHOLD, IntegratorConfig
from lztimes.engine import engine_trace, uniform_grid
from lztimes.engine.trace import GRID_DECIMALS
from lztimes.model import Basis, LzParams
from lztimes.times import times_table

from .sweep import run_sweep

TRACE_VALUE_COLUMNS = (
    "p_engine",
    "p_approx",
    "envelope_upper",
    "envelope_lower",
    "nonoscillatory",
    "valid_flag",
    "tail_flag",
)

TIMES_COLUMNS = (
    "omega",
    "jump_d",
    "relax_d",
    "jump_a_small",
    "jump_a_large",
    "jump_a_initial",
    "jump_a_final",
    "relax_a",
    "jump_a",
)


def trace_columns(tau_over_omega: bool) -> tuple[str, ...]:
    abscissa = "tau_over_omega" if tau_over_omega else "tau"
    return ("omega", "basis", abscissa) + TRACE_VALUE_COLUMNS


def trace_rows(
    omega: float,
    basis: Basis,
    tau_min: float,
    tau_max: float,
    tau_step: float,
    cfg: IntegratorConfig,
    *,
    tau_over_omega: bool = False,
    valid_threshold: float = DEFAULT_VALID_THRESHOLD,
) -> list[dict[str, Any]]:
    """Engine and closed-form values on one grid. With *tau_over_omega* the
    range and step are in units of tau/omega."""
    params = LzParams(omega)
    abscissa = uniform_grid(tau_min, tau_max, tau_step)
    taus = np.round(abscissa * omega, GRID_DECIMALS) + 0.0 if tau_over_omega else abscissa

    trace = engine_trace(params, basis, taus, cfg)
    estimate = approx_for(params, basis, taus, valid_threshold=valid_threshold)
    valid = np.broadcast_to(estimate.valid, taus.shape)
    key = "tau_over_omega" if tau_over_omega else "tau"
    return [
        {
            "omega": params.omega,
            "basis": basis.short,
            key: float(abscissa[i]),
            "p_engine": float(trace.p[i]),
            "p_approx": float(estimate.p[i]),
            "envelope_upper": float(estimate.envelope_upper[i]),
            "envelope_lower": float(estimate.envelope_lower[i]),
            "nonoscillatory": float(estimate.nonoscillatory[i]),
            "valid_flag": bool(valid[i]),
            "tail_flag": bool(trace.extrapolated[i]),
        }
        for i in range(taus.size)
    ]


def sweep_trace_rows(
    omegas: Sequence[float],
    bases: Sequence[Basis],
    tau_min: float,
    tau_max: float,
    tau_step: float,
    cfg: IntegratorConfig,
    *,
    tau_over_omega: bool = False,
    valid_threshold: float = DEFAULT_VALID_THRESHOLD,
    max_workers: int = 1,
) -> list[dict[str, Any]]:
    """Rows for every (omega, basis) pair, omega-major, in input order."""
    tasks = [(w, b) for w in omegas for b in bases]

    def _one(task: tuple[float, Basis]) -> list[dict[str, Any]]:
        w, b = task
        return trace_rows(
            w, b, tau_min, tau_max, tau_step, cfg,
            tau_over_omega=tau_over_omega, valid_threshold=valid_threshold,
        )

    blocks = run_sweep(_one, tasks, max_workers=max_workers, label="trace")
    return [row for block in blocks for row in block]


def times_rows(omegas: Sequence[float], epsilon: float, *, max_workers: int = 1) -> list[dict[str, Any]]:
    return [row.as_record() for row in times_table(omegas, epsilon, max_workers=max_workers)]


__all__ = [
    "TRACE_VALUE_COLUMNS",
    "TIMES_COLUMNS",
    "trace_columns",
    "trace_rows",
    "sweep_trace_rows",
    "times_rows",
]
