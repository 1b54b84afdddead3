"""Acceptance checks. Each returns a Measurement whose ``measured`` value is
compared against the registered threshold (smaller is better)."""

from __future__ import annotations

import math
from threading import RLock

import numpy as np
from cachetools import LRUCache, cached

from lztimes.approx import pd_approx
from lztimes.config import IntegratorConfig
from lztimes.engine import (
    ProbabilityTrace,
    engine_trace,
    find_extrema,
    fit_decay_exponent,
    integrate_schrodinger_from_crossing,
    integrate_schrodinger_oracle,
    measure_times_numeric,
    rotate_trace_to_adiabatic,
    uniform_grid,
)
from lztimes.model import Basis, LzParams, boundary_values, p_infinity
from lztimes.specialfn import chi_exact, chi_series
from lztimes.times import (
    jump_time_adiabatic_large,
    jump_time_diabatic,
    p_infinity_pair,
    relax_time_adiabatic,
    relax_time_diabatic,
)

from .registry import Measurement

ORACLE_TAU_INITIAL = -300.0
COMPARISON_WINDOW = (-10.0, 30.0)
COMPARISON_STEP = 0.05

# Several checks share a trace; keep the recent ones.
_trace_cache: LRUCache = LRUCache(maxsize=16)
_trace_lock = RLock()


@cached(_trace_cache, lock=_trace_lock)
def _engine_window(
    omega: float, basis: str, tau_min: float, tau_max: float, cfg: IntegratorConfig
) -> ProbabilityTrace:
    grid = uniform_grid(tau_min, tau_max, cfg.sample_step)
    return engine_trace(LzParams(omega), Basis.parse(basis), grid, cfg)


def clear_trace_cache() -> None:
    with _trace_lock:
        _trace_cache.clear()


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------


def check_probability_sum(cfg: IntegratorConfig, epsilon: float) -> Measurement:
    worst = 0.0
    for w in np.linspace(0.05, 5.0, 50):
        pd, pa = p_infinity_pair(LzParams(float(w)))
        worst = max(worst, abs(pd + pa - 1.0))
    return Measurement(worst, f"max |P_d + P_a - 1| = {worst:.3g}")


def check_jump_time_small_omega(cfg: IntegratorConfig, epsilon: float) -> Measurement:
    value = jump_time_diabatic(LzParams(0.03))
    target = math.sqrt(2.0 * math.pi)
    return Measurement(abs(value / target - 1.0), f"jump_d(0.03) = {value:.6g}, sqrt(2 pi) = {target:.6g}")


def check_jump_time_large_omega(cfg: IntegratorConfig, epsilon: float) -> Measurement:
    ratios = {w: jump_time_diabatic(LzParams(w)) / (2.0 * w) for w in (5.0, 10.0)}
    worst = max(abs(r - 1.0) for r in ratios.values())
    detail = ", ".join(f"jump_d/2w at {w:g} = {r:.6f}" for w, r in ratios.items())
    return Measurement(worst, detail)


def check_relax_threshold(cfg: IntegratorConfig, epsilon: float) -> Measurement:
    critical = math.sqrt(math.log1p(1.0 / epsilon**2) / math.pi)
    grid = np.concatenate([
        np.linspace(0.05, 3.0, 300),
        critical * np.array([1.0 - 1e-9, 1.0 + 1e-9]),
    ])
    mismatches = [
        float(w) for w in grid
        if (relax_time_diabatic(LzParams(float(w)), epsilon) is None) != (w > critical)
    ]
    detail = f"omega_c = {critical:.6f}"
    if mismatches:
        detail += f"; mismatches at {mismatches[:5]}"
    return Measurement(float(len(mismatches)), detail)


def check_chi_expansions(cfg: IntegratorConfig, epsilon: float) -> Measurement:
    worst, where = 0.0, 0.0
    for w in np.concatenate([np.linspace(0.05, 0.3, 26), np.linspace(3.0, 10.0, 36)]):
        w = float(w)
        bound = 10.0 * (w**10 if w <= 0.3 else w**-10)
        ratio = abs(chi_series(w).value - chi_exact(w).value) / bound
        if ratio > worst:
            worst, where = ratio, w
    return Measurement(worst, f"worst |series - exact| / bound = {worst:.3g} at omega = {where:.4g}")


def check_adiabatic_jump_relax_ratio(cfg: IntegratorConfig, epsilon: float) -> Measurement:
    target = (16.0 * epsilon) ** (1.0 / 6.0)
    ratios = {}
    for w in (3.0, 4.0):
        params = LzParams(w)
        ratios[w] = jump_time_adiabatic_large(params, epsilon).jump / relax_time_adiabatic(params, epsilon)
    worst = max(abs(r / target - 1.0) for r in ratios.values())
    detail = ", ".join(f"ratio at {w:g} = {r:.5f}" for w, r in ratios.items()) + f" (target {target:.5f})"
    return Measurement(worst, detail)


# ---------------------------------------------------------------------------
# Engine
# ---------------------------------------------------------------------------


def check_engine_crossing_value(cfg: IntegratorConfig, epsilon: float) -> Measurement:
    worst = 0.0
    for w in (0.3, 1.0, 2.0):
        params = LzParams(w)
        trace = _engine_window(w, "diabatic", -1.0, 1.0, cfg)
        p0 = float(trace.p[trace.tau == 0.0][0])
        worst = max(worst, abs(p0 - boundary_values(params, Basis.DIABATIC).p0))
    return Measurement(worst, f"max |P_d(0) - exact| = {worst:.3g}")


def check_engine_asymptote(cfg: IntegratorConfig, epsilon: float) -> Measurement:
    params = LzParams(1.0)
    trace = _engine_window(1.0, "diabatic", 0.0, 40.0, cfg)
    p_inf = p_infinity(params, Basis.DIABATIC)
    estimate = pd_approx(params, 40.0)
    bound = abs(estimate.nonoscillatory - p_inf) + (estimate.envelope_upper - estimate.nonoscillatory)
    deviation = abs(float(trace.p[-1]) - p_inf)
    return Measurement(deviation / bound, f"|P_d(40) - P_d(inf)| = {deviation:.4g}, bound = {bound:.4g}")


def check_relax_numeric(cfg: IntegratorConfig, epsilon: float) -> Measurement:
    params = LzParams(0.5)
    trace = _engine_window(0.5, "diabatic", -5.0, 40.0, cfg)
    measured = measure_times_numeric(trace, p_infinity(params, Basis.DIABATIC), epsilon).relax
    closed = relax_time_diabatic(params, epsilon)
    if measured is None or closed is None:
        return Measurement(math.inf, f"relaxation time absent (measured={measured}, closed={closed})")
    return Measurement(abs(measured / closed - 1.0), f"measured {measured:.4f}, closed form {closed:.4f}")


def check_adiabatic_decay_exponent(cfg: IntegratorConfig, epsilon: float) -> Measurement:
    trace = _engine_window(2.0, "adiabatic", -15.0, 40.0, cfg)
    slope = fit_decay_exponent(find_extrema(trace, tau_min=0.0), (3.0, 30.0))
    return Measurement(abs(slope + 3.0), f"slope = {slope:.4f}")


def check_adiabatic_jump_final(cfg: IntegratorConfig, epsilon: float) -> Measurement:
    params = LzParams(2.0)
    trace = _engine_window(2.0, "adiabatic", -15.0, 40.0, cfg)
    measured = measure_times_numeric(
        trace, p_infinity(params, Basis.ADIABATIC), epsilon, jump_rule="threshold"
    ).jump_final
    closed = jump_time_adiabatic_large(params, epsilon).jump_final
    if measured is None or closed is None:
        return Measurement(math.inf, "final jump time not found")
    return Measurement(abs(measured / closed - 1.0), f"measured {measured:.4f}, closed form {closed:.4f}")


# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------


def check_oracle_equivalence(cfg: IntegratorConfig, epsilon: float) -> Measurement:
    oracle_cfg = cfg.model_copy(
        update={"rel_tol": max(cfg.rel_tol, 1e-8), "abs_tol": max(cfg.abs_tol, 1e-10)}
    )
    grid = uniform_grid(*COMPARISON_WINDOW, COMPARISON_STEP)
    worst, parts = 0.0, []
    for w in (0.3, 0.5, 1.0):
        params = LzParams(w)
        engine = engine_trace(params, Basis.DIABATIC, grid, cfg)
        oracle = integrate_schrodinger_oracle(params, ORACLE_TAU_INITIAL, oracle_cfg, grid)
        gap = float(np.max(np.abs(engine.p - oracle.p)))
        scaled = gap * math.hypot(ORACLE_TAU_INITIAL, w)
        worst = max(worst, scaled)
        parts.append(f"{w:g}: {gap:.3g}")
    return Measurement(worst, "max |dP| " + ", ".join(parts))


def check_cross_basis(cfg: IntegratorConfig, epsilon: float) -> Measurement:
    grid = uniform_grid(*COMPARISON_WINDOW, COMPARISON_STEP)
    worst, parts = 0.0, []
    for w in (0.3, 1.0, 2.0):
        params = LzParams(w)
        rotated = rotate_trace_to_adiabatic(integrate_schrodinger_from_crossing(params, cfg, grid))
        engine = engine_trace(params, Basis.ADIABATIC, grid, cfg)
        gap = float(np.max(np.abs(engine.p - rotated.p)))
        worst = max(worst, gap)
        parts.append(f"{w:g}: {gap:.3g}")
    return Measurement(worst, "max |dP_a| " + ", ".join(parts))


__all__ = [
    "clear_trace_cache",
    "check_probability_sum",
    "check_jump_time_small_omega",
    "check_jump_time_large_omega",
    "check_relax_threshold",
    "check_chi_expansions",
    "check_adiabatic_jump_relax_ratio",
    "check_engine_crossing_value",
    "check_engine_asymptote",
    "check_relax_numeric",
    "check_adiabatic_decay_exponent",
    "check_adiabatic_jump_final",
    "check_oracle_equivalence",
    "check_cross_basis",
]
