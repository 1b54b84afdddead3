"""Transition times measured from a sampled trace.

The oscillation amplitude at an extremum is half the distance between the
extremum and the mean of its two neighbouring extrema of the opposite kind;
the midline there is the mean of those two levels. Peaks are refined with a
three-point parabola.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np
from numpy.typing import NDArray
from scipy.signal import argrelextrema

from lztimes.config import DEFAULT_EPSILON
from lztimes.errors import DomainError, InsufficientHorizonError
from lztimes.logger import get_logger
from lztimes.times import TransitionTimes

from .trace import ProbabilityTrace

logger = get_logger(__name__, component="measure")

JumpRule = Literal["tangent", "threshold"]


@dataclass(frozen=True, eq=False)
class Extrema:
    """Refined local extrema of a trace, ordered in tau.

    ``amplitude`` and ``midline`` are NaN for the first and last extremum,
    which lack a neighbour on one side.
    """

    tau: NDArray[np.float64]
    p: NDArray[np.float64]
    is_max: NDArray[np.bool_]
    amplitude: NDArray[np.float64]
    midline: NDArray[np.float64]

    def __len__(self) -> int:
        return int(self.tau.size)

    @property
    def measured(self) -> NDArray[np.bool_]:
        """Extrema with both neighbours, i.e. a finite amplitude."""
        return np.isfinite(self.amplitude)


def _parabolic_peak(
    tau: NDArray[np.float64], p: NDArray[np.float64], idx: NDArray[np.intp]
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    a, b, r = p[idx - 1], p[idx], p[idx + 1]
    denom = a - 2.0 * b + r
    with np.errstate(divide="ignore", invalid="ignore"):
        offset = np.where(denom != 0.0, 0.5 * (a - r) / denom, 0.0)
    offset = np.clip(offset, -0.5, 0.5)
    step = 0.5 * (tau[idx + 1] - tau[idx - 1])
    return tau[idx] + offset * step, b - 0.25 * (a - r) * offset


def find_extrema(trace: ProbabilityTrace, tau_min: float = 0.0) -> Extrema:
    """Local maxima and minima of p for tau > tau_min."""
    mask = trace.tau > tau_min
    tau, p = trace.tau[mask], trace.p[mask]
    if tau.size < 3:
        empty = np.empty(0)
        return Extrema(empty, empty, np.empty(0, dtype=bool), empty, empty)

    maxima = argrelextrema(p, np.greater)[0]
    minima = argrelextrema(p, np.less)[0]
    idx = np.concatenate([maxima, minima])
    kind = np.concatenate([np.ones(maxima.size, bool), np.zeros(minima.size, bool)])
    order = np.argsort(idx, kind="stable")
    idx, kind = idx[order], kind[order]

    ext_tau, ext_p = _parabolic_peak(tau, p, idx)
    amplitude = np.full(idx.size, np.nan)
    midline = np.full(idx.size, np.nan)
    if idx.size >= 3:
        neighbours = 0.5 * (ext_p[:-2] + ext_p[2:])
        amplitude[1:-1] = 0.5 * np.abs(ext_p[1:-1] - neighbours)
        midline[1:-1] = 0.5 * (ext_p[1:-1] + neighbours)
    return Extrema(ext_tau, ext_p, kind, amplitude, midline)


# ---------------------------------------------------------------------------
# Individual measurements
# ---------------------------------------------------------------------------


def measure_relaxation(extrema: Extrema, floor: float) -> Optional[float]:
    """Last time the amplitude is at or above *floor*, log-interpolated to the
    crossing with the next (smaller) amplitude. ``None`` if never reached."""
    ok = extrema.measured & (extrema.amplitude > 0.0)
    tau, amp = extrema.tau[ok], extrema.amplitude[ok]
    above = np.nonzero(amp >= floor)[0]
    if above.size == 0:
        return None
    last = int(above[-1])
    if last == amp.size - 1:
        raise InsufficientHorizonError(
            f"oscillation amplitude {amp[-1]:.3g} still >= {floor:.3g} at tau={tau[-1]:.4g}"
        )
    la, lb = math.log(amp[last]), math.log(amp[last + 1])
    frac = (la - math.log(floor)) / (la - lb) if la != lb else 0.0
    return float(tau[last] + frac * (tau[last + 1] - tau[last]))


def tangent_slope_at_crossing(trace: ProbabilityTrace) -> float:
    """Finite-difference dp/dtau at tau = 0."""
    if trace.tau.size < 3 or not trace.tau[0] < 0.0 < trace.tau[-1]:
        raise DomainError("trace must straddle tau = 0 to measure the crossing slope")
    slope = np.gradient(trace.p, trace.tau)
    return float(np.interp(0.0, trace.tau, slope))


def _first_crossing(tau: NDArray[np.float64], p: NDArray[np.float64], level: float) -> Optional[float]:
    """First tau where p rises through *level*, linearly interpolated."""
    hit = np.nonzero(p >= level)[0]
    if hit.size == 0:
        return None
    i = int(hit[0])
    if i == 0:
        raise InsufficientHorizonError(f"trace starts above the level {level:.3g}")
    return float(tau[i - 1] + (level - p[i - 1]) * (tau[i] - tau[i - 1]) / (p[i] - p[i - 1]))


def _midline_settles(extrema: Extrema, p_inf: float, epsilon: float) -> Optional[float]:
    """First tau at which the midline enters the band |m - p_inf| <= eps p_inf."""
    ok = extrema.measured
    tau, mid = extrema.tau[ok], extrema.midline[ok]
    if tau.size == 0:
        return None
    distance = np.abs(mid - p_inf) - epsilon * p_inf
    inside = np.nonzero(distance <= 0.0)[0]
    if inside.size == 0:
        return None
    i = int(inside[0])
    if i == 0:
        return float(tau[0])
    d0, d1 = distance[i - 1], distance[i]
    return float(tau[i - 1] + d0 / (d0 - d1) * (tau[i] - tau[i - 1]))


def fit_decay_exponent(extrema: Extrema, tau_range: tuple[float, float]) -> float:
    """Slope of log(amplitude) against log(tau) over *tau_range*."""
    lo, hi = tau_range
    ok = extrema.measured & (extrema.tau >= lo) & (extrema.tau <= hi) & (extrema.amplitude > 0.0)
    if np.count_nonzero(ok) < 2:
        raise InsufficientHorizonError(f"fewer than two extrema inside tau range {tau_range}")
    slope, _ = np.polyfit(np.log(extrema.tau[ok]), np.log(extrema.amplitude[ok]), 1)
    return float(slope)


# ---------------------------------------------------------------------------
# Combined
# ---------------------------------------------------------------------------


def measure_times_numeric(
    trace: ProbabilityTrace,
    p_inf: float,
    epsilon: float = DEFAULT_EPSILON,
    *,
    jump_rule: JumpRule = "tangent",
) -> TransitionTimes:
    """Jump and relaxation times read off a trace.

    relax: last time the oscillation amplitude is >= epsilon * p_inf.
    jump, rule "tangent": p_inf / p'(0), the span of the tangent at the
    crossing between 0 and p_inf. Rule "threshold": the window opens where p
    first reaches epsilon * p_inf and closes where the midline first comes
    within epsilon * p_inf of p_inf (for a falling adiabatic trace that is
    the (1 + epsilon) * p_inf crossing).
    """
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    if not p_inf > 0.0:
        raise DomainError(f"p_inf must be positive, got {p_inf!r}")

    extrema = find_extrema(trace, tau_min=0.0)
    relax = measure_relaxation(extrema, epsilon * p_inf)

    if jump_rule == "tangent":
        slope = tangent_slope_at_crossing(trace)
        jump = p_inf / slope if slope > 0.0 else None
        result = TransitionTimes(basis=trace.basis, epsilon=epsilon, jump=jump, relax=relax)
    elif jump_rule == "threshold":
        before = trace.tau <= 0.0
        initial = _first_crossing(trace.tau[before], trace.p[before], epsilon * p_inf)
        final = _midline_settles(extrema, p_inf, epsilon)
        jump = final - initial if initial is not None and final is not None else None
        result = TransitionTimes(
            basis=trace.basis,
            epsilon=epsilon,
            jump=jump,
            jump_initial=initial,
            jump_final=final,
            relax=relax,
        )
    else:
        raise DomainError(f"unknown jump rule {jump_rule!r}")

    logger.debug(
        "times_measured",
        omega=trace.omega,
        basis=trace.basis.value,
        extrema=len(extrema),
        jump=result.jump,
        relax=result.relax,
    )
    return result


__all__ = [
    "JumpRule",
    "Extrema",
    "find_extrema",
    "measure_relaxation",
    "tangent_slope_at_crossing",
    "fit_decay_exponent",
    "measure_times_numeric",
]
