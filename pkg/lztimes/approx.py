"""Closed-form asymptotic evolutions of P_d(tau) and P_a(tau).

Both bases share the phase xi(tau). Before the crossing the estimates are
smooth; after it they are a non-oscillatory part plus a damped oscillation
whose amplitude falls off as 1/tau (diabatic) or 1/tau^3 (adiabatic). The
formulas hold for tau^2 + omega^2 >~ 1; tau = 0 belongs to the tau >= 0
branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from lztimes.config import DEFAULT_VALID_THRESHOLD
from lztimes.model import Basis, FloatOrArray, LzParams
from lztimes.specialfn import log_gamma_arg


@dataclass(frozen=True)
class EvolutionEstimate:
    """Closed-form estimate at one tau or on a grid of taus."""

    p: FloatOrArray
    envelope_upper: FloatOrArray
    envelope_lower: FloatOrArray
    nonoscillatory: FloatOrArray
    valid: bool | NDArray[np.bool_]


def _scalarize(estimate: EvolutionEstimate, scalar: bool) -> EvolutionEstimate:
    if not scalar:
        return estimate
    return EvolutionEstimate(
        p=np.asarray(estimate.p).item(),
        envelope_upper=np.asarray(estimate.envelope_upper).item(),
        envelope_lower=np.asarray(estimate.envelope_lower).item(),
        nonoscillatory=np.asarray(estimate.nonoscillatory).item(),
        valid=bool(np.asarray(estimate.valid).item()),
    )


def phase_xi(params: LzParams, tau: ArrayLike) -> FloatOrArray:
    """xi(tau) = -w^2/2 + w^2 ln[(tau + s)/sqrt 2] + tau s + pi/4 + arg Gamma(1 - i w^2/2),
    with s = sqrt(tau^2 + w^2)."""
    t = np.asarray(tau, dtype=float)
    w2 = params.omega * params.omega
    s = np.hypot(t, params.omega)
    # tau + s loses all digits for large negative tau; use w^2 / (s - tau) there.
    with np.errstate(divide="ignore", invalid="ignore"):
        lead = np.where(t >= 0.0, t + s, w2 / (s - t))
    xi = (
        -0.5 * w2
        + w2 * np.log(lead / math.sqrt(2.0))
        + t * s
        + math.pi / 4
        + log_gamma_arg(complex(1.0, -0.5 * w2))
    )
    return float(xi) if np.ndim(xi) == 0 else xi


def oscillation_amplitude(params: LzParams, tau: ArrayLike, basis: Basis) -> FloatOrArray:
    """Prefactor of the oscillating term after the crossing (0 before it)."""
    t = np.asarray(tau, dtype=float)
    s = np.hypot(t, params.omega)
    scale = math.exp(-0.5 * params.lz_exponent) * params.sqrt_transition * params.omega
    if Basis.parse(basis) is Basis.DIABATIC:
        amp = scale / s
    else:
        amp = scale / (2.0 * s**3)
    amp = np.where(t >= 0.0, amp, 0.0)
    return float(amp) if np.ndim(amp) == 0 else amp


def pd_approx(
    params: LzParams,
    tau: ArrayLike,
    *,
    valid_threshold: float = DEFAULT_VALID_THRESHOLD,
) -> EvolutionEstimate:
    """Diabatic transition probability estimate before/after the crossing."""
    t = np.asarray(tau, dtype=float)
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(t)
    w = params.omega
    s = np.hypot(t, w)
    ratio = t / s
    after = t >= 0.0

    before_p = 0.5 + 0.5 * ratio
    smooth = np.where(after, 0.5 + (0.5 - params.no_transition) * ratio, before_p)
    amp = np.asarray(oscillation_amplitude(params, t, Basis.DIABATIC))
    xi = np.asarray(phase_xi(params, t))
    p = smooth - amp * np.cos(xi)

    estimate = EvolutionEstimate(
        p=p,
        envelope_upper=smooth + amp,
        envelope_lower=smooth - amp,
        nonoscillatory=smooth,
        valid=(t * t + w * w) >= valid_threshold,
    )
    return _scalarize(estimate, scalar)


def pa_approx(
    params: LzParams,
    tau: ArrayLike,
    *,
    valid_threshold: float = DEFAULT_VALID_THRESHOLD,
) -> EvolutionEstimate:
    """Adiabatic transition probability estimate before/after the crossing."""
    t = np.asarray(tau, dtype=float)
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(t)
    w = params.omega
    s2 = t * t + w * w
    wing = w * w / (16.0 * s2**3)
    after = t >= 0.0

    e = params.no_transition
    smooth = np.where(after, e + (1.0 - 2.0 * e) * wing, wing)
    amp = np.asarray(oscillation_amplitude(params, t, Basis.ADIABATIC))
    xi = np.asarray(phase_xi(params, t))
    p = smooth + amp * np.sin(xi)

    estimate = EvolutionEstimate(
        p=p,
        envelope_upper=smooth + amp,
        envelope_lower=smooth - amp,
        nonoscillatory=smooth,
        valid=s2 >= valid_threshold,
    )
    return _scalarize(estimate, scalar)


def approx_for(
    params: LzParams,
    basis: Basis,
    tau: ArrayLike,
    *,
    valid_threshold: float = DEFAULT_VALID_THRESHOLD,
) -> EvolutionEstimate:
    """Dispatch to pd_approx or pa_approx."""
    if Basis.parse(basis) is Basis.DIABATIC:
        return pd_approx(params, tau, valid_threshold=valid_threshold)
    return pa_approx(params, tau, valid_threshold=valid_threshold)


__all__ = [
    "EvolutionEstimate",
    "phase_xi",
    "oscillation_amplitude",
    "pd_approx",
    "pa_approx",
    "approx_for",
]
