"""Direct integration of the two-amplitude Schrodinger equation.

i dc/dtau = [[-tau, omega], [omega, tau]] c

Used only to validate the inversion integrators. Started at a finite
tau_initial from c = (1, 0), the trace carries spurious oscillations of
amplitude ~ (tau_initial^2 + omega^2)^(-1/2); started at the crossing from
the exact amplitudes it carries none.
"""

from __future__ import annotations

import math
from typing import Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.integrate import solve_ivp

from lztimes.config import IntegratorConfig
from lztimes.errors import DomainError, IntegrationError
from lztimes.logger import get_logger
from lztimes.model import (
    Basis,
    LzParams,
    adiabatic_probability,
    crossing_amplitudes,
    mixing_angle,
)

from .trace import ProbabilityTrace, TraceSource, check_grid, uniform_grid

logger = get_logger(__name__, component="oracle")


def _coupling(params: Union[LzParams, float]) -> float:
    # A bare float admits omega = 0 (decoupled states), which LzParams rejects.
    if isinstance(params, LzParams):
        return params.omega
    omega = float(params)
    if not (math.isfinite(omega) and omega >= 0.0):
        raise DomainError(f"oracle coupling must be finite and >= 0, got {params!r}")
    return omega


def _schrodinger_rhs(tau: float, c: NDArray[np.complex128], omega: float) -> list[complex]:
    c1, c2 = c
    return [-1j * (-tau * c1 + omega * c2), -1j * (omega * c1 + tau * c2)]


def _propagate(
    omega: float,
    tau0: float,
    c0: NDArray[np.complex128],
    grid: NDArray[np.float64],
    cfg: IntegratorConfig,
) -> NDArray[np.complex128]:
    """Amplitudes on *grid*, which is ordered away from *tau0*."""
    out = np.empty((2, grid.size), dtype=complex)
    at_start = grid == tau0
    out[:, at_start] = c0[:, None]
    rest = grid[~at_start]
    if rest.size:
        sol = solve_ivp(
            _schrodinger_rhs,
            (tau0, float(rest[-1])),
            c0,
            method=cfg.method,
            t_eval=rest,
            rtol=cfg.rel_tol,
            atol=cfg.abs_tol,
            max_step=cfg.max_step,
            args=(omega,),
        )
        if sol.status != 0:
            failed_at = float(sol.t[-1]) if sol.t.size else tau0
            logger.error("oracle_failed", message=sol.message, tau=failed_at)
            raise IntegrationError(f"oracle integration failed: {sol.message}", tau=failed_at)
        out[:, ~at_start] = sol.y
        logger.debug("oracle_finished", omega=omega, nfev=int(sol.nfev), samples=int(rest.size))
    return out


def _norm_drift(amps: NDArray[np.complex128]) -> float:
    return float(np.max(np.abs(np.sum(np.abs(amps) ** 2, axis=0) - 1.0)))


def oracle_error_floor(omega: float, tau_initial: float) -> float:
    """Amplitude of the spurious oscillations from a finite start."""
    return 1.0 / math.hypot(tau_initial, omega)


def integrate_schrodinger_oracle(
    params: Union[LzParams, float],
    tau_initial: float,
    cfg: Optional[IntegratorConfig] = None,
    taus: Optional[ArrayLike] = None,
) -> ProbabilityTrace:
    """|c2|^2 from c = (1, 0) at *tau_initial*; the trace keeps the amplitudes."""
    cfg = cfg or IntegratorConfig()
    omega = _coupling(params)
    if not tau_initial < 0.0:
        raise DomainError(f"oracle must start before the crossing, got tau_initial={tau_initial}")
    grid = (
        uniform_grid(tau_initial, cfg.tau_max, cfg.sample_step)
        if taus is None
        else check_grid(taus)
    )
    if grid[0] < tau_initial:
        raise DomainError(f"grid starts at {grid[0]}, before tau_initial={tau_initial}")

    amps = _propagate(omega, tau_initial, np.array([1.0, 0.0], dtype=complex), grid, cfg)
    logger.debug(
        "oracle_trace_done",
        omega=omega,
        tau_initial=tau_initial,
        norm_drift=_norm_drift(amps),
        error_floor=oracle_error_floor(omega, tau_initial),
    )
    return ProbabilityTrace(
        basis=Basis.DIABATIC,
        omega=omega,
        tau=grid,
        p=np.abs(amps[1]) ** 2,
        source=TraceSource.SCHRODINGER_ORACLE,
        amplitudes=amps,
    )


def integrate_schrodinger_from_crossing(
    params: LzParams,
    cfg: Optional[IntegratorConfig] = None,
    taus: Optional[ArrayLike] = None,
) -> ProbabilityTrace:
    """Amplitudes propagated both ways from their exact values at tau = 0."""
    cfg = cfg or IntegratorConfig()
    grid = (
        uniform_grid(-cfg.tau_max, cfg.tau_max, cfg.sample_step)
        if taus is None
        else check_grid(taus)
    )
    c0 = crossing_amplitudes(params)
    before = grid < 0.0
    amps = np.empty((2, grid.size), dtype=complex)
    if np.any(before):
        amps[:, before] = _propagate(params.omega, 0.0, c0, grid[before][::-1], cfg)[:, ::-1]
    if np.any(~before):
        amps[:, ~before] = _propagate(params.omega, 0.0, c0, grid[~before], cfg)
    logger.debug("crossing_oracle_done", omega=params.omega, norm_drift=_norm_drift(amps))
    return ProbabilityTrace(
        basis=Basis.DIABATIC,
        omega=params.omega,
        tau=grid,
        p=np.abs(amps[1]) ** 2,
        source=TraceSource.SCHRODINGER_ORACLE,
        amplitudes=amps,
    )


def rotate_trace_to_adiabatic(trace: ProbabilityTrace) -> ProbabilityTrace:
    """Adiabatic transition probability from a trace that carries amplitudes."""
    if trace.amplitudes is None:
        raise DomainError("trace has no amplitudes to rotate")
    if trace.basis is not Basis.DIABATIC:
        raise DomainError("only diabatic amplitudes can be rotated")
    params = LzParams(trace.omega)
    # Integrator drift is removed before the rotation's unit-norm check.
    norm = np.sqrt(np.sum(np.abs(trace.amplitudes) ** 2, axis=0))
    amps = trace.amplitudes / norm
    theta = np.asarray(mixing_angle(params, trace.tau), dtype=float).reshape(trace.tau.shape)
    p = np.asarray(adiabatic_probability(amps, theta), dtype=float).reshape(trace.tau.shape)
    return ProbabilityTrace(
        basis=Basis.ADIABATIC,
        omega=trace.omega,
        tau=trace.tau,
        p=p,
        source=trace.source,
        amplitudes=trace.amplitudes,
    )


__all__ = [
    "oracle_error_floor",
    "integrate_schrodinger_oracle",
    "integrate_schrodinger_from_crossing",
    "rotate_trace_to_adiabatic",
]
