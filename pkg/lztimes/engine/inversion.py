"""Population-inversion integrators started at the crossing.

The diabatic inversion w = 2 P_d - 1 obeys the third-order equation

    tau w''' - w'' + 4 tau (omega^2 + tau^2) w' - 4 omega^2 w = 0

and the adiabatic inversion W = 2 P_a - 1, as a function of the mixing
angle theta (tau = omega cot 2 theta),

    W''' + 6 c W'' + 4 [4 omega^4 (c^2 + 1)^3 + 1] W' + 24 c W = 0,  c = cot 2 theta.

Both start from exact values at tau = 0, so no finite-start transient is
ever introduced. The diabatic equation is singular at tau = 0; the first
origin_offset of the trajectory comes from its Taylor series instead.
"""

from __future__ import annotations

import math
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import Polynomial
from numpy.typing import ArrayLike, NDArray
from scipy.integrate import solve_ivp

from lztimes.approx import pa_approx
from lztimes.config import IntegratorConfig
from lztimes.errors import DomainError, GuardBandError, IntegrationError
from lztimes.logger import get_logger
from lztimes.model import (
    Basis,
    LzParams,
    adiabatic_inversion_derivatives,
    inversion_derivatives,
    mixing_angle,
    tau_from_angle,
)

from .trace import ProbabilityTrace, TraceSource, check_grid, merge_traces, uniform_grid

logger = get_logger(__name__, component="engine")


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------


def _direction(direction: int) -> int:
    if direction not in (1, -1):
        raise DomainError(f"direction must be +1 or -1, got {direction!r}")
    return direction


def _directed_grid(taus: Optional[ArrayLike], sign: int, cfg: IntegratorConfig) -> NDArray[np.float64]:
    """Grid on one side of the crossing, ordered away from tau = 0."""
    if taus is None:
        grid = uniform_grid(0.0, cfg.tau_max, cfg.sample_step)
        return grid if sign > 0 else -grid + 0.0
    grid = check_grid(taus)
    if np.any(sign * grid < 0.0):
        side = "tau >= 0" if sign > 0 else "tau <= 0"
        raise DomainError(f"grid for direction {sign:+d} must satisfy {side}")
    return grid if sign > 0 else grid[::-1]


def _solve(
    fun: Callable[..., list[float]],
    start: float,
    t_eval: NDArray[np.float64],
    y0: NDArray[np.float64],
    cfg: IntegratorConfig,
    to_tau: Callable[[float], float],
    args: tuple = (),
) -> NDArray[np.float64]:
    """Run solve_ivp from *start* through *t_eval*; returns y sampled there."""
    sol = solve_ivp(
        fun,
        (start, float(t_eval[-1])),
        y0,
        method=cfg.method,
        t_eval=t_eval,
        rtol=cfg.rel_tol,
        atol=cfg.abs_tol,
        max_step=cfg.max_step,
        args=args,
    )
    if sol.status != 0:
        failed_at = to_tau(float(sol.t[-1])) if sol.t.size else to_tau(start)
        logger.error("integration_failed", message=sol.message, tau=failed_at)
        raise IntegrationError(f"integration failed: {sol.message}", tau=failed_at)
    logger.debug("integration_finished", nfev=int(sol.nfev), samples=int(t_eval.size))
    return sol.y


def _check_bounds(trace: ProbabilityTrace, cfg: IntegratorConfig) -> ProbabilityTrace:
    excess = trace.bound_violation()
    if excess > cfg.probability_slack:
        logger.warning(
            "probability_out_of_bounds",
            omega=trace.omega,
            basis=trace.basis.value,
            excess=excess,
            slack=cfg.probability_slack,
        )
    return trace


def _empty(basis: Basis, omega: float) -> ProbabilityTrace:
    return ProbabilityTrace(
        basis=basis,
        omega=omega,
        tau=np.empty(0),
        p=np.empty(0),
        source=TraceSource.INVERSION_ODE,
    )


# ---------------------------------------------------------------------------
# Diabatic basis
# ---------------------------------------------------------------------------


def diabatic_taylor_series(params: LzParams, order: int) -> Polynomial:
    """Taylor polynomial of w_d about tau = 0 up to tau**order.

    Differentiating the inversion equation once removes the 1/tau:
    w'''' = -4 (omega^2 + tau^2) w'' - 12 tau w', which yields a two-step
    recurrence for the coefficients beyond the four exact derivatives.
    """
    if order < 4:
        raise DomainError(f"taylor order must be >= 4, got {order}")
    w2 = params.omega * params.omega
    d0, d1, d2, d3 = inversion_derivatives(params)
    a = np.zeros(order + 1)
    a[:4] = (d0, d1, d2 / 2.0, d3 / 6.0)
    for n in range(order - 3):
        a[n + 4] = -(
            4.0 * w2 * (n + 2) * (n + 1) * a[n + 2] + 4.0 * n * (n + 2) * a[n]
        ) / ((n + 4) * (n + 3) * (n + 2) * (n + 1))
    return Polynomial(a)


def _diabatic_rhs(tau: float, y: NDArray[np.float64], w2: float) -> list[float]:
    w, dw, d2w = y
    d3w = (d2w - 4.0 * tau * (w2 + tau * tau) * dw + 4.0 * w2 * w) / tau
    return [dw, d2w, d3w]


def integrate_diabatic_inversion(
    params: LzParams,
    cfg: Optional[IntegratorConfig] = None,
    direction: int = 1,
    taus: Optional[ArrayLike] = None,
) -> ProbabilityTrace:
    """P_d on one side of the crossing from the inversion equation.

    *taus* must lie on the side selected by *direction* (+1: tau >= 0,
    -1: tau <= 0); by default the grid runs from 0 to +/- cfg.tau_max in
    steps of cfg.sample_step. Samples with |tau| <= cfg.origin_offset are
    taken from the Taylor series.
    """
    cfg = cfg or IntegratorConfig()
    sign = _direction(direction)
    grid = _directed_grid(taus, sign, cfg)

    series = diabatic_taylor_series(params, cfg.taylor_order)
    w = np.empty_like(grid)
    near = np.abs(grid) <= cfg.origin_offset
    w[near] = series(grid[near])

    far = ~near
    if np.any(far):
        start = sign * cfg.origin_offset
        y0 = np.array([series(start), series.deriv(1)(start), series.deriv(2)(start)])
        y = _solve(
            _diabatic_rhs,
            start,
            grid[far],
            y0,
            cfg,
            to_tau=lambda t: t,
            args=(params.omega * params.omega,),
        )
        w[far] = y[0]

    order = slice(None) if sign > 0 else slice(None, None, -1)
    trace = ProbabilityTrace(
        basis=Basis.DIABATIC,
        omega=params.omega,
        tau=grid[order],
        p=0.5 * (w[order] + 1.0),
        source=TraceSource.INVERSION_ODE,
    )
    logger.debug("diabatic_trace_done", omega=params.omega, direction=sign, samples=len(trace))
    return _check_bounds(trace, cfg)


# ---------------------------------------------------------------------------
# Adiabatic basis
# ---------------------------------------------------------------------------


def _adiabatic_rhs(theta: float, y: NDArray[np.float64], w4: float) -> list[float]:
    s = math.sin(2.0 * theta)
    c = math.cos(2.0 * theta) / s
    big, d1, d2 = y
    csc2 = 1.0 / (s * s)  # c^2 + 1
    d3 = -6.0 * c * d2 - 4.0 * (4.0 * w4 * csc2**3 + 1.0) * d1 - 24.0 * c * big
    return [d1, d2, d3]


def integrate_adiabatic_inversion(
    params: LzParams,
    cfg: Optional[IntegratorConfig] = None,
    direction: int = 1,
    taus: Optional[ArrayLike] = None,
) -> ProbabilityTrace:
    """P_a on one side of the crossing, integrating in the mixing angle.

    theta runs from pi/4 toward 0 (tau -> +inf) or pi/2 (tau -> -inf).
    Requested taus whose angle lies within cfg.theta_guard of either end
    are filled with the closed-form non-oscillatory tail when
    cfg.extrapolate_tail is set; otherwise GuardBandError is raised.
    """
    cfg = cfg or IntegratorConfig()
    sign = _direction(direction)
    grid = _directed_grid(taus, sign, cfg)
    theta = np.asarray(mixing_angle(params, grid), dtype=float).reshape(grid.shape)

    *initial, d3_exact = adiabatic_inversion_derivatives(params)
    y0 = np.asarray(initial)
    w4 = params.omega**4
    d3_rhs = _adiabatic_rhs(math.pi / 4, y0, w4)[2]
    if abs(d3_rhs - d3_exact) > 1e-9 * (1.0 + abs(d3_exact)):
        logger.warning("initial_third_derivative_mismatch", rhs=d3_rhs, exact=d3_exact)

    if sign > 0:
        guard_theta = cfg.theta_guard
        inside = theta >= guard_theta
    else:
        guard_theta = math.pi / 2 - cfg.theta_guard
        inside = theta <= guard_theta

    big = np.empty_like(grid)
    at_origin = grid == 0.0
    big[at_origin] = y0[0]

    integrate = inside & ~at_origin
    if np.any(integrate):
        y = _solve(
            _adiabatic_rhs,
            math.pi / 4,
            theta[integrate],
            y0,
            cfg,
            to_tau=lambda th: float(tau_from_angle(params, th)),
            args=(w4,),
        )
        big[integrate] = y[0]
    p = 0.5 * (big + 1.0)

    tail = ~inside
    if np.any(tail):
        guard_tau = float(tau_from_angle(params, guard_theta))
        if not cfg.extrapolate_tail:
            raise GuardBandError("mixing angle reached its guard band before the horizon", tau=guard_tau)
        logger.warning(
            "theta_guard_reached",
            omega=params.omega,
            tau=guard_tau,
            extrapolated=int(tail.sum()),
        )
        p[tail] = np.asarray(pa_approx(params, grid[tail]).nonoscillatory)

    order = slice(None) if sign > 0 else slice(None, None, -1)
    trace = ProbabilityTrace(
        basis=Basis.ADIABATIC,
        omega=params.omega,
        tau=grid[order],
        p=p[order],
        source=TraceSource.INVERSION_ODE,
        tail_mask=tail[order] if np.any(tail) else None,
    )
    logger.debug("adiabatic_trace_done", omega=params.omega, direction=sign, samples=len(trace))
    return _check_bounds(trace, cfg)


# ---------------------------------------------------------------------------
# Both sides
# ---------------------------------------------------------------------------


def engine_trace(
    params: LzParams,
    basis: Basis,
    taus: Optional[ArrayLike] = None,
    cfg: Optional[IntegratorConfig] = None,
) -> ProbabilityTrace:
    """Inversion-equation trace over a grid that may straddle the crossing."""
    cfg = cfg or IntegratorConfig()
    basis = Basis.parse(basis)
    grid = uniform_grid(-cfg.tau_max, cfg.tau_max, cfg.sample_step) if taus is None else check_grid(taus)
    integrate = integrate_diabatic_inversion if basis is Basis.DIABATIC else integrate_adiabatic_inversion

    before, after = grid[grid < 0.0], grid[grid >= 0.0]
    backward = integrate(params, cfg, -1, before) if before.size else _empty(basis, params.omega)
    forward = integrate(params, cfg, 1, after) if after.size else _empty(basis, params.omega)
    return merge_traces(backward, forward)


__all__ = [
    "diabatic_taylor_series",
    "integrate_diabatic_inversion",
    "integrate_adiabatic_inversion",
    "engine_trace",
]
