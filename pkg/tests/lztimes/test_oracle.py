from __future__ import annotations

import math

import numpy as np
import pytest

from lztimes.approx import pd_approx
from lztimes.config import IntegratorConfig
from lztimes.engine import (
    ProbabilityTrace,
    TraceSource,
    engine_trace,
    integrate_schrodinger_from_crossing,
    integrate_schrodinger_oracle,
    oracle_error_floor,
    rotate_trace_to_adiabatic,
    uniform_grid,
)
from lztimes.errors import DomainError
from lztimes.model import Basis, LzParams, boundary_values, p_infinity

LOOSE = IntegratorConfig(rel_tol=1e-8, abs_tol=1e-10)


def test_oracle_must_start_before_the_crossing() -> None:
    with pytest.raises(DomainError):
        integrate_schrodinger_oracle(LzParams(1.0), 0.0, LOOSE)
    with pytest.raises(DomainError):
        integrate_schrodinger_oracle(LzParams(1.0), -5.0, LOOSE, taus=[-6.0, 0.0])


def test_oracle_rejects_negative_coupling() -> None:
    with pytest.raises(DomainError):
        integrate_schrodinger_oracle(-0.5, -5.0, LOOSE)


def test_decoupled_states_never_transition() -> None:
    trace = integrate_schrodinger_oracle(0.0, -10.0, LOOSE, taus=uniform_grid(-10.0, 10.0, 0.5))
    assert np.all(trace.p == 0.0)


def test_oracle_conserves_the_norm() -> None:
    trace = integrate_schrodinger_oracle(LzParams(0.7), -10.0, LOOSE, taus=uniform_grid(-10.0, 10.0, 0.05))
    norm = np.sum(np.abs(trace.amplitudes) ** 2, axis=0)
    assert np.max(np.abs(norm - 1.0)) <= 100.0 * LOOSE.rel_tol
    assert trace.source is TraceSource.SCHRODINGER_ORACLE
    assert trace.p[0] == 0.0


def test_error_floor_is_the_inverse_distance() -> None:
    assert oracle_error_floor(1.0, -300.0) == pytest.approx(1.0 / math.hypot(300.0, 1.0))


def test_crossing_start_reproduces_exact_crossing_value(cfg) -> None:
    params = LzParams(0.8)
    trace = integrate_schrodinger_from_crossing(params, cfg, uniform_grid(-2.0, 2.0, 0.5))
    assert trace.p[trace.tau == 0.0][0] == pytest.approx(boundary_values(params, "d").p0, abs=1e-14)
    assert trace.amplitudes.shape == (2, 9)


def test_crossing_start_has_no_finite_start_transient(cfg) -> None:
    # Far before the crossing the exact P_d is the smooth 1/tau^2 wing.
    params = LzParams(0.5)
    grid = uniform_grid(-40.0, -20.0, 0.1)
    trace = integrate_schrodinger_from_crossing(params, cfg, grid)
    assert np.max(np.abs(trace.p - pd_approx(params, grid).p)) < 1e-4


def test_rotation_gives_the_adiabatic_crossing_value(cfg) -> None:
    params = LzParams(1.2)
    rotated = rotate_trace_to_adiabatic(integrate_schrodinger_from_crossing(params, cfg, [0.0]))
    assert rotated.basis is Basis.ADIABATIC
    assert rotated.p[0] == pytest.approx(boundary_values(params, "a").p0, abs=1e-12)


def test_rotation_needs_diabatic_amplitudes() -> None:
    bare = ProbabilityTrace(Basis.DIABATIC, 1.0, np.array([0.0, 1.0]), np.array([0.2, 0.3]), TraceSource.INVERSION_ODE)
    with pytest.raises(DomainError):
        rotate_trace_to_adiabatic(bare)


@pytest.mark.slow
def test_distant_start_reaches_the_asymptote() -> None:
    params = LzParams(1.0)
    trace = integrate_schrodinger_oracle(params, -300.0, LOOSE, taus=[-300.0, 50.0])
    estimate = pd_approx(params, 50.0)
    p_inf = p_infinity(params, Basis.DIABATIC)
    bound = (
        abs(estimate.nonoscillatory - p_inf)
        + (estimate.envelope_upper - estimate.nonoscillatory)
        + 1.5 * oracle_error_floor(1.0, -300.0)
    )
    assert abs(trace.p[-1] - p_inf) <= bound


@pytest.mark.slow
def test_distant_start_agrees_with_the_inversion_engine(cfg) -> None:
    params = LzParams(0.5)
    grid = uniform_grid(-10.0, 30.0, 0.05)
    oracle = integrate_schrodinger_oracle(params, -300.0, LOOSE, grid)
    engine = engine_trace(params, Basis.DIABATIC, grid, cfg)
    assert np.max(np.abs(oracle.p - engine.p)) <= 5e-3
