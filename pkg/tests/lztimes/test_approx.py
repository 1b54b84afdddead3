from __future__ import annotations

import math

import numpy as np
import pytest

from lztimes.approx import approx_for, oscillation_amplitude, pa_approx, pd_approx, phase_xi
from lztimes.model import Basis, LzParams, p_infinity
from lztimes.specialfn import log_gamma_arg


def test_phase_at_the_crossing() -> None:
    w = 0.8
    expected = -0.5 * w * w + w * w * math.log(w / math.sqrt(2.0)) + math.pi / 4 + log_gamma_arg(1.0 - 0.5j * w * w)
    assert phase_xi(LzParams(w), 0.0) == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize("tau", [-30.0, -2.0, 0.5, 4.0, 25.0])
def test_phase_derivative_is_twice_the_half_gap(tau: float) -> None:
    params = LzParams(0.7)
    h = 1e-4
    numeric = (phase_xi(params, tau + h) - phase_xi(params, tau - h)) / (2.0 * h)
    assert numeric == pytest.approx(2.0 * math.hypot(tau, 0.7), rel=1e-7)


def test_phase_stays_finite_far_before_the_crossing() -> None:
    xi = phase_xi(LzParams(1.0), np.array([-1e8, -1e4, -10.0]))
    assert np.all(np.isfinite(xi))


def test_oscillation_vanishes_before_the_crossing() -> None:
    amp = oscillation_amplitude(LzParams(1.0), np.array([-5.0, -0.01, 0.0, 3.0]), Basis.DIABATIC)
    assert amp[0] == 0.0 and amp[1] == 0.0
    assert amp[2] > 0.0 and amp[3] > 0.0


def test_adiabatic_amplitude_decays_as_inverse_cube() -> None:
    params = LzParams(2.0)
    a10, a20 = oscillation_amplitude(params, np.array([100.0, 200.0]), Basis.ADIABATIC)
    assert a10 / a20 == pytest.approx(8.0, rel=1e-3)


def test_scalar_input_gives_scalar_output() -> None:
    estimate = pd_approx(LzParams(0.5), 3.0)
    assert isinstance(estimate.p, float)
    assert isinstance(estimate.valid, bool)
    grid = pd_approx(LzParams(0.5), np.linspace(-3.0, 3.0, 7))
    assert grid.p.shape == (7,)


def test_diabatic_estimate_before_the_crossing_is_smooth() -> None:
    params = LzParams(0.5)
    tau = np.array([-8.0, -2.0])
    estimate = pd_approx(params, tau)
    np.testing.assert_allclose(estimate.p, 0.5 + 0.5 * tau / np.hypot(tau, 0.5), rtol=1e-14)
    np.testing.assert_array_equal(estimate.envelope_upper, estimate.envelope_lower)


def test_envelopes_bracket_the_estimate() -> None:
    params = LzParams(1.0)
    tau = np.linspace(0.0, 30.0, 301)
    for estimate in (pd_approx(params, tau), pa_approx(params, tau)):
        assert np.all(estimate.envelope_lower <= estimate.p + 1e-15)
        assert np.all(estimate.p <= estimate.envelope_upper + 1e-15)


@pytest.mark.parametrize("omega", [0.2, 1.0, 2.5])
def test_estimates_approach_the_asymptotes(omega: float) -> None:
    params = LzParams(omega)
    assert pd_approx(params, 1e6).p == pytest.approx(p_infinity(params, "d"), abs=1e-5)
    assert pa_approx(params, 1e6).p == pytest.approx(p_infinity(params, "a"), abs=1e-12)


def test_adiabatic_estimate_vanishes_far_before_the_crossing() -> None:
    assert pa_approx(LzParams(1.0), -1e3).p == pytest.approx(0.0, abs=1e-15)


def test_validity_flag_follows_the_threshold() -> None:
    params = LzParams(0.5)
    valid = pd_approx(params, np.array([0.0, 0.8, 0.9])).valid
    np.testing.assert_array_equal(valid, [False, False, True])
    strict = pd_approx(params, np.array([0.9]), valid_threshold=4.0).valid
    np.testing.assert_array_equal(strict, [False])


def test_dispatch_by_basis() -> None:
    params = LzParams(1.0)
    assert approx_for(params, "d", 2.0).p == pd_approx(params, 2.0).p
    assert approx_for(params, Basis.ADIABATIC, 2.0).p == pa_approx(params, 2.0).p


def test_scalar_output_types_are_builtin() -> None:
    params = LzParams(1.2)
    for estimate in (pd_approx(params, 0.0), pa_approx(params, -4.0), pd_approx(params, np.float64(2.0))):
        for value in (estimate.p, estimate.envelope_upper, estimate.envelope_lower, estimate.nonoscillatory):
            assert type(value) is float
        assert type(estimate.valid) is bool


# ---------------------------------------------------------------------------
# Shape of the estimates
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("omega", [0.3, 1.0, 3.0])
def test_diabatic_amplitude_halves_when_tau_doubles(omega: float) -> None:
    params = LzParams(omega)
    taus = np.array([10.0, 100.0, 1000.0, 1e4])
    ratio = oscillation_amplitude(params, 2.0 * taus, Basis.DIABATIC) / oscillation_amplitude(params, taus, Basis.DIABATIC)
    np.testing.assert_allclose(ratio, np.hypot(taus, omega) / np.hypot(2.0 * taus, omega), rtol=1e-14)
    assert np.all(np.diff(np.abs(ratio - 0.5)) < 0.0)
    assert ratio[-1] == pytest.approx(0.5, rel=1e-6)


@pytest.mark.parametrize("omega", [0.1, 0.8, 2.0])
def test_diabatic_smooth_part_is_continuous_at_the_crossing(omega: float) -> None:
    params = LzParams(omega)
    assert pd_approx(params, -1e-12).nonoscillatory == pytest.approx(pd_approx(params, 0.0).nonoscillatory, abs=1e-11)
    # The full estimate may only jump by the oscillation switching on.
    jump = abs(pd_approx(params, 0.0).p - pd_approx(params, -1e-12).p)
    assert jump <= oscillation_amplitude(params, 0.0, Basis.DIABATIC) + 1e-11


@pytest.mark.parametrize("omega", [0.5, 1.0, 2.0])
def test_adiabatic_smooth_part_approaches_the_asymptote_from_above(omega: float) -> None:
    params = LzParams(omega)
    smooth = pa_approx(params, np.linspace(0.01, 20.0, 400)).nonoscillatory
    assert np.all(smooth > p_infinity(params, Basis.ADIABATIC))
    assert np.all(np.diff(smooth) < 0.0)
