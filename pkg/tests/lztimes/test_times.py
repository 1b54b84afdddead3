from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lztimes.approx import pd_approx
from lztimes.errors import DomainError, RegimeError
from lztimes.model import Basis, LzParams, boundary_values, p_infinity
from lztimes.times import (
    TransitionTimes,
    envelope_touch_time_diabatic,
    jump_time_adiabatic_large,
    jump_time_adiabatic_small,
    jump_time_diabatic,
    p_infinity_pair,
    recommended_jump_adiabatic,
    relax_time_adiabatic,
    relax_time_diabatic,
    tangent_window_diabatic,
    times_row,
    times_table,
)

EPS = 0.1
CRITICAL_OMEGA = math.sqrt(math.log1p(1.0 / EPS**2) / math.pi)


# ---------------------------------------------------------------------------
# Result type
# ---------------------------------------------------------------------------


def test_transition_times_sign_rules() -> None:
    TransitionTimes(Basis.ADIABATIC, EPS, jump=1.0, jump_initial=-0.5, jump_final=0.5, relax=2.0)
    with pytest.raises(DomainError):
        TransitionTimes(Basis.DIABATIC, EPS, jump=-1.0)
    with pytest.raises(DomainError):
        TransitionTimes(Basis.ADIABATIC, EPS, jump_initial=0.1)
    with pytest.raises(DomainError):
        TransitionTimes(Basis.ADIABATIC, EPS, relax=-0.1)


def test_transition_times_parse_basis() -> None:
    assert TransitionTimes("a", EPS).basis is Basis.ADIABATIC


# ---------------------------------------------------------------------------
# Diabatic
# ---------------------------------------------------------------------------


def test_diabatic_jump_weak_coupling_limit() -> None:
    assert jump_time_diabatic(LzParams(0.03)) == pytest.approx(math.sqrt(2.0 * math.pi), rel=0.01)


def test_diabatic_jump_strong_coupling_limit() -> None:
    assert jump_time_diabatic(LzParams(10.0)) == pytest.approx(20.0, rel=0.01)


@settings(max_examples=80, deadline=None)
@given(st.floats(min_value=0.01, max_value=8.0))
def test_diabatic_jump_times_slope_is_the_final_probability(omega: float) -> None:
    params = LzParams(omega)
    product = jump_time_diabatic(params) * boundary_values(params, Basis.DIABATIC).dp0
    assert product == pytest.approx(p_infinity(params, Basis.DIABATIC), rel=1e-12)


def test_diabatic_jump_per_coupling_approaches_two_monotonically() -> None:
    grid = np.geomspace(2.0, 20.0, 30)
    gaps = np.array([abs(jump_time_diabatic(LzParams(w)) / w - 2.0) for w in grid])
    assert np.all(np.diff(gaps) < 0.0)
    assert gaps[-1] < 1e-3


def test_tangent_window_spans_the_jump_time() -> None:
    params = LzParams(0.8)
    start, end = tangent_window_diabatic(params)
    assert start < 0.0 < end
    assert end - start == pytest.approx(jump_time_diabatic(params), rel=1e-12)


def test_diabatic_relaxation_value() -> None:
    params = LzParams(0.5)
    x = math.pi * 0.25
    expected = 0.5 * math.sqrt(1.0 / (EPS**2 * (math.exp(x) - 1.0)) - 1.0)
    assert relax_time_diabatic(params, EPS) == pytest.approx(expected, rel=1e-12)


def test_diabatic_relaxation_absent_above_critical_coupling() -> None:
    assert relax_time_diabatic(LzParams(CRITICAL_OMEGA * 0.99), EPS) is not None
    assert relax_time_diabatic(LzParams(CRITICAL_OMEGA * 1.01), EPS) is None
    assert relax_time_diabatic(LzParams(5.0), EPS) is None


def test_diabatic_relaxation_vanishes_at_the_critical_coupling() -> None:
    times = [relax_time_diabatic(LzParams(CRITICAL_OMEGA * (1.0 - d)), EPS) for d in (1e-3, 1e-6, 1e-12)]
    assert all(t is not None for t in times)
    assert times[0] > times[1] > times[2]
    assert times[2] < 1e-4


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=0.02, max_value=1.2))
def test_diabatic_relaxation_shrinks_with_coupling(omega: float) -> None:
    lower = relax_time_diabatic(LzParams(omega), EPS)
    higher = relax_time_diabatic(LzParams(omega * 1.05), EPS)
    assert lower is not None
    assert higher is None or higher < lower


@pytest.mark.parametrize("epsilon", [0.0, 1.0, -0.2, 1.5])
def test_thresholds_outside_unit_interval_are_rejected(epsilon: float) -> None:
    params = LzParams(1.0)
    with pytest.raises(DomainError):
        relax_time_diabatic(params, epsilon)
    with pytest.raises(DomainError):
        relax_time_adiabatic(params, epsilon)
    with pytest.raises(DomainError):
        jump_time_adiabatic_large(params, epsilon)


def test_envelope_touch_time_absent_for_weak_coupling() -> None:
    assert envelope_touch_time_diabatic(LzParams(0.3)) is None


@pytest.mark.parametrize("omega", [0.6, 1.0, 2.0])
def test_upper_envelope_touches_one_at_the_touch_time(omega: float) -> None:
    params = LzParams(omega)
    touch = envelope_touch_time_diabatic(params)
    assert touch is not None and touch > 0.0
    assert pd_approx(params, touch).envelope_upper == pytest.approx(1.0, abs=1e-12)
    around = pd_approx(params, np.linspace(0.0, 3.0 * touch, 301)).envelope_upper
    assert np.all(around <= 1.0 + 1e-12)


def test_envelope_touch_time_overflow_is_a_regime_error() -> None:
    with pytest.raises(RegimeError):
        envelope_touch_time_diabatic(LzParams(30.0))


# ---------------------------------------------------------------------------
# Adiabatic
# ---------------------------------------------------------------------------


def test_adiabatic_small_jump_value() -> None:
    assert jump_time_adiabatic_small(LzParams(0.1)) == pytest.approx(0.2 * math.exp(-0.005 * math.pi), rel=1e-14)


@pytest.mark.parametrize("omega", [0.02, 0.1, 0.4, 0.8, 1.0])
def test_adiabatic_small_jump_times_slope_is_the_final_probability(omega: float) -> None:
    params = LzParams(omega)
    product = jump_time_adiabatic_small(params) * boundary_values(params, Basis.ADIABATIC).dp0
    assert product == pytest.approx(p_infinity(params, Basis.ADIABATIC), rel=1e-12)


def test_adiabatic_small_jump_against_diabatic_for_weak_coupling() -> None:
    params = LzParams(0.03)
    ratio = jump_time_adiabatic_small(params) / jump_time_diabatic(params)
    assert ratio == pytest.approx(2.0 * 0.03 / math.sqrt(2.0 * math.pi), rel=0.01)


def test_adiabatic_large_jump_strong_coupling_scaling() -> None:
    w = 3.0
    result = jump_time_adiabatic_large(LzParams(w), EPS)
    expected = (4.0 / EPS) ** (1 / 6) * w ** (1 / 3) * math.exp(math.pi * w * w / 6.0)
    assert result.jump == pytest.approx(expected, rel=0.10)
    assert result.jump_initial < 0.0 < result.jump_final
    assert result.jump == pytest.approx(result.jump_final - result.jump_initial)


def test_adiabatic_large_jump_undefined_for_weak_coupling() -> None:
    with pytest.raises(RegimeError):
        jump_time_adiabatic_large(LzParams(0.3), EPS)


def test_adiabatic_large_jump_survives_very_strong_coupling() -> None:
    result = jump_time_adiabatic_large(LzParams(25.0), EPS)
    assert math.isfinite(result.jump) and result.jump > 0.0


@pytest.mark.parametrize("omega", [0.5, 0.75])
def test_small_and_large_adiabatic_jumps_agree_in_the_overlap(omega: float) -> None:
    params = LzParams(omega)
    small = jump_time_adiabatic_small(params)
    large = jump_time_adiabatic_large(params, EPS).jump
    assert 1 / 3 <= small / large <= 3.0


def test_adiabatic_relaxation_weak_coupling_scaling() -> None:
    w = 0.05
    expected = (math.pi / (4.0 * EPS**2)) ** (1 / 6) * w ** (2 / 3)
    assert relax_time_adiabatic(LzParams(w), EPS) == pytest.approx(expected, rel=0.02)


def test_adiabatic_relaxation_strong_coupling_scaling() -> None:
    w = 3.0
    expected = (1.0 / (2.0 * EPS)) ** (1 / 3) * w ** (1 / 3) * math.exp(math.pi * w * w / 6.0)
    assert relax_time_adiabatic(LzParams(w), EPS) == pytest.approx(expected, rel=0.05)


def test_adiabatic_relaxation_grows_with_strong_coupling() -> None:
    times = [relax_time_adiabatic(LzParams(w), EPS) for w in np.linspace(1.0, 12.0, 45)]
    assert np.all(np.diff(times) > 0.0)


def test_adiabatic_times_stay_finite_where_e_to_the_pi_omega_squared_overflows() -> None:
    params = LzParams(30.0)
    relax = relax_time_adiabatic(params, EPS)
    jump = jump_time_adiabatic_large(params, EPS)
    assert math.isfinite(relax) and relax > 0.0
    assert math.isfinite(jump.jump) and jump.jump_initial < 0.0 < jump.jump_final
    # ln of the closed form: ln w + (pi w^2 - ln(4 eps^2 w^4)) / 6 to leading order.
    expected_log = math.log(30.0) + (params.lz_exponent - math.log(4.0 * EPS**2 * 30.0**4)) / 6.0
    assert math.log(relax) == pytest.approx(expected_log, rel=1e-12)


def test_adiabatic_times_beyond_float_range_are_regime_errors() -> None:
    with pytest.raises(RegimeError):
        relax_time_adiabatic(LzParams(40.0), EPS)
    with pytest.raises(RegimeError):
        jump_time_adiabatic_large(LzParams(40.0), EPS)


@pytest.mark.parametrize("omega", [3.0, 4.0])
def test_adiabatic_jump_and_relaxation_nearly_equal(omega: float) -> None:
    params = LzParams(omega)
    ratio = jump_time_adiabatic_large(params, EPS).jump / relax_time_adiabatic(params, EPS)
    assert ratio == pytest.approx((16.0 * EPS) ** (1 / 6), rel=0.10)


def test_recommended_jump_switches_formula() -> None:
    weak, strong = LzParams(0.7), LzParams(0.8)
    assert recommended_jump_adiabatic(weak, EPS) == jump_time_adiabatic_small(weak)
    assert recommended_jump_adiabatic(strong, EPS) == jump_time_adiabatic_large(strong, EPS).jump


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------


def test_times_row_weak_coupling_has_no_large_jump() -> None:
    record = times_row(0.3, EPS).as_record()
    assert record["jump_a_small"] == pytest.approx(jump_time_adiabatic_small(LzParams(0.3)))
    assert record["jump_a_large"] is None
    assert record["jump_a_initial"] is None
    assert record["jump_a"] == record["jump_a_small"]


def test_times_row_reports_both_jumps_in_the_overlap() -> None:
    record = times_row(0.6, EPS).as_record()
    assert record["jump_a_small"] is not None
    assert record["jump_a_large"] is not None


def test_times_row_strong_coupling() -> None:
    record = times_row(2.0, EPS).as_record()
    assert record["jump_a_small"] is None
    assert record["relax_d"] is None
    assert record["jump_a"] == pytest.approx(record["jump_a_large"])
    assert record["jump_a_initial"] < 0.0 < record["jump_a_final"]


def test_times_table_keeps_grid_order_with_workers() -> None:
    grid = list(np.geomspace(0.03, 10.0, 25))
    sequential = times_table(grid, EPS)
    threaded = times_table(grid, EPS, max_workers=4)
    assert [row.omega for row in threaded] == pytest.approx(grid)
    assert [row.as_record() for row in threaded] == [row.as_record() for row in sequential]


def test_times_table_survives_very_strong_coupling() -> None:
    rows = [row.as_record() for row in times_table([0.5, 30.0, 40.0], EPS)]
    assert [row["omega"] for row in rows] == [0.5, 30.0, 40.0]
    assert rows[1]["relax_a"] is not None and math.isfinite(rows[1]["relax_a"])
    assert rows[1]["jump_a"] == pytest.approx(rows[1]["jump_a_large"])
    assert rows[2]["relax_a"] is None
    assert rows[2]["jump_a_large"] is None
    assert math.isfinite(rows[2]["jump_d"])


def test_times_table_rejects_bad_couplings() -> None:
    with pytest.raises(DomainError):
        times_table([0.5, -1.0], EPS)


def test_p_infinity_pair_sums_to_one() -> None:
    pd, pa = p_infinity_pair(LzParams(0.9))
    assert pd + pa == pytest.approx(1.0, abs=1e-15)
