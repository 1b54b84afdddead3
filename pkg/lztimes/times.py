"""Closed-form jump and relaxation times in both bases.

Absent times are ``None``: a relaxation time is absent when the oscillation
amplitude never exceeds epsilon * P(infinity). Invalid thresholds raise
``DomainError``; closed forms evaluated outside their validity domain raise
``RegimeError``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Iterable, Optional

from lztimes.config import DEFAULT_EPSILON
from lztimes.errors import DomainError, RegimeError
from lztimes.logger import get_logger
from lztimes.model import Basis, LzParams, boundary_values, p_infinity
from lztimes.specialfn import chi_exact

logger = get_logger(__name__, component="times")

# Small-omega adiabatic jump time is used below this coupling, the
# large-omega boundary construction at and above it.
RECOMMENDED_SWITCH_OMEGA = 0.75

# times_table reports the small-omega adiabatic jump up to SMALL_JUMP_MAX_OMEGA
# and the large-omega one from LARGE_JUMP_MIN_OMEGA; both in the overlap.
SMALL_JUMP_MAX_OMEGA = 1.0
LARGE_JUMP_MIN_OMEGA = 0.5


# ---------------------------------------------------------------------------
# Result type
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransitionTimes:
    """Jump and relaxation times of one basis for one threshold epsilon."""

    basis: Basis
    epsilon: float
    jump: Optional[float] = None
    jump_initial: Optional[float] = None
    jump_final: Optional[float] = None
    relax: Optional[float] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "basis", Basis.parse(self.basis))
        for name in ("jump", "jump_final", "relax"):
            value = getattr(self, name)
            if value is not None and value < 0.0:
                raise DomainError(f"{name} must be >= 0, got {value!r}")
        if self.jump_initial is not None and self.jump_initial > 0.0:
            raise DomainError(f"jump_initial must be <= 0, got {self.jump_initial!r}")


def _check_epsilon(epsilon: float) -> float:
    if not (isinstance(epsilon, (int, float)) and 0.0 < epsilon < 1.0):
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    return float(epsilon)


# ---------------------------------------------------------------------------
# Diabatic basis
# ---------------------------------------------------------------------------


def jump_time_diabatic(params: LzParams) -> float:
    """P_d(inf) / P_d'(0) = sqrt(1 - e^{-pi w^2}) / (w cos chi)."""
    chi = chi_exact(params.omega).value
    return params.sqrt_transition / (params.omega * math.cos(chi))


def relax_time_diabatic(params: LzParams, epsilon: float = DEFAULT_EPSILON) -> Optional[float]:
    """Time after which the oscillation amplitude stays below epsilon * P_d(inf).

    ``None`` when pi w^2 > ln(1/eps^2 + 1), where the amplitude never
    reaches the threshold.
    """
    eps = _check_epsilon(epsilon)
    x = params.lz_exponent
    if x > math.log1p(1.0 / (eps * eps)):
        return None
    arg = 1.0 / (eps * eps * math.expm1(x)) - 1.0
    return params.omega * math.sqrt(max(arg, 0.0))


def tangent_window_diabatic(params: LzParams) -> tuple[float, float]:
    """Where the tangent to P_d at tau = 0 crosses 0 and P_d(inf)."""
    bv = boundary_values(params, Basis.DIABATIC)
    start = -bv.p0 / bv.dp0
    end = (bv.p_inf - bv.p0) / bv.dp0
    return start, end


def envelope_touch_time_diabatic(params: LzParams) -> Optional[float]:
    """Smallest tau > 0 where the upper oscillation envelope of P_d reaches 1.

    With E = e^{-pi w^2} the envelope is 1/2 + (1/2 - E) tau/s + sqrt(E(1-E)) w/s;
    setting it to 1 gives a quadratic in tau with a double root, so the
    envelope touches 1 at tau = w (1/2 - E) / sqrt(E (1 - E)). Absent for
    E >= 1/2.
    """
    x = params.lz_exponent
    e = params.no_transition
    if e >= 0.5:
        return None
    try:
        # 1/sqrt(E) written as exp(x/2) so the large-omega case keeps digits.
        return params.omega * (0.5 - e) * math.exp(0.5 * x) / params.sqrt_transition
    except OverflowError as exc:
        raise RegimeError(f"envelope touch time overflows for omega={params.omega}") from exc


# ---------------------------------------------------------------------------
# Adiabatic basis
# ---------------------------------------------------------------------------


def jump_time_adiabatic_small(params: LzParams) -> float:
    """P_a(inf) / P_a'(0) = 2 w e^{-pi w^2 / 2}; intended for w <~ 1."""
    return 2.0 * params.omega * math.exp(-0.5 * params.lz_exponent)


def _scaled_root(omega: float, log_numerator: float, log_denominator: float, what: str) -> float:
    """w sqrt((N/D)^{1/3} - 1) from ln N and ln D.

    Written as w e^{L/2} sqrt(1 - e^{-L}) with L = ln(N/D)/3, so e^{pi w^2}
    never appears on its own. Non-positive excess or a result beyond float
    range raises ``RegimeError``.
    """
    third = (log_numerator - log_denominator) / 3.0
    if third <= 0.0:
        raise RegimeError(f"{what} outside its domain for omega={omega}")
    try:
        value = omega * math.exp(0.5 * third) * math.sqrt(-math.expm1(-third))
    except OverflowError:
        value = math.inf
    if not math.isfinite(value):
        raise RegimeError(f"{what} overflows for omega={omega}")
    return value


def jump_time_adiabatic_large(
    params: LzParams, epsilon: float = DEFAULT_EPSILON
) -> TransitionTimes:
    """Jump window of P_a for large coupling.

    The window opens where P_a = eps * P_a(inf) on the rising side and closes
    where the non-oscillatory part falls to (1 + eps) * P_a(inf):

        tau_i = -w sqrt((e^{pi w^2} / (16 eps w^4))^{1/3} - 1)
        tau_f = +w sqrt(((e^{pi w^2} - 2) / (16 eps w^4))^{1/3} - 1)
    """
    eps = _check_epsilon(epsilon)
    w = params.omega
    x = params.lz_exponent
    if x <= math.log(2.0):
        raise RegimeError(f"e^(pi w^2) <= 2 for omega={w}; large-omega jump undefined")

    what = f"large-omega jump construction (epsilon={eps})"
    log_den = math.log(16.0 * eps) + 4.0 * math.log(w)
    jump_initial = -_scaled_root(w, x, log_den, what)
    jump_final = _scaled_root(w, x + math.log1p(-2.0 * math.exp(-x)), log_den, what)
    if jump_final - jump_initial == math.inf:
        raise RegimeError(f"{what} overflows for omega={w}")
    return TransitionTimes(
        basis=Basis.ADIABATIC,
        epsilon=eps,
        jump=jump_final - jump_initial,
        jump_initial=jump_initial,
        jump_final=jump_final,
    )


def relax_time_adiabatic(params: LzParams, epsilon: float = DEFAULT_EPSILON) -> float:
    """tau_relax = w sqrt(((e^{pi w^2} - 1) / (4 eps^2 w^4))^{1/3} - 1)."""
    eps = _check_epsilon(epsilon)
    w = params.omega
    x = params.lz_exponent
    # ln(e^x - 1) = x + ln(1 - e^{-x})
    log_num = x + math.log(-math.expm1(-x))
    log_den = math.log(4.0 * eps * eps) + 4.0 * math.log(w)
    return _scaled_root(w, log_num, log_den, f"adiabatic relaxation time (epsilon={eps})")


def recommended_jump_adiabatic(params: LzParams, epsilon: float = DEFAULT_EPSILON) -> float:
    """Small-omega jump time below omega = 0.75, large-omega construction above."""
    if params.omega < RECOMMENDED_SWITCH_OMEGA:
        _check_epsilon(epsilon)
        return jump_time_adiabatic_small(params)
    return jump_time_adiabatic_large(params, epsilon).jump  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TimesRow:
    """All closed-form times for one coupling."""

    omega: float
    diabatic: TransitionTimes
    adiabatic: TransitionTimes
    jump_a_small: Optional[float]
    jump_a_large: Optional[TransitionTimes]

    def as_record(self) -> dict[str, Any]:
        """Flat column mapping used by the writers; ``None`` marks absent values."""
        large = self.jump_a_large
        return {
            "omega": self.omega,
            "jump_d": self.diabatic.jump,
            "relax_d": self.diabatic.relax,
            "jump_a_small": self.jump_a_small,
            "jump_a_large": large.jump if large else None,
            "jump_a_initial": large.jump_initial if large else None,
            "jump_a_final": large.jump_final if large else None,
            "relax_a": self.adiabatic.relax,
            "jump_a": self.adiabatic.jump,
        }


def _optional(fn, *args: Any) -> Any:
    try:
        return fn(*args)
    except RegimeError as exc:
        logger.debug("closed_form_outside_regime", fn=fn.__name__, detail=str(exc))
        return None


def times_row(omega: float, epsilon: float = DEFAULT_EPSILON) -> TimesRow:
    """Evaluate every time quantity at one coupling, regime failures as ``None``."""
    params = LzParams(omega)
    eps = _check_epsilon(epsilon)

    diabatic = TransitionTimes(
        basis=Basis.DIABATIC,
        epsilon=eps,
        jump=jump_time_diabatic(params),
        relax=relax_time_diabatic(params, eps),
    )

    small = jump_time_adiabatic_small(params) if params.omega <= SMALL_JUMP_MAX_OMEGA else None
    large = (
        _optional(jump_time_adiabatic_large, params, eps)
        if params.omega >= LARGE_JUMP_MIN_OMEGA
        else None
    )
    if params.omega < RECOMMENDED_SWITCH_OMEGA:
        recommended = TransitionTimes(basis=Basis.ADIABATIC, epsilon=eps, jump=small)
    elif large is not None:
        recommended = large
    else:
        recommended = TransitionTimes(basis=Basis.ADIABATIC, epsilon=eps)

    adiabatic = TransitionTimes(
        basis=Basis.ADIABATIC,
        epsilon=eps,
        jump=recommended.jump,
        jump_initial=recommended.jump_initial,
        jump_final=recommended.jump_final,
        relax=_optional(relax_time_adiabatic, params, eps),
    )
    return TimesRow(
        omega=params.omega,
        diabatic=diabatic,
        adiabatic=adiabatic,
        jump_a_small=small,
        jump_a_large=large,
    )


def times_table(
    omega_grid: Iterable[float],
    epsilon: float = DEFAULT_EPSILON,
    *,
    max_workers: int = 1,
) -> list[TimesRow]:
    """One TimesRow per grid point, in grid order."""
    omegas = [float(w) for w in omega_grid]
    eps = _check_epsilon(epsilon)
    for w in omegas:
        LzParams(w)

    if max_workers <= 1 or len(omegas) <= 1:
        rows = [times_row(w, eps) for w in omegas]
    else:
        with ThreadPoolExecutor(max_workers=max_workers, thread_name_prefix="lz_times") as pool:
            rows = list(pool.map(lambda w: times_row(w, eps), omegas))

    logger.debug("times_table_built", points=len(rows), epsilon=eps)
    return rows


def p_infinity_pair(params: LzParams) -> tuple[float, float]:
    """(P_d(inf), P_a(inf)); the two always sum to 1."""
    return p_infinity(params, Basis.DIABATIC), p_infinity(params, Basis.ADIABATIC)


__all__ = [
    "RECOMMENDED_SWITCH_OMEGA",
    "TransitionTimes",
    "TimesRow",
    "jump_time_diabatic",
    "relax_time_diabatic",
    "tangent_window_diabatic",
    "envelope_touch_time_diabatic",
    "jump_time_adiabatic_small",
    "jump_time_adiabatic_large",
    "relax_time_adiabatic",
    "recommended_jump_adiabatic",
    "times_row",
    "times_table",
    "p_infinity_pair",
]
