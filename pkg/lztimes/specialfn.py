"""Complex gamma-function phases and the crossing angle chi(omega).

chi(omega) enters every exact value of the transition probabilities at the
crossing. It rises monotonically from pi/4 (omega = 0) to pi/2
(omega -> infinity).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import loggamma

from lztimes.errors import DomainError

# Riemann zeta(3) (Apery's constant), 16 significant digits.
ZETA_3 = 1.202056903159594

# Small/large-omega expansions switch over at omega**2 == 1.
SERIES_CROSSOVER_OMEGA_SQ = 1.0


class ChiMethod(str, Enum):
    EXACT = "exact"
    SMALL_OMEGA_SERIES = "small_omega_series"
    LARGE_OMEGA_SERIES = "large_omega_series"


@dataclass(frozen=True)
class ChiResult:
    """The crossing angle chi in radians and how it was obtained."""

    value: float
    method: ChiMethod

    def __float__(self) -> float:
        return self.value


def log_gamma_arg(z: complex) -> float:
    """Return arg Gamma(z) for Re z > 0.

    The imaginary part of the analytic log-gamma is used, so the phase is
    continuous in Im z along vertical lines and is not wrapped to (-pi, pi].
    Differences of such phases (as in chi and xi) then need no unwrapping.
    """
    z = complex(z)
    if not z.real > 0.0:
        raise DomainError(f"log_gamma_arg requires Re z > 0, got {z!r}")
    return float(loggamma(z).imag)


def chi_exact(omega: float) -> ChiResult:
    """chi(omega) = pi/4 + arg Gamma(1/2 - i omega^2/4) - arg Gamma(1 - i omega^2/4)."""
    if omega < 0.0:
        raise DomainError(f"chi requires omega >= 0, got {omega!r}")
    y = 0.25 * omega * omega
    value = math.pi / 4 + log_gamma_arg(complex(0.5, -y)) - log_gamma_arg(complex(1.0, -y))
    return ChiResult(value=value, method=ChiMethod.EXACT)


def chi_series(omega: float) -> ChiResult:
    """chi(omega) from its small-omega (omega^2 <= 1) or large-omega expansion."""
    if omega < 0.0:
        raise DomainError(f"chi requires omega >= 0, got {omega!r}")
    w2 = omega * omega
    if w2 <= SERIES_CROSSOVER_OMEGA_SQ:
        value = math.pi / 4 + 0.5 * math.log(2.0) * w2 - ZETA_3 / 32.0 * w2**3
        return ChiResult(value=value, method=ChiMethod.SMALL_OMEGA_SERIES)
    value = math.pi / 2 - 1.0 / (2.0 * w2) - 1.0 / (3.0 * w2**3)
    return ChiResult(value=value, method=ChiMethod.LARGE_OMEGA_SERIES)


def chi_grid(omegas: np.ndarray) -> np.ndarray:
    """Vectorised chi_exact over a grid of non-negative couplings."""
    omegas = np.asarray(omegas, dtype=float)
    if np.any(omegas < 0.0):
        raise DomainError("chi requires omega >= 0")
    y = 0.25 * omegas**2
    return (
        math.pi / 4
        + loggamma(0.5 - 1j * y).imag
        - loggamma(1.0 - 1j * y).imag
    )


__all__ = [
    "ZETA_3",
    "SERIES_CROSSOVER_OMEGA_SQ",
    "ChiMethod",
    "ChiResult",
    "log_gamma_arg",
    "chi_exact",
    "chi_series",
    "chi_grid",
]
