"""Scaled Landau-Zener model: parameters, exact crossing values, basis rotation.

Everything is in scaled units: tau = beta*t and omega = Omega/beta, so the
Hamiltonian is [[-tau, omega], [omega, tau]] and the detuning equals tau.
The system starts in the first diabatic state at tau -> -infinity.

Adiabatic states follow
    phi_1 = psi_1 cos(theta) - psi_2 sin(theta)
    phi_2 = psi_1 sin(theta) + psi_2 cos(theta)
with tan(2 theta) = omega / tau and 0 <= theta <= pi/2. At tau -> -infinity
theta -> pi/2, so the initial state is phi_2 and the adiabatic transition
probability is the population of phi_1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from lztimes.errors import DomainError
from lztimes.specialfn import chi_exact

FloatOrArray = Union[float, NDArray[np.float64]]

_NORM_TOLERANCE = 1e-9


class Basis(str, Enum):
    DIABATIC = "diabatic"
    ADIABATIC = "adiabatic"

    @classmethod
    def parse(cls, value: "str | Basis") -> "Basis":
        """Accept 'd'/'a' shorthands as well as full names."""
        if isinstance(value, Basis):
            return value
        key = str(value).strip().lower()
        if key in ("d", "diabatic"):
            return cls.DIABATIC
        if key in ("a", "adiabatic"):
            return cls.ADIABATIC
        raise DomainError(f"unknown basis {value!r}")

    @property
    def short(self) -> str:
        return self.value[0]


@dataclass(frozen=True)
class LzParams:
    """The single physical input of the scaled model: omega = Omega/beta > 0."""

    omega: float

    def __post_init__(self) -> None:
        if not (isinstance(self.omega, (int, float)) and math.isfinite(self.omega)):
            raise DomainError(f"omega must be a finite number, got {self.omega!r}")
        if self.omega <= 0.0:
            raise DomainError(f"omega must be positive, got {self.omega!r}")
        object.__setattr__(self, "omega", float(self.omega))

    @property
    def lz_exponent(self) -> float:
        """pi * omega**2, the exponent of the Landau-Zener formula."""
        return math.pi * self.omega * self.omega

    @property
    def no_transition(self) -> float:
        """exp(-pi omega^2)."""
        return math.exp(-self.lz_exponent)

    @property
    def sqrt_transition(self) -> float:
        """sqrt(1 - exp(-pi omega^2)), computed without cancellation."""
        return math.sqrt(-math.expm1(-self.lz_exponent))


@dataclass(frozen=True)
class BoundaryValues:
    """P(0), P'(0), P''(0) and P(infinity) in one basis."""

    p0: float
    dp0: float
    d2p0: float
    p_inf: float


def p_infinity(params: LzParams, basis: Basis) -> float:
    """The asymptotic transition probability P(infinity)."""
    if Basis.parse(basis) is Basis.DIABATIC:
        return -math.expm1(-params.lz_exponent)
    return params.no_transition


def boundary_values(params: LzParams, basis: Basis) -> BoundaryValues:
    """Exact values at the crossing and at infinity."""
    basis = Basis.parse(basis)
    w = params.omega
    chi = chi_exact(w).value
    half = math.exp(-0.5 * params.lz_exponent)
    root = params.sqrt_transition
    if basis is Basis.DIABATIC:
        return BoundaryValues(
            p0=-0.5 * math.expm1(-0.5 * params.lz_exponent),
            dp0=w * root * math.cos(chi),
            d2p0=2.0 * w * w * half,
            p_inf=p_infinity(params, basis),
        )
    return BoundaryValues(
        p0=0.5 * (1.0 - root * math.sin(chi)),
        dp0=half / (2.0 * w),
        d2p0=root * (math.sin(chi) / (2.0 * w * w) - math.cos(chi)),
        p_inf=p_infinity(params, basis),
    )


def inversion_derivatives(params: LzParams) -> tuple[float, float, float, float]:
    """w_d and its first three derivatives at tau = 0, with w_d = 2 P_d - 1."""
    w = params.omega
    chi = chi_exact(w).value
    half = math.exp(-0.5 * params.lz_exponent)
    root = params.sqrt_transition
    return (
        -half,
        2.0 * w * root * math.cos(chi),
        4.0 * w * w * half,
        4.0 * w * root * (math.sin(chi) - 2.0 * w * w * math.cos(chi)),
    )


def adiabatic_inversion_derivatives(params: LzParams) -> tuple[float, float, float, float]:
    """W_a and its first three theta-derivatives at theta = pi/4 (tau = 0)."""
    w = params.omega
    chi = chi_exact(w).value
    half = math.exp(-0.5 * params.lz_exponent)
    root = params.sqrt_transition
    return (
        -root * math.sin(chi),
        -2.0 * half,
        4.0 * root * (math.sin(chi) - 2.0 * w * w * math.cos(chi)),
        8.0 * (4.0 * w**4 + 1.0) * half,
    )


def mixing_angle(params: LzParams, tau: ArrayLike) -> FloatOrArray:
    """theta(tau) = atan2(omega, tau) / 2, always inside [0, pi/2]."""
    theta = 0.5 * np.arctan2(params.omega, np.asarray(tau, dtype=float))
    return float(theta) if np.ndim(theta) == 0 else theta


def tau_from_angle(params: LzParams, theta: ArrayLike) -> FloatOrArray:
    """Inverse of mixing_angle: tau = omega * cot(2 theta)."""
    t = np.asarray(theta, dtype=float)
    tau = params.omega * np.cos(2.0 * t) / np.sin(2.0 * t)
    return float(tau) if np.ndim(tau) == 0 else tau


def adiabatic_frame_quantities(
    params: LzParams, tau: ArrayLike
) -> tuple[FloatOrArray, FloatOrArray]:
    """Half eigenvalue gap Omega_0 = sqrt(tau^2 + omega^2) and the
    non-adiabatic coupling theta' = -omega / (2 (tau^2 + omega^2))."""
    t = np.asarray(tau, dtype=float)
    w = params.omega
    gap = np.hypot(t, w)
    coupling = -w / (2.0 * (t * t + w * w))
    if np.ndim(gap) == 0:
        return float(gap), float(coupling)
    return gap, coupling


def rotate_to_adiabatic(c: ArrayLike, theta: ArrayLike) -> NDArray[np.complex128]:
    """Map diabatic amplitudes (c1, c2) to adiabatic amplitudes (a1, a2).

    a1 = c1 cos(theta) - c2 sin(theta), a2 = c1 sin(theta) + c2 cos(theta),
    the projections on phi_1 and phi_2 for real rotation angles. Accepts a
    single pair of shape (2,) or a batch of shape (2, n) with n angles.
    """
    amps = np.asarray(c, dtype=complex)
    if amps.shape[0] != 2:
        raise DomainError(f"expected an amplitude pair, got shape {amps.shape}")
    norm = np.sum(np.abs(amps) ** 2, axis=0)
    if np.any(np.abs(norm - 1.0) > _NORM_TOLERANCE):
        worst = float(np.max(np.abs(norm - 1.0)))
        raise DomainError(f"amplitudes are not normalised (|norm - 1| = {worst:.3g})")
    t = np.asarray(theta, dtype=float)
    cos_t, sin_t = np.cos(t), np.sin(t)
    return np.array([
        amps[0] * cos_t - amps[1] * sin_t,
        amps[0] * sin_t + amps[1] * cos_t,
    ])


def adiabatic_probability(c: ArrayLike, theta: ArrayLike) -> FloatOrArray:
    """Population of phi_1, the adiabatic transition probability."""
    a = rotate_to_adiabatic(c, theta)
    p = np.abs(a[0]) ** 2
    return float(p) if np.ndim(p) == 0 else p


def crossing_amplitudes(params: LzParams) -> NDArray[np.complex128]:
    """Exact diabatic amplitudes at tau = 0, up to a global phase.

    From i c' = H c, rho = c1 conj(c2) obeys P' = 2 omega Im(rho) and
    P''' = 2 omega (2 Re(rho) - omega w'), so the exact derivatives of the
    inversion fix rho(0) = (R/2)(sin chi + i cos chi), R = sqrt(1 - e^{-pi omega^2}).
    """
    w = params.omega
    chi = chi_exact(w).value
    root = params.sqrt_transition
    p0 = -0.5 * math.expm1(-0.5 * params.lz_exponent)
    rho = 0.5 * root * complex(math.sin(chi), math.cos(chi))
    c1 = math.sqrt(1.0 - p0)
    c2 = rho.conjugate() / c1
    return np.array([c1, c2], dtype=complex)


__all__ = [
    "Basis",
    "LzParams",
    "BoundaryValues",
    "FloatOrArray",
    "p_infinity",
    "boundary_values",
    "inversion_derivatives",
    "adiabatic_inversion_derivatives",
    "mixing_angle",
    "tau_from_angle",
    "adiabatic_frame_quantities",
    "rotate_to_adiabatic",
    "adiabatic_probability",
    "crossing_amplitudes",
]
