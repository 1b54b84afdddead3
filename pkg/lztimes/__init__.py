"""Landau-Zener transition times: closed forms, asymptotic evolutions and a
numeric engine for the diabatic and adiabatic transition probabilities.

All quantities are in scaled units, tau = beta t and omega = Omega / beta.
"""

from lztimes.approx import EvolutionEstimate, pa_approx, pd_approx, phase_xi
from lztimes.errors import (
    ConfigError,
    DomainError,
    GuardBandError,
    InsufficientHorizonError,
    IntegrationError,
    LzError,
    RegimeError,
)
from lztimes.model import Basis, BoundaryValues, LzParams, boundary_values, p_infinity
from lztimes.specialfn import chi_exact, chi_series
from lztimes.times import (
    TimesRow,
    TransitionTimes,
    jump_time_adiabatic_large,
    jump_time_adiabatic_small,
    jump_time_diabatic,
    relax_time_adiabatic,
    relax_time_diabatic,
    times_table,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Basis",
    "LzParams",
    "BoundaryValues",
    "boundary_values",
    "p_infinity",
    "chi_exact",
    "chi_series",
    "EvolutionEstimate",
    "phase_xi",
    "pd_approx",
    "pa_approx",
    "TransitionTimes",
    "TimesRow",
    "jump_time_diabatic",
    "relax_time_diabatic",
    "jump_time_adiabatic_small",
    "jump_time_adiabatic_large",
    "relax_time_adiabatic",
    "times_table",
    "LzError",
    "DomainError",
    "RegimeError",
    "IntegrationError",
    "GuardBandError",
    "InsufficientHorizonError",
    "ConfigError",
]
