"""Exception hierarchy for lztimes."""

from __future__ import annotations


class LzError(Exception):
    """Base exception for all lztimes errors."""
    pass


class DomainError(LzError, ValueError):
    """Raised when an input lies outside the domain of an operation."""
    pass


class RegimeError(LzError):
    """Raised when a closed-form estimate is evaluated outside its validity domain."""
    pass


class IntegrationError(LzError):
    """Raised when the ODE integrator fails (step-size underflow, bad state)."""

    def __init__(self, message: str, *, tau: float | None = None) -> None:
        super().__init__(message if tau is None else f"{message} (at tau={tau:.6g})")
        self.tau = tau


class GuardBandError(IntegrationError):
    """Raised when the mixing-angle integration hits its guard band before the horizon."""
    pass


class InsufficientHorizonError(LzError):
    """Raised when a trace ends before the oscillation amplitude floor is reached."""
    pass


class ConfigError(LzError):
    """Raised for unreadable or invalid configuration documents."""

    def __init__(self, message: str, *, line: int | None = None) -> None:
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


__all__ = [
    "LzError",
    "DomainError",
    "RegimeError",
    "IntegrationError",
    "GuardBandError",
    "InsufficientHorizonError",
    "ConfigError",
]
