"""Acceptance checks for the closed forms and the engine."""

from .registry import (
    CheckEntry,
    CheckRegistry,
    CheckResult,
    Measurement,
    get_registry,
    run_checks,
)

__all__ = [
    "CheckEntry",
    "CheckRegistry",
    "CheckResult",
    "Measurement",
    "get_registry",
    "run_checks",
]
