"""lztimes structured logging."""

from .logging import (
    DiagnosticsBuffer,
    clear_cached_diagnostics,
    configure_logging,
    diagnostic_counts,
    get_cached_diagnostics,
    get_logger,
)

__all__ = [
    "DiagnosticsBuffer",
    "configure_logging",
    "get_logger",
    "get_cached_diagnostics",
    "diagnostic_counts",
    "clear_cached_diagnostics",
]
