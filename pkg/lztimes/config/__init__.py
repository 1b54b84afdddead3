from .config import (
    DEFAULT_EPSILON,
    DEFAULT_VALID_THRESHOLD,
    IntegratorConfig,
    RungeKuttaMethod,
    Settings,
)

__all__ = [
    "DEFAULT_EPSILON",
    "DEFAULT_VALID_THRESHOLD",
    "IntegratorConfig",
    "RungeKuttaMethod",
    "Settings",
]
