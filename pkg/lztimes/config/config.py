"""
Configuration for lztimes: integrator settings and process-wide defaults.
"""

from __future__ import annotations

import math
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

DEFAULT_EPSILON = 0.1
DEFAULT_VALID_THRESHOLD = 1.0

# Explicit embedded Runge-Kutta pairs offered by scipy.integrate.solve_ivp.
RungeKuttaMethod = Literal["DOP853", "RK45", "RK23"]


class IntegratorConfig(BaseModel):
    """Step-size control, tolerances and start policy for the engine.

    All times are scaled (tau = beta*t); the mixing-angle integration uses
    the same tolerances in the angle variable.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    rel_tol: float = Field(default=1e-10, gt=0.0, lt=1.0)
    abs_tol: float = Field(default=1e-12, gt=0.0, lt=1.0)
    max_step: float = Field(default=math.inf, gt=0.0)
    # Start displacement from the singular origin of the diabatic equation.
    origin_offset: float = Field(default=1e-3, gt=0.0, le=0.1)
    tau_max: float = Field(default=40.0, gt=0.0)
    sample_step: float = Field(default=0.01, gt=0.0)
    # Closest approach of the mixing angle to 0 or pi/2.
    theta_guard: float = Field(default=1e-4, gt=0.0, lt=math.pi / 8)
    taylor_order: int = Field(default=8, ge=4, le=24)
    extrapolate_tail: bool = True
    method: RungeKuttaMethod = "DOP853"

    @model_validator(mode="after")
    def _sample_step_within_horizon(self) -> "IntegratorConfig":
        if self.sample_step > self.tau_max:
            raise ValueError("sample_step must not exceed tau_max")
        return self

    def scaled(self, factor: float) -> "IntegratorConfig":
        """Return a copy with both tolerances multiplied by *factor*."""
        return self.model_copy(
            update={"rel_tol": self.rel_tol * factor, "abs_tol": self.abs_tol * factor}
        )

    @property
    def probability_slack(self) -> float:
        """Allowed overshoot of a probability outside [0, 1]."""
        return 10.0 * (self.abs_tol + self.rel_tol)


class Settings(BaseSettings):
    """Process defaults. Every field maps to an env var with the prefix
    ``LZTIMES_`` (e.g. ``LZTIMES_LOG_LEVEL``); a local ``.env`` is read too."""

    model_config = SettingsConfigDict(
        env_prefix="LZTIMES_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    log_level: str = "WARNING"
    log_json: bool = False
    max_workers: int = Field(default=4, ge=1, le=64)
    epsilon: float = DEFAULT_EPSILON
    valid_threshold: float = Field(default=DEFAULT_VALID_THRESHOLD, gt=0.0)
    rel_tol: float = Field(default=1e-10, gt=0.0, lt=1.0)
    abs_tol: float = Field(default=1e-12, gt=0.0, lt=1.0)

    @field_validator("epsilon", mode="before")
    @classmethod
    def _epsilon_in_unit_interval(cls, v: object) -> float:
        try:
            v = float(v)  # type: ignore[arg-type]
        except (TypeError, ValueError):
            raise ValueError(f"epsilon must be a number, got {v!r}")
        if not 0.0 < v < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        return v

    @field_validator("log_level", mode="before")
    @classmethod
    def _known_level(cls, v: object) -> str:
        level = str(v).upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level {v!r}")
        return level

    def integrator(self, **overrides: object) -> IntegratorConfig:
        """Build an IntegratorConfig from these defaults plus *overrides*."""
        values: dict[str, object] = {"rel_tol": self.rel_tol, "abs_tol": self.abs_tol}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return IntegratorConfig(**values)


__all__ = [
    "DEFAULT_EPSILON",
    "DEFAULT_VALID_THRESHOLD",
    "IntegratorConfig",
    "RungeKuttaMethod",
    "Settings",
]
