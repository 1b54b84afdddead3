"""Run specification for the CLI, validated via pydantic.

A run is described by a RunSpec. Values come from an optional flat YAML
config file and from command-line flags; flags win. Keys may use dashes or
underscores (``tau-min`` == ``tau_min``).
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Literal, Optional

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from lztimes.config import DEFAULT_EPSILON, IntegratorConfig, Settings
from lztimes.errors import ConfigError, DomainError
from lztimes.model import Basis

Command = Literal["trace", "times", "figures", "validate"]


class RunSpec(BaseModel):
    """Everything one CLI command needs."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    command: Command
    omega: list[float] = Field(default_factory=list)
    omega_min: Optional[float] = None
    omega_max: Optional[float] = None
    points: int = Field(default=20, ge=1, le=10_000)
    omega_spacing: Literal["log", "linear"] = "log"
    basis: Literal["d", "a", "both"] = "both"
    epsilon: float = DEFAULT_EPSILON
    tau_min: float = -10.0
    tau_max: float = 30.0
    tau_step: float = Field(default=0.01, gt=0.0)
    tau_over_omega: bool = False
    rel_tol: Optional[float] = Field(default=None, gt=0.0, lt=1.0)
    abs_tol: Optional[float] = Field(default=None, gt=0.0, lt=1.0)
    format: Literal["csv", "json"] = "csv"
    out: Optional[Path] = None
    max_workers: Optional[int] = Field(default=None, ge=1, le=64)
    # validate only
    tolerance_scale: float = Field(default=1.0, ge=1.0)
    checks: list[str] = Field(default_factory=list)
    include_slow: bool = True

    @field_validator("omega", mode="before")
    @classmethod
    def _omega_list(cls, v: object) -> object:
        if v is None:
            return []
        if isinstance(v, (int, float)):
            return [v]
        return v

    @field_validator("omega")
    @classmethod
    def _omega_positive(cls, v: list[float]) -> list[float]:
        bad = [w for w in v if not (np.isfinite(w) and w > 0.0)]
        if bad:
            raise ValueError(f"omega values must be positive and finite, got {bad}")
        return v

    @field_validator("epsilon")
    @classmethod
    def _epsilon_in_unit_interval(cls, v: float) -> float:
        if not 0.0 < v < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        return v

    @model_validator(mode="after")
    def _ranges(self) -> "RunSpec":
        if self.tau_max < self.tau_min:
            raise ValueError(f"empty tau range [{self.tau_min}, {self.tau_max}]")
        if (self.omega_min is None) != (self.omega_max is None):
            raise ValueError("omega_min and omega_max must be given together")
        if self.omega_min is not None:
            if not (self.omega_min > 0.0 and self.omega_max > 0.0):  # type: ignore[operator]
                raise ValueError("omega range must be positive")
            if self.omega_max < self.omega_min:  # type: ignore[operator]
                raise ValueError(f"empty omega range [{self.omega_min}, {self.omega_max}]")
        if self.command in ("trace", "times") and not self.omega and self.omega_min is None:
            raise ValueError("give --omega or --omega-min/--omega-max")
        return self

    # ------------------------------------------------------------------
    # Derived values
    # ------------------------------------------------------------------

    def omega_grid(self) -> list[float]:
        """Explicit omegas first, then the range grid, in the given order."""
        grid = list(self.omega)
        if self.omega_min is not None and self.omega_max is not None:
            if self.points == 1 or self.omega_min == self.omega_max:
                grid.append(self.omega_min)
            elif self.omega_spacing == "log":
                grid.extend(np.geomspace(self.omega_min, self.omega_max, self.points).tolist())
            else:
                grid.extend(np.linspace(self.omega_min, self.omega_max, self.points).tolist())
        return grid

    def bases(self) -> list[Basis]:
        if self.basis == "both":
            return [Basis.DIABATIC, Basis.ADIABATIC]
        return [Basis.parse(self.basis)]

    def integrator(self, settings: Settings) -> IntegratorConfig:
        return settings.integrator(rel_tol=self.rel_tol, abs_tol=self.abs_tol)

    def workers(self, settings: Settings) -> int:
        return self.max_workers or settings.max_workers

    def echo(self) -> dict[str, Any]:
        """Spec as written into output headers (output path excluded)."""
        return self.model_dump(mode="json", exclude={"out"})


# ---------------------------------------------------------------------------
# Config files
# ---------------------------------------------------------------------------


def _normalise_key(key: object) -> str:
    return str(key).strip().replace("-", "_")


def load_config_file(path: Path) -> tuple[dict[str, Any], dict[str, int]]:
    """Read a flat YAML mapping; returns (values, 1-based line of each key)."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror or exc}") from exc

    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
        values = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        problem = getattr(exc, "problem", None) or str(exc)
        raise ConfigError(f"{path}: {problem}", line=mark.line + 1 if mark else None) from exc

    if values is None:
        return {}, {}
    if not isinstance(values, dict) or not isinstance(node, yaml.MappingNode):
        raise ConfigError(f"{path}: expected a mapping of option names to values", line=1)

    lines: dict[str, int] = {}
    for key_node, value_node in node.value:
        if isinstance(value_node, yaml.MappingNode):
            raise ConfigError(
                f"{path}: nested mappings are not supported ({key_node.value!r})",
                line=key_node.start_mark.line + 1,
            )
        lines[_normalise_key(key_node.value)] = key_node.start_mark.line + 1
    return {_normalise_key(k): v for k, v in values.items()}, lines


def build_run_spec(
    command: str,
    *,
    config_path: Optional[Path] = None,
    flags: Optional[dict[str, Any]] = None,
    defaults: Optional[dict[str, Any]] = None,
) -> RunSpec:
    """Merge defaults, config-file values and flags (later wins) into a RunSpec.

    Invalid file values raise ConfigError with the offending line; invalid
    flag values raise DomainError.
    """
    file_values, lines = load_config_file(config_path) if config_path else ({}, {})
    file_values.pop("command", None)
    given = {k: v for k, v in (flags or {}).items() if v is not None}
    merged = {**(defaults or {}), **file_values, **given, "command": command}

    try:
        return RunSpec(**merged)
    except ValidationError as exc:
        err = exc.errors()[0]
        key = str(err["loc"][0]) if err.get("loc") else ""
        message = f"{key}: {err['msg']}" if key else err["msg"]
        if key in file_values and key not in given:
            raise ConfigError(f"{config_path}: {message}", line=lines.get(key)) from exc
        raise DomainError(message) from exc


__all__ = ["Command", "RunSpec", "load_config_file", "build_run_spec"]
