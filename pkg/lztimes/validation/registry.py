"""Check registry for lztimes.

Single source of truth for the acceptance checks run by ``validate``. Each
entry stores discovery metadata and a factory import path; the check
function is imported lazily, so front ends can register checks that live
in their own package.
"""

from __future__ import annotations

import importlib
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Optional

from lztimes.config import DEFAULT_EPSILON, IntegratorConfig
from lztimes.errors import DomainError
from lztimes.logger import get_logger

logger = get_logger(__name__, component="validation")


# ============================================================================
# Data model
# ============================================================================


@dataclass(frozen=True)
class Measurement:
    """What a check function returns: a deviation and a human-readable detail."""

    measured: float
    detail: str = ""


CheckFn = Callable[[IntegratorConfig, float], Measurement]


@dataclass
class CheckEntry:
    """Metadata for one registered check.

    A check passes when its measured deviation is <= threshold * scale,
    so a scale >= 1 can only turn failures into passes.
    """

    name: str
    description: str
    category: str  # "closed_form", "engine", "oracle", "output"
    threshold: float
    factory: str  # "module.path:function"
    slow: bool = False
    keywords: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    threshold: float
    detail: str = ""

    def as_record(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "measured": self.measured if math.isfinite(self.measured) else None,
            "threshold": self.threshold,
            "detail": self.detail,
        }


class CheckRegistry:
    """Ordered catalogue of acceptance checks."""

    def __init__(self) -> None:
        self._entries: dict[str, CheckEntry] = {}

    # ------------------------------------------------------------------
    # Registration
    # ------------------------------------------------------------------

    def register(self, entry: CheckEntry) -> None:
        if entry.threshold < 0.0:
            raise DomainError(f"check {entry.name!r} has a negative threshold")
        self._entries[entry.name] = entry

    # ------------------------------------------------------------------
    # Query
    # ------------------------------------------------------------------

    def search(self, query: str) -> list[CheckEntry]:
        """Keyword match against name, description, category and keywords."""
        tokens = re.findall(r"\w+", query.lower())
        results: list[tuple[int, CheckEntry]] = []
        for entry in self._entries.values():
            searchable = " ".join(
                [entry.name, entry.description, entry.category, " ".join(entry.keywords)]
            ).lower()
            score = sum(1 for token in tokens if token in searchable)
            score += sum(2 for token in tokens if token in (entry.name, entry.category))
            if score > 0:
                results.append((score, entry))
        results.sort(key=lambda x: x[0], reverse=True)
        return [entry for _, entry in results]

    def list_all(self, category: str = "", *, include_slow: bool = True) -> list[CheckEntry]:
        entries = list(self._entries.values())
        if category:
            entries = [e for e in entries if e.category == category]
        if not include_slow:
            entries = [e for e in entries if not e.slow]
        return entries

    def get(self, name: str) -> CheckEntry | None:
        return self._entries.get(name)

    def names(self) -> tuple[str, ...]:
        return tuple(self._entries)

    # ------------------------------------------------------------------
    # Factory instantiation
    # ------------------------------------------------------------------

    @staticmethod
    def _import_factory(factory_path: str) -> Any:
        """Import and return the function from 'module.path:Name'."""
        module_path, attr_name = factory_path.rsplit(":", 1)
        module = importlib.import_module(module_path)
        return getattr(module, attr_name)

    def run(
        self,
        name: str,
        *,
        tolerance_scale: float = 1.0,
        cfg: Optional[IntegratorConfig] = None,
        epsilon: float = DEFAULT_EPSILON,
    ) -> CheckResult:
        """Run one check; exceptions become failed results."""
        entry = self._entries.get(name)
        if entry is None:
            raise DomainError(f"unknown check {name!r}")
        limit = entry.threshold * tolerance_scale
        cfg = cfg or IntegratorConfig()
        try:
            fn: CheckFn = self._import_factory(entry.factory)
            outcome = fn(cfg, epsilon)
        except Exception as exc:
            logger.error("check_crashed", check=name, error=f"{type(exc).__name__}: {exc}")
            return CheckResult(name, False, math.nan, limit, f"{type(exc).__name__}: {exc}")

        passed = math.isfinite(outcome.measured) and outcome.measured <= limit
        log = logger.info if passed else logger.warning
        log("check_finished", check=name, passed=passed, measured=outcome.measured, threshold=limit)
        return CheckResult(name, passed, outcome.measured, limit, outcome.detail)


# ============================================================================
# Global registry
# ============================================================================

_registry = CheckRegistry()


def get_registry() -> CheckRegistry:
    """Return the global check registry."""
    return _registry


def run_checks(
    names: Optional[Iterable[str]] = None,
    *,
    tolerance_scale: float = 1.0,
    cfg: Optional[IntegratorConfig] = None,
    epsilon: float = DEFAULT_EPSILON,
    include_slow: bool = True,
    max_workers: int = 1,
    registry: Optional[CheckRegistry] = None,
) -> list[CheckResult]:
    """Run the named checks (all registered ones by default), in registry order."""
    if not tolerance_scale >= 1.0:
        raise DomainError(f"tolerance_scale must be >= 1, got {tolerance_scale!r}")
    registry = registry or _registry
    if names is None:
        selected = [e.name for e in registry.list_all(include_slow=include_slow)]
    else:
        selected = list(names)
        unknown = [n for n in selected if registry.get(n) is None]
        if unknown:
            raise DomainError(f"unknown checks: {', '.join(unknown)}")

    def _one(name: str) -> CheckResult:
        return registry.run(name, tolerance_scale=tolerance_scale, cfg=cfg, epsilon=epsilon)

    if max_workers <= 1:
        return [_one(n) for n in selected]
    with ThreadPoolExecutor(max_workers=max_workers, thread_name_prefix="lz_check") as pool:
        return list(pool.map(_one, selected))


# ============================================================================
# Built-in registrations
# ============================================================================


def _register_builtins() -> None:
    """Register the library's own checks."""

    _registry.register(CheckEntry(
        name="probability_sum",
        description="P_d(inf) + P_a(inf) = 1 for 50 couplings in [0.05, 5].",
        category="closed_form",
        threshold=1e-14,
        factory="lztimes.validation.checks:check_probability_sum",
        keywords=["asymptotic", "identity"],
    ))

    _registry.register(CheckEntry(
        name="jump_time_small_omega",
        description="Diabatic jump time at omega = 0.03 against sqrt(2 pi), relative deviation.",
        category="closed_form",
        threshold=0.01,
        factory="lztimes.validation.checks:check_jump_time_small_omega",
        keywords=["jump", "diabatic", "limit"],
    ))

    _registry.register(CheckEntry(
        name="jump_time_large_omega",
        description="Diabatic jump time / (2 omega) at omega = 5 and 10, deviation from 1.",
        category="closed_form",
        threshold=0.01,
        factory="lztimes.validation.checks:check_jump_time_large_omega",
        keywords=["jump", "diabatic", "limit"],
    ))

    _registry.register(CheckEntry(
        name="relax_threshold",
        description="Diabatic relaxation time is absent exactly above omega_c = sqrt(ln(1/eps^2 + 1)/pi); counts mismatches.",
        category="closed_form",
        threshold=0.0,
        factory="lztimes.validation.checks:check_relax_threshold",
        keywords=["relaxation", "diabatic", "absent"],
    ))

    _registry.register(CheckEntry(
        name="chi_expansions",
        description="Series chi within 10 omega^10 (omega <= 0.3) and 10 omega^-10 (omega >= 3) of the exact value; worst ratio to that bound.",
        category="closed_form",
        threshold=1.0,
        factory="lztimes.validation.checks:check_chi_expansions",
        keywords=["chi", "gamma", "series"],
    ))

    _registry.register(CheckEntry(
        name="adiabatic_jump_relax_ratio",
        description="Large-omega adiabatic jump / relaxation time at omega = 3, 4 against (16 eps)^(1/6).",
        category="closed_form",
        threshold=0.10,
        factory="lztimes.validation.checks:check_adiabatic_jump_relax_ratio",
        keywords=["jump", "relaxation", "adiabatic"],
    ))

    _registry.register(CheckEntry(
        name="engine_crossing_value",
        description="Diabatic engine P_d(0) against the exact crossing value.",
        category="engine",
        threshold=1e-12,
        factory="lztimes.validation.checks:check_engine_crossing_value",
        keywords=["initial", "diabatic"],
    ))

    _registry.register(CheckEntry(
        name="engine_asymptote",
        description="|P_d(40) - P_d(inf)| at omega = 1 as a fraction of the drift + envelope bound.",
        category="engine",
        threshold=1.1,
        factory="lztimes.validation.checks:check_engine_asymptote",
        keywords=["asymptotic", "diabatic", "envelope"],
    ))

    _registry.register(CheckEntry(
        name="relax_numeric",
        description="Measured diabatic relaxation time at omega = 0.5 against the closed form, relative deviation.",
        category="engine",
        threshold=0.15,
        factory="lztimes.validation.checks:check_relax_numeric",
        keywords=["relaxation", "measure"],
    ))

    _registry.register(CheckEntry(
        name="adiabatic_decay_exponent",
        description="Log-log slope of adiabatic peak amplitudes over tau in [3, 30] at omega = 2, distance from -3.",
        category="engine",
        threshold=0.15,
        factory="lztimes.validation.checks:check_adiabatic_decay_exponent",
        keywords=["amplitude", "adiabatic", "fit"],
    ))

    _registry.register(CheckEntry(
        name="adiabatic_jump_final",
        description="Midline of the omega = 2 adiabatic trace reaches (1 + eps) P_a(inf) near the closed-form final jump time.",
        category="engine",
        threshold=0.15,
        factory="lztimes.validation.checks:check_adiabatic_jump_final",
        keywords=["jump", "adiabatic", "midline"],
    ))

    _registry.register(CheckEntry(
        name="oracle_equivalence",
        description="Inversion trace vs Schrodinger oracle from tau_i = -300, max |dP| over [-10, 30] in units of (tau_i^2 + omega^2)^(-1/2).",
        category="oracle",
        threshold=2.0,
        factory="lztimes.validation.checks:check_oracle_equivalence",
        slow=True,
        keywords=["oracle", "schrodinger", "diabatic"],
    ))

    _registry.register(CheckEntry(
        name="cross_basis",
        description="Rotated amplitudes from the crossing vs the adiabatic inversion trace, max |dP|.",
        category="oracle",
        threshold=1e-4,
        factory="lztimes.validation.checks:check_cross_basis",
        keywords=["oracle", "rotation", "adiabatic"],
    ))


_register_builtins()


__all__ = [
    "Measurement",
    "CheckFn",
    "CheckEntry",
    "CheckResult",
    "CheckRegistry",
    "get_registry",
    "run_checks",
]
