"""Sampled probability traces shared by the engine, the oracles and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from lztimes.approx import EvolutionEstimate
from lztimes.errors import DomainError
from lztimes.model import Basis

# Grid points are rounded to this many decimals so tau = 0 is exact and
# repeated runs produce identical abscissae.
GRID_DECIMALS = 12


class TraceSource(str, Enum):
    INVERSION_ODE = "inversion_ode"
    SCHRODINGER_ORACLE = "schrodinger_oracle"
    CLOSED_FORM_APPROX = "closed_form_approx"


@dataclass(frozen=True, eq=False)
class ProbabilityTrace:
    """Transition probability p(tau) on a strictly increasing tau grid.

    ``amplitudes`` (shape (2, n), diabatic c1/c2) is set by the Schrodinger
    integrators only. ``tail_mask`` flags samples that come from the
    closed-form tail rather than the integrator.
    """

    basis: Basis
    omega: float
    tau: NDArray[np.float64]
    p: NDArray[np.float64]
    source: TraceSource
    amplitudes: Optional[NDArray[np.complex128]] = field(default=None, repr=False)
    tail_mask: Optional[NDArray[np.bool_]] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        tau = np.asarray(self.tau, dtype=float)
        p = np.asarray(self.p, dtype=float)
        if tau.ndim != 1 or tau.shape != p.shape:
            raise DomainError(f"tau and p must be 1-D of equal length, got {tau.shape} and {p.shape}")
        if tau.size > 1 and not np.all(np.diff(tau) > 0.0):
            raise DomainError("trace samples must be strictly ordered in tau")
        object.__setattr__(self, "basis", Basis.parse(self.basis))
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "p", p)
        if self.amplitudes is not None:
            amps = np.asarray(self.amplitudes, dtype=complex)
            if amps.shape != (2, tau.size):
                raise DomainError(f"amplitudes must have shape (2, {tau.size}), got {amps.shape}")
            object.__setattr__(self, "amplitudes", amps)
        if self.tail_mask is not None:
            mask = np.asarray(self.tail_mask, dtype=bool)
            if mask.shape != tau.shape:
                raise DomainError(f"tail_mask must have shape {tau.shape}, got {mask.shape}")
            object.__setattr__(self, "tail_mask", mask)

    def __len__(self) -> int:
        return int(self.tau.size)

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.tau.tolist(), self.p.tolist()))

    @property
    def extrapolated(self) -> NDArray[np.bool_]:
        """Mask of samples filled from the closed-form tail."""
        if self.tail_mask is None:
            return np.zeros(self.tau.shape, dtype=bool)
        return self.tail_mask

    def bound_violation(self) -> float:
        """Largest excursion of p outside [0, 1] (0 when inside)."""
        if self.p.size == 0:
            return 0.0
        return float(max(0.0, -self.p.min(), self.p.max() - 1.0))

    def window(self, tau_min: float, tau_max: float) -> "ProbabilityTrace":
        """Samples with tau_min <= tau <= tau_max."""
        mask = (self.tau >= tau_min) & (self.tau <= tau_max)
        return ProbabilityTrace(
            basis=self.basis,
            omega=self.omega,
            tau=self.tau[mask],
            p=self.p[mask],
            source=self.source,
            amplitudes=None if self.amplitudes is None else self.amplitudes[:, mask],
            tail_mask=None if self.tail_mask is None else self.tail_mask[mask],
        )

    def interpolate(self, tau: ArrayLike) -> NDArray[np.float64]:
        """Linear interpolation of p inside the sampled range."""
        t = np.asarray(tau, dtype=float)
        if t.size and (t.min() < self.tau[0] or t.max() > self.tau[-1]):
            raise DomainError("interpolation point outside the sampled tau range")
        return np.interp(t, self.tau, self.p)


def merge_traces(backward: ProbabilityTrace, forward: ProbabilityTrace) -> ProbabilityTrace:
    """Join a tau < 0 trace and a tau >= 0 trace of the same run."""
    if backward.basis is not forward.basis or backward.source is not forward.source:
        raise DomainError("cannot merge traces of different basis or source")
    if len(backward) == 0:
        return forward
    if len(forward) == 0:
        return backward
    amplitudes = None
    if backward.amplitudes is not None and forward.amplitudes is not None:
        amplitudes = np.concatenate([backward.amplitudes, forward.amplitudes], axis=1)
    tail_mask = None
    if backward.tail_mask is not None or forward.tail_mask is not None:
        tail_mask = np.concatenate([backward.extrapolated, forward.extrapolated])
    return ProbabilityTrace(
        basis=forward.basis,
        omega=forward.omega,
        tau=np.concatenate([backward.tau, forward.tau]),
        p=np.concatenate([backward.p, forward.p]),
        source=forward.source,
        amplitudes=amplitudes,
        tail_mask=tail_mask,
    )


def uniform_grid(tau_min: float, tau_max: float, step: float) -> NDArray[np.float64]:
    """Inclusive grid tau_min, tau_min + step, ... <= tau_max."""
    if not step > 0.0:
        raise DomainError(f"tau step must be positive, got {step!r}")
    if tau_max < tau_min:
        raise DomainError(f"empty tau range [{tau_min}, {tau_max}]")
    n = int(np.floor((tau_max - tau_min) / step + 1e-9)) + 1
    grid = np.round(tau_min + step * np.arange(n), GRID_DECIMALS)
    # -0.0 would print as "-0" in the writers.
    return grid + 0.0


def check_grid(taus: ArrayLike) -> NDArray[np.float64]:
    """Validate a caller-supplied grid: finite, 1-D, strictly increasing."""
    t = np.atleast_1d(np.asarray(taus, dtype=float))
    if t.ndim != 1 or t.size == 0:
        raise DomainError("tau grid must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(t)):
        raise DomainError("tau grid contains non-finite values")
    if t.size > 1 and not np.all(np.diff(t) > 0.0):
        raise DomainError("tau grid must be strictly increasing")
    return t


def approx_trace(
    basis: Basis, omega: float, tau: ArrayLike, estimate: EvolutionEstimate
) -> ProbabilityTrace:
    """Wrap a closed-form estimate as a trace (used for self-consistency checks)."""
    return ProbabilityTrace(
        basis=basis,
        omega=omega,
        tau=check_grid(tau),
        p=np.atleast_1d(np.asarray(estimate.p, dtype=float)),
        source=TraceSource.CLOSED_FORM_APPROX,
    )


__all__ = [
    "GRID_DECIMALS",
    "TraceSource",
    "ProbabilityTrace",
    "merge_traces",
    "uniform_grid",
    "check_grid",
    "approx_trace",
]
