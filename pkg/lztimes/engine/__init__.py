"""Numeric evolution of the transition probabilities and time measurement."""

from .inversion import (
    diabatic_taylor_series,
    engine_trace,
    integrate_adiabatic_inversion,
    integrate_diabatic_inversion,
)
from .measure import (
    Extrema,
    JumpRule,
    find_extrema,
    fit_decay_exponent,
    measure_relaxation,
    measure_times_numeric,
    tangent_slope_at_crossing,
)
from .oracle import (
    integrate_schrodinger_from_crossing,
    integrate_schrodinger_oracle,
    oracle_error_floor,
    rotate_trace_to_adiabatic,
)
from .trace import (
    ProbabilityTrace,
    TraceSource,
    approx_trace,
    check_grid,
    merge_traces,
    uniform_grid,
)

__all__ = [
    "ProbabilityTrace",
    "TraceSource",
    "approx_trace",
    "check_grid",
    "merge_traces",
    "uniform_grid",
    "diabatic_taylor_series",
    "integrate_diabatic_inversion",
    "integrate_adiabatic_inversion",
    "engine_trace",
    "oracle_error_floor",
    "integrate_schrodinger_oracle",
    "integrate_schrodinger_from_crossing",
    "rotate_trace_to_adiabatic",
    "Extrema",
    "JumpRule",
    "find_extrema",
    "measure_relaxation",
    "tangent_slope_at_crossing",
    "fit_decay_exponent",
    "measure_times_numeric",
]
