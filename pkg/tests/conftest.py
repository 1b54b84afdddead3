from __future__ import annotations

import cmath
import math
from typing import Callable

import pytest

from lztimes.config import IntegratorConfig
from lztimes.logger import clear_cached_diagnostics
from lztimes.validation.checks import clear_trace_cache

# Bernoulli terms of the Stirling series for log Gamma.
_STIRLING = (1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0)


def _log_gamma_reference(z: complex, shift: int = 30) -> complex:
    """log Gamma(z) for Re z > 0: recurrence up to z + shift, then Stirling.

    Independent of scipy; every log is taken in the right half-plane, so
    the imaginary part is the continuous branch.
    """
    w = z + shift
    value = (w - 0.5) * cmath.log(w) - w + 0.5 * math.log(2.0 * math.pi)
    for k, coeff in enumerate(_STIRLING):
        value += coeff / w ** (2 * k + 1)
    for k in range(shift):
        value -= cmath.log(z + k)
    return value


@pytest.fixture
def arg_gamma_reference() -> Callable[[complex], float]:
    return lambda z: _log_gamma_reference(complex(z)).imag


@pytest.fixture
def cfg() -> IntegratorConfig:
    return IntegratorConfig()


@pytest.fixture(autouse=True)
def _fresh_caches():
    clear_cached_diagnostics()
    clear_trace_cache()
    yield
    clear_trace_cache()
