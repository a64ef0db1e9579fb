"""Special functions and the Gaussian-window momentum integral.

The fuzzy-detector correlations all reduce to

    I(d) = \\int_0^{p_f} exp(-sigma^2 p^2) exp(i p d) dp,

with direct term f = (4/pi)|I(0)|^2 and exchange term g = (4/pi)|I(d)|^2.
The integral is evaluated by adaptive quadrature rather than through the
difference of complex error functions, whose individual terms grow like
exp(d^2 / 4 sigma^2) and cancel catastrophically at large d/sigma.
"""
from __future__ import annotations

import math

import mpmath
import numpy as np
from scipy import special

from .quadrature import QuadratureConfig, gk15

__all__ = [
    "QuadratureConfig",
    "spherical_j1",
    "erf_real",
    "window_integral",
    "window_modsq",
    "exchange_erf",
    "exchange_erf_double",
]

# Below this the direct form loses ~3 eps/x^2 to cancellation; above it the
# five-term series is accurate to well under 1e-16 relative.
J1_SERIES_CUTOFF = 0.1
# Panels are at most this fraction of the oscillation period 2*pi/|d|.
PANEL_PERIOD_FRACTION = 0.5


def spherical_j1(x: float) -> float:
    """Spherical Bessel function j1(x) = sin(x)/x**2 - cos(x)/x.

    Uses the Taylor series below |x| = 0.1 where the direct form cancels.
    """
    x = float(x)
    if abs(x) < J1_SERIES_CUTOFF:
        x2 = x * x
        return x * (1.0 / 3.0 - x2 * (1.0 / 30.0 - x2 * (1.0 / 840.0 - x2 * (1.0 / 45360.0
                                                                        - x2 / 3991680.0))))
    return math.sin(x) / (x * x) - math.cos(x) / x


def erf_real(x: float) -> float:
    return math.erf(x)


def window_integral(p_f: float, sigma: float, d: float, cfg: QuadratureConfig | None = None) -> complex:
    """Gaussian-windowed one-sided momentum integral.

    Computes ``int_0^{p_f} exp(-sigma**2 p**2 + i p d) dp``.  ``d`` may be
    negative, in which case the result is the complex conjugate of the value
    at ``|d|``.

    Raises
    ------
    NonConvergence
        If the subdivision budget in ``cfg`` is exhausted.
    """
    if not p_f > 0:
        raise ValueError("p_f must be positive")
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    if not math.isfinite(d):
        raise ValueError("d must be finite")
    s2 = sigma * sigma
    if d == 0.0:
        value, _ = gk15(lambda p: np.exp(-s2 * p * p), 0.0, p_f, cfg)
        return complex(value.real, 0.0)
    max_panel = PANEL_PERIOD_FRACTION * 2.0 * math.pi / abs(d)
    value, _ = gk15(lambda p: np.exp(-s2 * p * p + 1j * d * p), 0.0, p_f, cfg, max_panel=max_panel)
    return value


def window_modsq(p_f: float, sigma: float, d: float, cfg: QuadratureConfig | None = None) -> float:
    """(4/pi)|I(d)|^2, the exchange correlation (direct term at d=0)."""
    return 4.0 / math.pi * abs(window_integral(p_f, sigma, d, cfg)) ** 2


def exchange_erf(p_f: float, sigma: float, d: float, dps: int = 50) -> float:
    """Exchange term g from the complex error-function product, in high precision.

    Cross-check only: valid at moderate d/sigma given enough working digits.
    """
    with mpmath.workdps(dps):
        s = mpmath.mpf(sigma)
        a = mpmath.mpf(d) / (2 * s)
        sp = s * mpmath.mpf(p_f)
        left = mpmath.erf(sp - 1j * a) - mpmath.erf(-1j * a)
        right = mpmath.erf(sp + 1j * a) - mpmath.erf(1j * a)
        val = mpmath.exp(-mpmath.mpf(d) ** 2 / (2 * s * s)) * left * right / (s * s)
        return float(mpmath.re(val))


def exchange_erf_double(p_f: float, sigma: float, d: float) -> float:
    """The same erf product evaluated in double precision.

    Loses all accuracy once exp(d^2/4 sigma^2) approaches 1/eps; may return
    nan or inf beyond that.
    """
    a = d / (2.0 * sigma)
    sp = sigma * p_f
    with np.errstate(all="ignore"):
        left = special.erf(sp - 1j * a) - special.erf(-1j * a)
        right = special.erf(sp + 1j * a) - special.erf(1j * a)
        return float((np.exp(-d * d / (2.0 * sigma * sigma)) * left * right / sigma**2).real)
