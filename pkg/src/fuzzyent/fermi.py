"""Spin states of two fermions detected in a zero-temperature free Fermi gas.

Ideal (point) detectors use the three-dimensional closed form
F(x) = 3 j1(x)/x with x = p_f d.  Gaussian ("fuzzy") detectors use the
one-sided one-dimensional window integral from :mod:`fuzzyent.specfun`.

In both cases the unnormalized state has the structure

    rho[(s,s'),(t,t')] = delta_st delta_s't' * direct - delta_st' delta_s't * exchange

whose partial transpose has spectrum {direct, direct, direct, direct - 2 exchange}.
The exchange term enters with a minus sign (Fermi statistics); with a plus
sign the state would never be entangled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from . import qmat
from .errors import DegenerateState
from .qmat import SINGLET, TRIPLET_MIXTURE, TwoQubitState
from .quadrature import QuadratureConfig
from .specfun import spherical_j1, window_integral

__all__ = [
    "DetectorProfile",
    "FermiScenario",
    "SymmetryComponents",
    "ideal_f",
    "ideal_singlet_fraction",
    "ideal_negativity_closed",
    "ideal_pair_state",
    "symmetry_components",
    "fuzzy_correlations",
    "fuzzy_pair_state",
    "fuzzy_negativity_closed",
    "closed_negativity",
    "pair_state",
]


@dataclass(frozen=True)
class DetectorProfile:
    kind: Literal["ideal", "gaussian"] = "ideal"
    sigma: Optional[float] = None

    def __post_init__(self):
        if self.kind == "ideal":
            if self.sigma is not None:
                raise ValueError("ideal detector takes no sigma")
        elif self.kind == "gaussian":
            if self.sigma is None or not self.sigma > 0:
                raise ValueError("gaussian detector needs sigma > 0")
        else:
            raise ValueError(f"unknown detector kind {self.kind!r}")

    @classmethod
    def ideal(cls):
        return cls("ideal")

    @classmethod
    def gaussian(cls, sigma: float):
        return cls("gaussian", float(sigma))


@dataclass(frozen=True)
class FermiScenario:
    p_f: float
    d: float
    profile: DetectorProfile = DetectorProfile()

    def __post_init__(self):
        _check(self.p_f, self.d)


@dataclass(frozen=True)
class SymmetryComponents:
    """Singlet / triplet-mixture split of the ideal-detector pair state."""

    rho_asym: TwoQubitState
    rho_sym: TwoQubitState
    weight_asym: float
    weight_sym: float

    def recombine(self) -> np.ndarray:
        return self.weight_asym * self.rho_asym.entries + self.weight_sym * self.rho_sym.entries


def _check(p_f, d, sigma=None):
    if not p_f > 0:
        raise ValueError("p_f must be positive")
    if not d >= 0 or not math.isfinite(d):
        raise ValueError("d must be finite and non-negative")
    if sigma is not None and not sigma > 0:
        raise ValueError("sigma must be positive")


def ideal_f(p_f: float, d: float) -> float:
    """F = 3 j1(p_f d)/(p_f d), with F(0) = 1."""
    _check(p_f, d)
    x = p_f * d
    if x == 0.0:
        return 1.0
    return 3.0 * spherical_j1(x) / x


def ideal_singlet_fraction(p_f: float, d: float) -> float:
    F2 = ideal_f(p_f, d) ** 2
    return (1.0 + F2) / (4.0 - 2.0 * F2)


def ideal_negativity_closed(p_f: float, d: float) -> float:
    F2 = ideal_f(p_f, d) ** 2
    return max(0.0, (2.0 * F2 - 1.0) / (2.0 - F2))


def ideal_pair_state(p_f: float, d: float) -> TwoQubitState:
    """Werner-form state with singlet fraction (1 + F^2)/(4 - 2F^2)."""
    lam = ideal_singlet_fraction(p_f, d)
    return TwoQubitState(lam * SINGLET + (1.0 - lam) * TRIPLET_MIXTURE, qmat.SPIN_LABELS)


def symmetry_components(p_f: float, d: float) -> SymmetryComponents:
    """Split the ideal pair state into the spin-antisymmetric and spin-symmetric parts.

    At d = 0 the spatially antisymmetric detection vanishes and the weight is
    entirely on the singlet; as p_f d grows the weights tend to (1/4, 3/4).
    """
    lam = ideal_singlet_fraction(p_f, d)
    return SymmetryComponents(
        rho_asym=TwoQubitState(SINGLET),
        rho_sym=TwoQubitState(TRIPLET_MIXTURE),
        weight_asym=lam,
        weight_sym=1.0 - lam,
    )


def fuzzy_correlations(p_f: float, sigma: float, d: float, cfg: QuadratureConfig | None = None):
    """Direct and exchange correlations (f, g) for Gaussian detectors of spread ``sigma``."""
    _check(p_f, d, sigma)
    i0 = window_integral(p_f, sigma, 0.0, cfg)
    f = 4.0 / math.pi * abs(i0) ** 2
    if d == 0.0:
        return f, f
    g = 4.0 / math.pi * abs(window_integral(p_f, sigma, d, cfg)) ** 2
    return f, min(g, f)


def correlation_matrix(direct: float, exchange: float) -> np.ndarray:
    """Unnormalized delta_st delta_s't' direct - delta_st' delta_s't exchange."""
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = m[3, 3] = direct - exchange
    m[1, 1] = m[2, 2] = direct
    m[1, 2] = m[2, 1] = -exchange
    return m


def state_from_correlations(direct: float, exchange: float) -> TwoQubitState:
    norm = 4.0 * direct - 2.0 * exchange
    if not norm > 1e-300:
        raise DegenerateState(f"vanishing norm 4f - 2g = {norm!r}")
    return TwoQubitState(correlation_matrix(direct, exchange) / norm, qmat.SPIN_LABELS)


def fuzzy_pair_state(p_f: float, sigma: float, d: float, cfg: QuadratureConfig | None = None) -> TwoQubitState:
    f, g = fuzzy_correlations(p_f, sigma, d, cfg)
    return state_from_correlations(f, g)


def closed_negativity(f: float, g: float) -> float:
    """2*mu((f - 2g)/(4f - 2g)) with mu(x) = -x for x < 0, else 0."""
    x = (f - 2.0 * g) / (4.0 * f - 2.0 * g)
    return -2.0 * x if x < 0 else 0.0


def fuzzy_negativity_closed(p_f: float, sigma: float, d: float, cfg: QuadratureConfig | None = None) -> float:
    return closed_negativity(*fuzzy_correlations(p_f, sigma, d, cfg))


def pair_state(scn: FermiScenario, cfg: QuadratureConfig | None = None) -> TwoQubitState:
    if scn.profile.kind == "ideal":
        return ideal_pair_state(scn.p_f, scn.d)
    return fuzzy_pair_state(scn.p_f, scn.profile.sigma, scn.d, cfg)
