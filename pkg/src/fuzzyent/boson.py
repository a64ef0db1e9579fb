"""Polarization states of photon pairs behind a polarizing beam splitter.

Output modes of the interferometer (delay tau = tau_1 - tau_2)::

    E3_e(w) = T_e a1_e(w) + i R_e a2_e(w) exp(i w tau)
    E4_e(w) = i R_e a1_e(w) + conj(T_e) a2_e(w) exp(i w tau)

For the two-photon input sum_{k,k'} int a1_k^dag(n1) a2_k'^dag(n2) g_kk'(n1, n2)|0>
the detection amplitude at (3, e, w1), (4, e', w2) is

    A_ee'(w1, w2) = T_e conj(T_e') exp(i w2 tau) g_ee'(w1, w2)
                    - R_e R_e' exp(i w1 tau) g_e'e(w2, w1)

and the (unnormalized) polarization state is
rho[(e,e'),(s,s')] = int int D(w1) D(w2) A_ee' conj(A_ss') dw1 dw2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import OutOfRange
from .qmat import PHI_MINUS, PHI_PLUS, POL_LABELS, TwoQubitState, projector, validate_and_normalize
from .quadrature import QuadratureConfig, gk15_2d

H, V = 0, 1
POLS = (H, V)
BAND_HALF_WIDTH_SIGMAS = 8.0
PANEL_PERIOD_FRACTION = 0.5


@dataclass(frozen=True)
class PBSCoefficients:
    """Per-polarization transmission and reflection amplitudes."""

    t_h: complex
    t_v: complex
    r_h: complex
    r_v: complex

    def __post_init__(self):
        for t, r, name in ((self.t_h, self.r_h, "h"), (self.t_v, self.r_v, "v")):
            if abs(abs(t) ** 2 + abs(r) ** 2 - 1.0) > 1e-12:
                raise ValueError(f"|t|^2 + |r|^2 != 1 for polarization {name}")

    @classmethod
    def ideal(cls):
        """Transmits v, reflects h."""
        return cls(t_h=0.0, t_v=1.0, r_h=1.0, r_v=0.0)

    @classmethod
    def balanced(cls):
        s = 1.0 / math.sqrt(2.0)
        return cls(t_h=s, t_v=s, r_h=s, r_v=s)

    def t(self, pol):
        return self.t_h if pol == H else self.t_v

    def r(self, pol):
        return self.r_h if pol == H else self.r_v


@dataclass(frozen=True)
class SpectralAmplitude:
    """Two-photon spectral amplitude g_kk'(nu1, nu2).

    ``evaluator(k, k2, nu1, nu2)`` must broadcast over array frequencies.
    ``band`` is the integration interval used for both frequencies; ``None``
    lets the scenario pick a band around the detector centre.
    """

    evaluator: Callable
    band: Optional[tuple] = None
    symmetric: bool = False
    name: str = "custom"

    def __call__(self, k, k2, nu1, nu2):
        return self.evaluator(k, k2, nu1, nu2)

    @classmethod
    def constant(cls, g_hh=1.0, g_vv=1.0, g_hv=0.0, g_vh=0.0, band=None):
        table = np.array([[g_hh, g_hv], [g_vh, g_vv]], dtype=complex)

        def ev(k, k2, nu1, nu2):
            return np.full(np.broadcast(nu1, nu2).shape, table[k, k2])

        return cls(ev, band, symmetric=bool(g_hv == g_vh), name="constant")

    @classmethod
    def gaussian_correlated(cls, width=1.0, correlation=0.0, g_hh=1.0, g_vv=1.0, band=None):
        """Bivariate Gaussian in (nu1, nu2) with given width and correlation coefficient."""
        if not width > 0 or not -1.0 < correlation < 1.0:
            raise ValueError("need width > 0 and -1 < correlation < 1")
        amp = {(H, H): g_hh, (V, V): g_vv}
        w2 = width * width
        rho = correlation

        def ev(k, k2, nu1, nu2):
            q = (nu1 * nu1 - 2.0 * rho * nu1 * nu2 + nu2 * nu2) / (4.0 * w2 * (1.0 - rho * rho))
            return amp.get((k, k2), 0.0) * np.exp(-q + 0j)

        return cls(ev, band, symmetric=True, name="gaussian-correlated")


@dataclass(frozen=True)
class BosonScenario:
    tau: float
    sigma: float
    pbs: PBSCoefficients = field(default_factory=PBSCoefficients.ideal)
    amplitude: SpectralAmplitude = field(default_factory=SpectralAmplitude.constant)
    center: float = 0.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if not math.isfinite(self.tau):
            raise ValueError("tau must be finite")

    def band(self):
        if self.amplitude.band is not None:
            return tuple(self.amplitude.band)
        w = BAND_HALF_WIDTH_SIGMAS * self.sigma
        return (self.center - w, self.center + w)

    def detector(self, w):
        """Gaussian detector response D(w), centred at ``center``."""
        s = self.sigma
        return np.exp(-((w - self.center) ** 2) / (2.0 * s * s)) / (math.sqrt(2.0 * math.pi) * s)


def detection_amplitudes(scn: BosonScenario, w1, w2):
    """A_ee'(w1, w2) stacked along a trailing axis in basis order (hh, hv, vh, vv)."""
    w1, w2 = np.broadcast_arrays(np.asarray(w1, float), np.asarray(w2, float))
    g, pbs, tau = scn.amplitude, scn.pbs, scn.tau
    ph1 = np.exp(1j * w1 * tau)
    ph2 = np.exp(1j * w2 * tau)
    out = []
    for e in POLS:
        for e2 in POLS:
            a = np.zeros(w1.shape, dtype=complex)
            tt = pbs.t(e) * np.conj(pbs.t(e2))
            rr = pbs.r(e) * pbs.r(e2)
            if tt != 0:
                a = a + tt * ph2 * g(e, e2, w1, w2)
            if rr != 0:
                a = a - rr * ph1 * g(e2, e, w2, w1)
            out.append(a)
    return np.stack(out, axis=-1)


def general_coefficients(scn: BosonScenario, cfg: QuadratureConfig | None = None) -> np.ndarray:
    """All 16 unnormalized coefficients rho[(e,e'),(s,s')] by adaptive 2-D quadrature."""
    cfg = cfg or QuadratureConfig(abs_tol=1e-13, rel_tol=1e-11, max_subdivisions=4096)

    def integrand(X, Y):
        A = detection_amplitudes(scn, X, Y)
        wt = scn.detector(X) * scn.detector(Y)
        return (wt[..., None, None] * A[..., :, None] * A[..., None, :].conj()).reshape(X.shape + (16,))

    max_panel = None
    if scn.tau != 0:
        max_panel = PANEL_PERIOD_FRACTION * 2.0 * math.pi / abs(scn.tau)
    lo, hi = scn.band()
    vals, _ = gk15_2d(integrand, (lo, hi), (lo, hi), cfg, max_panel=max_panel)
    return vals.reshape(4, 4)


def general_pair_state(scn: BosonScenario, cfg: QuadratureConfig | None = None) -> TwoQubitState:
    """Normalized polarization state from the full coefficient integrals."""
    return validate_and_normalize(general_coefficients(scn, cfg), POL_LABELS)


def hom_f(sigma: float, tau: float) -> float:
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    return math.exp(-(sigma * tau) ** 2)


def hom_state(sigma: float, tau: float) -> TwoQubitState:
    """0.5 * [[1,0,0,-f],[0,0,0,0],[0,0,0,0],[-f,0,0,1]], f = exp(-sigma^2 tau^2)."""
    f = hom_f(sigma, tau)
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = m[3, 3] = 0.5
    m[0, 3] = m[3, 0] = -0.5 * f
    return TwoQubitState(m, POL_LABELS)


def hom_negativity(sigma: float, tau: float) -> float:
    return hom_f(sigma, tau)


def phi_weights(f: float):
    """Weights of |phi+> and |phi->: ((1 - f)/2, (1 + f)/2)."""
    if not 0.0 <= f <= 1.0:
        raise OutOfRange(f"f = {f!r} outside [0, 1]")
    return 0.5 * (1.0 - f), 0.5 * (1.0 + f)


def phi_mixture(f: float) -> np.ndarray:
    wp, wm = phi_weights(f)
    return wp * projector(PHI_PLUS) + wm * projector(PHI_MINUS)
