"""Independent brute-force evaluators used to validate the closed forms.

* Wick contraction on a discretized Fermi sea (any size).
* Literal second-quantized evaluation on an explicit occupation-number
  state vector with fermionic signs (tiny seas only).
* Two-photon register on discretized frequency bins pushed through the
  beam-splitter mode transformation.

Correlation functions are turned into states by post-selection: the
two-detection amplitude, restricted to the unresolved spin (polarization)
labels, is normalized and read as a two-qubit density matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Literal

import numpy as np

from .boson import POLS, BosonScenario
from .errors import DimensionTooLarge
from .fermi import DetectorProfile
from .qmat import POL_LABELS, SPIN_LABELS, TwoQubitState, validate_and_normalize

FOCK_MAX_MODES = 5
SPINS = (0, 1)


@dataclass(frozen=True)
class DiscretizedFermiSea:
    """M midpoint momentum samples on (0, p_f], both spins filled."""

    M: int
    p_f: float = 1.0
    geometry: Literal["oned", "3d-radial"] = "oned"

    def __post_init__(self):
        if int(self.M) < 1:
            raise ValueError("M must be >= 1")
        if not self.p_f > 0:
            raise ValueError("p_f must be positive")
        if self.geometry not in ("oned", "3d-radial"):
            raise ValueError(f"unknown geometry {self.geometry!r}")

    @property
    def momenta(self) -> np.ndarray:
        return (np.arange(self.M) + 0.5) * (self.p_f / self.M)

    @property
    def weights(self) -> np.ndarray:
        dp = self.p_f / self.M
        if self.geometry == "oned":
            return np.full(self.M, dp)
        p = self.momenta
        return 4.0 * math.pi * p * p * dp


def mode_window(p, profile: DetectorProfile) -> np.ndarray:
    """|c_i|^2 per mode: 1 for ideal detectors, exp(-sigma^2 p^2) for Gaussian ones."""
    p = np.asarray(p, dtype=float)
    if profile.kind == "ideal":
        return np.ones_like(p)
    return np.exp(-(profile.sigma ** 2) * p * p)


def contraction(sea: DiscretizedFermiSea, profile: DetectorProfile, x: float, u: float) -> complex:
    """One-body contraction <Psi^dag(x) Psi(u)> for equal spins."""
    p = sea.momenta
    w = sea.weights * mode_window(p, profile)
    if sea.geometry == "oned":
        return complex(np.sum(w * np.exp(1j * p * (u - x))))
    # radial: angular average of exp(i p.d) is sin(p d)/(p d)
    return complex(np.sum(w * np.sinc(p * abs(u - x) / math.pi)))


def _two_body(G, bra, ket):
    """<(Psi_a(x) Psi_b(y))^dag Psi_c(u) Psi_e(v)> by Wick's theorem.

    ``bra`` = ((a, x), (b, y)), ``ket`` = ((c, u), (e, v)).  The expectation is
    <Psi_b^dag(y) Psi_a^dag(x) Psi_c(u) Psi_e(v)>; nested pairing (a, c)(b, e)
    enters with +, crossed pairing (b, c)(a, e) with -.
    """
    (a, x), (b, y) = bra
    (c, u), (e, v) = ket
    val = 0j
    if a == c and b == e:
        val += G(x, u) * G(y, v)
    if b == c and a == e:
        val -= G(y, u) * G(x, v)
    return val


def _contraction_table(sea, profile, points):
    cache = {(x, u): contraction(sea, profile, x, u) for x in points for u in points}
    return lambda x, u: cache[(x, u)]


def wick_correlation(sea: DiscretizedFermiSea, d: float, profile: DetectorProfile) -> np.ndarray:
    """Unnormalized rho[(s,s'),(t,t')] = <(Psi_t'(d) Psi_t(0))^dag Psi_s'(d) Psi_s(0)> via Wick.

    Detection at r = 0 (first particle) and r' = d (second particle).
    """
    r, r2 = 0.0, float(d)
    G = _contraction_table(sea, profile, (r, r2))
    m = np.zeros((4, 4), dtype=complex)
    for (s, s2), (t, t2) in product(product(SPINS, SPINS), repeat=2):
        # bra operator Psi_t'(r') Psi_t(r); ket operator Psi_s'(r') Psi_s(r)
        m[2 * s + s2, 2 * t + t2] = _two_body(G, ((t2, r2), (t, r)), ((s2, r2), (s, r)))
    return m


def wick_fermi_state(sea: DiscretizedFermiSea, d: float, profile: DetectorProfile) -> TwoQubitState:
    return validate_and_normalize(wick_correlation(sea, d, profile), SPIN_LABELS)


def _pi_terms(s, s2, r, r2, sign):
    """Pi^{+/-}_{ss'}(r, r') as a list of (coefficient, first_op, second_op) with ops applied right to left."""
    c = 1.0 / math.sqrt(2.0)
    # Psi_s(r) Psi_s'(r') +/- Psi_s'(r) Psi_s(r')
    return [(c, (s, r), (s2, r2)), (sign * c, (s2, r), (s, r2))]


def symmetry_resolved(sea: DiscretizedFermiSea, d: float, profile: DetectorProfile, bra_sign: int, ket_sign: int):
    """Matrix 0.5 * <Pi^{bra}_{tt'}^dag Pi^{ket}_{ss'}> indexed [(s,s'),(t,t')]."""
    r, r2 = 0.0, float(d)
    G = _contraction_table(sea, profile, (r, r2))
    m = np.zeros((4, 4), dtype=complex)
    for (s, s2), (t, t2) in product(product(SPINS, SPINS), repeat=2):
        val = 0j
        for cb, a1, a2 in _pi_terms(t, t2, r, r2, bra_sign):
            for ck, k1, k2 in _pi_terms(s, s2, r, r2, ket_sign):
                # operator product a1 a2 => (a1 a2)^dag = a2^dag a1^dag
                val += np.conj(cb) * ck * _two_body(G, (a1, a2), (k1, k2))
        m[2 * s + s2, 2 * t + t2] = 0.5 * val
    return m


def crossing_terms(sea: DiscretizedFermiSea, d: float, profile: DetectorProfile | None = None):
    """The two cross contributions 0.5<Pi+^dag Pi-> and 0.5<Pi-^dag Pi+> as 4x4 matrices."""
    profile = profile or DetectorProfile.ideal()
    return (symmetry_resolved(sea, d, profile, +1, -1),
            symmetry_resolved(sea, d, profile, -1, +1))


def crossing_term(sea: DiscretizedFermiSea, d: float, profile: DetectorProfile | None = None) -> complex:
    """Largest-modulus entry among the crossing correlations (zero by Fermi statistics)."""
    a, b = crossing_terms(sea, d, profile)
    stacked = np.concatenate([a.ravel(), b.ravel()])
    return complex(stacked[np.argmax(np.abs(stacked))])


class FockSpace:
    """Occupation-number space of 2M fermionic modes, mode index j = 2*i + spin."""

    def __init__(self, n_modes: int):
        self.n_modes = n_modes
        self.dim = 1 << n_modes
        idx = np.arange(self.dim)
        self._maps = []
        for j in range(n_modes):
            occ = ((idx >> j) & 1).astype(bool)
            below = idx & ((1 << j) - 1)
            parity = np.array([bin(v).count("1") & 1 for v in below])
            src = idx[occ]
            self._maps.append((src, src ^ (1 << j), 1.0 - 2.0 * parity[occ]))

    def filled(self) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=complex)
        vec[self.dim - 1] = 1.0
        return vec

    def annihilate(self, vec, j):
        src, dst, sign = self._maps[j]
        out = np.zeros_like(vec)
        out[dst] = sign * vec[src]
        return out


def _fock_setup(M, p_f, profile):
    if M > FOCK_MAX_MODES:
        raise DimensionTooLarge(f"M = {M} exceeds {FOCK_MAX_MODES} (state dimension 2^{2 * M})")
    sea = DiscretizedFermiSea(M, p_f, "oned")
    amp = np.sqrt(sea.weights * mode_window(sea.momenta, profile))
    return sea, FockSpace(2 * M), amp


def _apply_field(space, vec, amp, p, spin, r):
    out = np.zeros_like(vec)
    for i, (a, pi) in enumerate(zip(amp, p)):
        out += a * np.exp(1j * pi * r) * space.annihilate(vec, 2 * i + spin)
    return out


def fock_pair_amplitude(M: int, p_f: float, d: float, profile: DetectorProfile, s: int, s2: int,
                        swapped: bool = False) -> np.ndarray:
    """State vector Psi_s'(d) Psi_s(0)|Phi0> (or the product in swapped order)."""
    sea, space, amp = _fock_setup(M, p_f, profile)
    p = sea.momenta
    vec = space.filled()
    if swapped:
        vec = _apply_field(space, vec, amp, p, s2, d)
        return _apply_field(space, vec, amp, p, s, 0.0)
    vec = _apply_field(space, vec, amp, p, s, 0.0)
    return _apply_field(space, vec, amp, p, s2, d)


def fock_correlation(M: int, p_f: float, d: float, profile: DetectorProfile | None = None,
                     literal_order: bool = False) -> np.ndarray:
    """Second-order correlation evaluated on the explicit state vector.

    With ``literal_order`` the bra uses Psi_t'^dag(r') Psi_t^dag(r) as the
    expectation is usually written, which is minus the Gram form.
    """
    profile = profile or DetectorProfile.ideal()
    kets = {(s, s2): fock_pair_amplitude(M, p_f, d, profile, s, s2)
            for s, s2 in product(SPINS, SPINS)}
    bras = kets
    if literal_order:
        bras = {(t, t2): fock_pair_amplitude(M, p_f, d, profile, t, t2, swapped=True)
                for t, t2 in product(SPINS, SPINS)}
    m = np.zeros((4, 4), dtype=complex)
    for (s, s2), (t, t2) in product(product(SPINS, SPINS), repeat=2):
        m[2 * s + s2, 2 * t + t2] = np.vdot(bras[(t, t2)], kets[(s, s2)])
    return m


def fock_fermi_state(M: int, p_f: float, d: float, profile: DetectorProfile | None = None) -> TwoQubitState:
    return validate_and_normalize(fock_correlation(M, p_f, d, profile), SPIN_LABELS)


def frequency_bins(scn: BosonScenario, bins: int):
    lo, hi = scn.band()
    dw = (hi - lo) / bins
    return lo + (np.arange(bins) + 0.5) * dw, dw


def two_photon_register(scn: BosonScenario, bins: int) -> np.ndarray:
    """Symmetric two-photon wavefunction psi[m, n] over modes m = (path, pol, bin).

    |phi0> = (1/sqrt 2) sum_mn psi_mn a_m^dag a_n^dag |0>, normalized to sum |psi|^2 = 1.
    """
    w, _ = frequency_bins(scn, bins)
    L = 4 * bins
    c = np.zeros((L, L), dtype=complex)
    for k, k2 in product(POLS, POLS):
        blk = scn.amplitude(k, k2, w[:, None], w[None, :])
        m0 = (0 * 2 + k) * bins   # path 1
        n0 = (1 * 2 + k2) * bins  # path 2
        c[m0:m0 + bins, n0:n0 + bins] = blk
    psi = (c + c.T) / math.sqrt(2.0) / math.sqrt(2.0)
    norm = math.sqrt(float(np.sum(np.abs(psi) ** 2)))
    return psi / norm


def output_operators(scn: BosonScenario, bins: int):
    """Rows of coefficients u such that E_{3,e}(w_i) = sum_m u_m a_m (and likewise for port 4)."""
    w, _ = frequency_bins(scn, bins)
    L = 4 * bins
    U = np.zeros((2 * bins, L), dtype=complex)
    V = np.zeros((2 * bins, L), dtype=complex)
    pbs = scn.pbs
    ar = np.arange(bins)
    for e in POLS:
        rows = e * bins + ar
        p1 = (0 * 2 + e) * bins + ar
        p2 = (1 * 2 + e) * bins + ar
        U[rows, p1] = pbs.t(e)
        U[rows, p2] = 1j * pbs.r(e) * np.exp(1j * w * scn.tau)
        V[rows, p1] = 1j * pbs.r(e)
        V[rows, p2] = np.conj(pbs.t(e)) * np.exp(1j * w * scn.tau)
    return U, V


def boson_brute_correlation(scn: BosonScenario, bins: int) -> np.ndarray:
    if bins < 8:
        raise ValueError("need at least 8 frequency bins")
    psi = two_photon_register(scn, bins)
    U, V = output_operators(scn, bins)
    # <0| E4 E3 |phi0> = sqrt(2) * u^T psi v
    amp = math.sqrt(2.0) * (U @ psi @ V.T)          # [(e, i), (e', j)]
    amp = amp.reshape(2, bins, 2, bins).transpose(0, 2, 1, 3).reshape(4, bins, bins)
    w, dw = frequency_bins(scn, bins)
    D = scn.detector(w) * dw
    wt = D[:, None] * D[None, :]
    return np.einsum("aij,bij,ij->ab", amp, amp.conj(), wt)


def boson_brute_state(scn: BosonScenario, bins: int) -> TwoQubitState:
    return validate_and_normalize(boson_brute_correlation(scn, bins), POL_LABELS)
