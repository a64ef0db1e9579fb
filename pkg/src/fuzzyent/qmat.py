"""Two-qubit density-matrix algebra.

Basis ordering is first-particle-major: index = 2*first + second, i.e.
(uu, ud, du, dd) for spins or (hh, hv, vh, vv) for photon polarizations.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import NonConvergence, NotAState

SPIN_LABELS = ("uu", "ud", "du", "dd")
POL_LABELS = ("hh", "hv", "vh", "vv")

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
TRACE_TOL = 1e-12
SEPARABLE_TOL = 1e-12
JACOBI_OFF_TOL = 1e-13
JACOBI_MAX_SWEEPS = 50

_S = 1.0 / math.sqrt(2.0)
PHI_PLUS = np.array([_S, 0, 0, _S], dtype=complex)
PHI_MINUS = np.array([_S, 0, 0, -_S], dtype=complex)
PSI_PLUS = np.array([0, _S, _S, 0], dtype=complex)
PSI_MINUS = np.array([0, _S, -_S, 0], dtype=complex)
BELL_STATES = {
    "phi_plus": PHI_PLUS,
    "phi_minus": PHI_MINUS,
    "psi_plus": PSI_PLUS,
    "psi_minus": PSI_MINUS,
}
SWAP = np.eye(4)[[0, 2, 1, 3]]


def projector(vec) -> np.ndarray:
    vec = np.asarray(vec, dtype=complex)
    return np.outer(vec, vec.conj())


SINGLET = projector(PSI_MINUS)
TRIPLET_MIXTURE = (np.eye(4) - SINGLET) / 3.0


def eigvals_h4(m) -> np.ndarray:
    """Eigenvalues of a 4x4 Hermitian matrix by cyclic complex Jacobi rotations.

    Returns the eigenvalues in ascending order.

    Raises
    ------
    ValueError
        If ``m`` is not Hermitian to 1e-10.
    NonConvergence
        If the off-diagonal norm is not reduced below tolerance in 50 sweeps.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError("expected a 4x4 matrix")
    if np.abs(m - m.conj().T).max() > 1e-10 * max(1.0, np.abs(m).max()):
        raise ValueError("matrix is not Hermitian")
    a = [[complex(m[i][j]) for j in range(4)] for i in range(4)]
    for i in range(4):
        a[i][i] = complex(a[i][i].real, 0.0)
    scale = max(1.0, math.sqrt(sum(abs(a[i][j]) ** 2 for i in range(4) for j in range(4))))
    target = JACOBI_OFF_TOL * scale
    for _ in range(JACOBI_MAX_SWEEPS):
        off = math.sqrt(sum(abs(a[i][j]) ** 2 for i in range(4) for j in range(4) if i != j))
        if off <= target:
            return np.sort(np.array([a[i][i].real for i in range(4)]))
        for p in range(3):
            for q in range(p + 1, 4):
                apq = a[p][q]
                r = abs(apq)
                if r < 1e-300:
                    continue
                # unitary U = diag-phase * real rotation on the (p, q) block
                ph = apq / r
                zeta = (a[q][q].real - a[p][p].real) / (2.0 * r)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # columns: U[p,p]=c, U[p,q]=s, U[q,p]=-s*conj(ph), U[q,q]=c*conj(ph)
                upp, upq = c, s
                uqp, uqq = -s * ph.conjugate(), c * ph.conjugate()
                for k in range(4):
                    akp, akq = a[k][p], a[k][q]
                    a[k][p] = akp * upp + akq * uqp
                    a[k][q] = akp * upq + akq * uqq
                for k in range(4):
                    apk, aqk = a[p][k], a[q][k]
                    a[p][k] = upp * apk + uqp.conjugate() * aqk
                    a[q][k] = upq * apk + uqq.conjugate() * aqk
                a[p][q] = a[q][p] = 0j
                a[p][p] = complex(a[p][p].real, 0.0)
                a[q][q] = complex(a[q][q].real, 0.0)
    raise NonConvergence(f"Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps")


@dataclass(frozen=True)
class TwoQubitState:
    """Validated 4x4 density matrix (Hermitian, PSD, optionally unit trace)."""

    entries: np.ndarray
    basis_labels: tuple = SPIN_LABELS
    normalized: bool = True

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.shape != (4, 4) or not np.all(np.isfinite(m)):
            raise NotAState("entries must be a finite 4x4 matrix")
        if np.abs(m - m.conj().T).max() > HERMITIAN_TOL * max(1.0, np.abs(m).max()):
            raise NotAState("matrix is not Hermitian")
        tr = np.trace(m).real
        if self.normalized and abs(tr - 1.0) > TRACE_TOL:
            raise NotAState(f"trace {tr!r} differs from 1")
        lo = eigvals_h4(m)[0]
        if lo < -PSD_TOL * max(1.0, abs(tr)):
            raise NotAState(f"negative eigenvalue {lo:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "basis_labels", tuple(self.basis_labels))

    def __array__(self, dtype=None, copy=None):
        return np.array(self.entries, dtype=dtype)

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries).real)


@dataclass(frozen=True)
class BellWeights:
    w_phi_plus: float
    w_phi_minus: float
    w_psi_plus: float
    w_psi_minus: float

    @property
    def total(self) -> float:
        return self.w_phi_plus + self.w_phi_minus + self.w_psi_plus + self.w_psi_minus

    def as_tuple(self):
        return (self.w_phi_plus, self.w_phi_minus, self.w_psi_plus, self.w_psi_minus)


@dataclass(frozen=True)
class EntanglementReport:
    negativity_eigen: float
    ppt_entangled: bool
    singlet_fraction: float
    min_pt_eigenvalue: float
    pt_eigenvalues: tuple = field(default=(), repr=False)
    negativity_closed: Optional[float] = None


def validate_and_normalize(m, basis_labels: Sequence[str] = SPIN_LABELS) -> TwoQubitState:
    """Hermitize and trace-normalize ``m``.

    Raises
    ------
    NotAState
        On non-finite entries, vanishing trace, or an eigenvalue below
        -1e-8 relative to the trace scale.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (4, 4) or not np.all(np.isfinite(m)):
        raise NotAState("expected a finite 4x4 matrix")
    h = 0.5 * (m + m.conj().T)
    tr = np.trace(h).real
    if tr == 0.0 or abs(tr) < 1e-300:
        raise NotAState("zero trace")
    h = h / tr
    lam = eigvals_h4(h)
    if lam[0] < -1e-8:
        raise NotAState(f"negative eigenvalue {lam[0]:.3e} after normalization")
    # absorb the residual trace rounding so the stored state has trace 1 exactly
    h[np.diag_indices(4)] += (1.0 - np.trace(h).real) / 4.0
    return TwoQubitState(h, tuple(basis_labels), True)


def _as_matrix(rho) -> np.ndarray:
    return rho.entries if isinstance(rho, TwoQubitState) else np.asarray(rho, dtype=complex)


def partial_transpose(rho) -> np.ndarray:
    """Transpose the first tensor factor: [(i,j),(k,l)] -> [(k,j),(i,l)]."""
    r = _as_matrix(rho).reshape(2, 2, 2, 2)
    return np.ascontiguousarray(r.transpose(2, 1, 0, 3)).reshape(4, 4)


def negativity(rho: TwoQubitState) -> EntanglementReport:
    """Negativity 2*max(0, -lambda_min) of the partial transpose, plus the PPT flag."""
    m = _as_matrix(rho)
    lam = eigvals_h4(partial_transpose(m))
    lo = float(lam[0])
    return EntanglementReport(
        negativity_eigen=2.0 * max(0.0, -lo),
        ppt_entangled=lo < -SEPARABLE_TOL,
        singlet_fraction=float(np.real(PSI_MINUS.conj() @ m @ PSI_MINUS)),
        min_pt_eigenvalue=lo,
        pt_eigenvalues=tuple(float(x) for x in lam),
    )


def bell_weights(rho) -> BellWeights:
    m = _as_matrix(rho)
    w = {k: float(np.real(v.conj() @ m @ v)) for k, v in BELL_STATES.items()}
    return BellWeights(w["phi_plus"], w["phi_minus"], w["psi_plus"], w["psi_minus"])


def state_metrics(rho, sigma):
    """Trace distance between two states and, when ``sigma`` is pure, the fidelity <psi|rho|psi>."""
    a, b = _as_matrix(rho), _as_matrix(sigma)
    dist = 0.5 * float(np.abs(eigvals_h4(a - b)).sum())
    lam, vec = np.linalg.eigh(b)
    fid = None
    if np.sum(lam > 1e-10) == 1:
        psi = vec[:, -1]
        fid = float(np.real(psi.conj() @ a @ psi))
    return dist, fid


def werner_state(singlet_fraction: float) -> np.ndarray:
    """lambda*|psi-><psi-| + (1-lambda)*(I - |psi-><psi-|)/3 as a raw matrix."""
    lam = float(singlet_fraction)
    return lam * SINGLET + (1.0 - lam) * TRIPLET_MIXTURE
