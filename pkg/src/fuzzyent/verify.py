"""Oracle-versus-closed-form verification suites."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import boson, fermi, oracle
from .fermi import DetectorProfile
from .qmat import negativity
from .specfun import exchange_erf, window_modsq

SUITES = ("wick", "fock", "boson", "cancellation", "negativity", "exclusion")
DEFAULT_TOL = {
    "wick": 1e-4,
    "fock": 1e-12,
    "boson": 1e-4,
    "cancellation": 1e-8,
    "negativity": 1e-10,
    "exclusion": 1e-12,
}
VERIFY_D = (0.0, 0.5, 1.0, 1.8148, 3.0, 5.0)


@dataclass(frozen=True)
class VerifyReport:
    suite: str
    cases: int
    max_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return (f"{flag} {self.suite}: {self.cases} cases, max deviation "
                f"{self.max_deviation:.3e} (tolerance {self.tolerance:.1e})")


def _maxdiff(a, b):
    return float(np.abs(np.asarray(a) - np.asarray(b)).max())


def _wick(modes, p_f=1.0):
    devs = []
    sea3 = oracle.DiscretizedFermiSea(modes, p_f, "3d-radial")
    sea1 = oracle.DiscretizedFermiSea(modes, p_f, "oned")
    for d in VERIFY_D:
        devs.append(_maxdiff(oracle.wick_fermi_state(sea3, d, DetectorProfile.ideal()).entries,
                             fermi.ideal_pair_state(p_f, d).entries))
        for s in (0.5, 1.0, 2.0):
            devs.append(_maxdiff(oracle.wick_fermi_state(sea1, d, DetectorProfile.gaussian(s)).entries,
                                 fermi.fuzzy_pair_state(p_f, s, d).entries))
    return devs


def _fock(modes, p_f=1.0):
    devs = []
    sea = oracle.DiscretizedFermiSea(modes, p_f, "oned")
    for d in VERIFY_D:
        for prof in (DetectorProfile.ideal(), DetectorProfile.gaussian(0.7), DetectorProfile.gaussian(2.0)):
            devs.append(_maxdiff(oracle.fock_fermi_state(modes, p_f, d, prof).entries,
                                 oracle.wick_fermi_state(sea, d, prof).entries))
    return devs


def _boson(bins):
    devs = []
    for st in np.linspace(0.0, 2.0, 9):
        scn = boson.BosonScenario(tau=float(st), sigma=1.0)
        devs.append(_maxdiff(oracle.boson_brute_state(scn, bins).entries,
                             boson.hom_state(1.0, float(st)).entries))
    return devs


def _cancellation():
    devs = []
    for s in (0.5, 1.0, 2.0):
        for ratio in np.linspace(0.0, 4.0, 17):
            d = float(ratio * s)
            quad = window_modsq(1.0, s, d)
            ref = exchange_erf(1.0, s, d)
            devs.append(abs(quad - ref) / abs(ref))
    return devs


def _negativity():
    devs = []
    for s in np.linspace(0.1, 10.0, 50):
        for d in np.linspace(0.0, 10.0, 50):
            f, g = fermi.fuzzy_correlations(1.0, float(s), float(d))
            rep = negativity(fermi.state_from_correlations(f, g))
            devs.append(abs(rep.negativity_eigen - fermi.closed_negativity(f, g)))
    for st in np.linspace(0.0, 4.0, 100):
        devs.append(abs(negativity(boson.hom_state(1.0, float(st))).negativity_eigen
                        - boson.hom_negativity(1.0, float(st))))
    return devs


def _exclusion(modes):
    devs = []
    for geometry in ("oned", "3d-radial"):
        sea = oracle.DiscretizedFermiSea(modes, 1.0, geometry)
        for d in (0.0, 1.0, 3.7):
            for prof in (DetectorProfile.ideal(), DetectorProfile.gaussian(1.0)):
                devs.append(abs(oracle.crossing_term(sea, d, prof)))
    return devs


def verify(suite: str, modes: int | None = None, bins: int | None = None, tol: float | None = None) -> VerifyReport:
    """Run one verification suite; failure is reported, not raised."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    if suite == "wick":
        devs = _wick(modes or 512)
    elif suite == "fock":
        devs = _fock(modes or 3)
    elif suite == "boson":
        devs = _boson(bins or 128)
    elif suite == "cancellation":
        devs = _cancellation()
    elif suite == "negativity":
        devs = _negativity()
    else:
        devs = _exclusion(modes or 64)
    worst = max(devs) if devs else 0.0
    if math.isnan(worst):
        worst = math.inf
    return VerifyReport(suite, len(devs), worst, DEFAULT_TOL[suite] if tol is None else tol)
