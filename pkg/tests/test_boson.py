import math

import numpy as np
import pytest

from fuzzyent import boson
from fuzzyent.boson import BosonScenario, PBSCoefficients, SpectralAmplitude
from fuzzyent.errors import OutOfRange
from fuzzyent.qmat import PHI_MINUS, bell_weights, negativity, projector


def test_pbs_validation():
    PBSCoefficients.ideal()
    PBSCoefficients.balanced()
    with pytest.raises(ValueError):
        PBSCoefficients(1.0, 1.0, 1.0, 0.0)


def test_hom_state_examples():
    assert np.allclose(boson.hom_state(1.0, 0.0).entries, projector(PHI_MINUS), atol=1e-15)
    far = boson.hom_state(1.0, 40.0)
    assert np.allclose(far.entries, np.diag([0.5, 0, 0, 0.5]))
    assert negativity(far).negativity_eigen == 0.0
    assert boson.hom_f(1.0, 1.0) == pytest.approx(0.36788, abs=1e-5)


def test_hom_negativity_closed_form():
    for st in np.linspace(0, 4, 41):
        n = negativity(boson.hom_state(2.0, st / 2.0))
        assert n.negativity_eigen == pytest.approx(math.exp(-st**2), abs=1e-12)
        assert n.min_pt_eigenvalue == pytest.approx(-math.exp(-st**2) / 2, abs=1e-12)
    taus = np.linspace(0, 3, 31)
    ns = [boson.hom_negativity(1.3, t) for t in taus]
    assert all(b < a for a, b in zip(ns, ns[1:]))


def test_phi_weights():
    assert boson.phi_weights(1.0) == (0.0, 1.0)
    assert boson.phi_weights(0.0) == (0.5, 0.5)
    with pytest.raises(OutOfRange):
        boson.phi_weights(1.5)
    for tau in np.linspace(0, 3, 13):
        f = boson.hom_f(1.0, tau)
        wp, wm = boson.phi_weights(f)
        assert wp + wm == pytest.approx(1.0)
        st = boson.hom_state(1.0, tau)
        w = bell_weights(st)
        assert (w.w_phi_plus, w.w_phi_minus) == pytest.approx((wp, wm), abs=1e-12)
        assert w.w_psi_plus == 0 and w.w_psi_minus == 0
        assert np.allclose(boson.phi_mixture(f), st.entries, atol=1e-15)


def test_general_state_zero_delay_is_phi_minus():
    st = boson.general_pair_state(BosonScenario(tau=0.0, sigma=1.0))
    assert np.allclose(st.entries, projector(PHI_MINUS), atol=1e-12)


@pytest.mark.parametrize("sigma,tau", [(1.0, 1.0), (2.0, 0.5), (0.5, 3.0), (1.0, 0.3)])
def test_general_state_matches_closed_form(sigma, tau):
    st = boson.general_pair_state(BosonScenario(tau=tau, sigma=sigma))
    assert np.abs(st.entries - boson.hom_state(sigma, tau).entries).max() <= 1e-6


def test_general_state_only_four_coefficients_survive():
    amp = SpectralAmplitude.gaussian_correlated(width=0.8, correlation=0.3, g_hh=1.0, g_vv=0.6)
    m = boson.general_coefficients(BosonScenario(tau=0.8, sigma=1.1, amplitude=amp))
    keep = np.zeros((4, 4), bool)
    keep[0, 0] = keep[3, 3] = keep[0, 3] = keep[3, 0] = True
    assert np.abs(m[~keep]).max() <= 1e-14 * np.abs(m).max()
    assert abs(m[0, 3]) > 0


def test_unequal_amplitudes_reduce_negativity():
    amp = SpectralAmplitude.constant(g_hh=2.0, g_vv=1.0)
    st = boson.general_pair_state(BosonScenario(tau=0.0, sigma=1.0, amplitude=amp))
    m = st.entries
    assert np.allclose(np.diag(m).real, [0.8, 0, 0, 0.2], atol=1e-12)
    assert m[0, 3].real == pytest.approx(-0.4, abs=1e-12)
    assert abs(m[0, 3]) < max(m[0, 0].real, m[3, 3].real)
    assert negativity(st).negativity_eigen == pytest.approx(0.8, abs=1e-12)


def test_negativity_even_in_tau():
    amp = SpectralAmplitude.gaussian_correlated(width=1.0, correlation=-0.4)
    n = [negativity(boson.general_pair_state(BosonScenario(tau=t, sigma=0.9, amplitude=amp))).negativity_eigen
         for t in (0.7, -0.7)]
    assert n[0] == pytest.approx(n[1], abs=1e-10)


def test_frequency_label_swap_symmetry():
    base = SpectralAmplitude.gaussian_correlated(width=1.2, correlation=0.5)
    swapped = SpectralAmplitude(lambda k, k2, a, b: base(k2, k, b, a), symmetric=True)
    scn = BosonScenario(tau=0.6, sigma=1.0, amplitude=base)
    scn2 = BosonScenario(tau=0.6, sigma=1.0, amplitude=swapped)
    assert np.allclose(boson.general_pair_state(scn).entries, boson.general_pair_state(scn2).entries, atol=1e-12)


def test_center_offset_cancels():
    a = boson.general_pair_state(BosonScenario(tau=0.9, sigma=1.0))
    b = boson.general_pair_state(BosonScenario(tau=0.9, sigma=1.0, center=3.0))
    assert np.allclose(a.entries, b.entries, atol=1e-10)


def test_balanced_splitter_bunching():
    # a non-polarizing 50/50 splitter with equal spectra gives |phi+> at any delay
    st = boson.general_pair_state(BosonScenario(tau=0.7, sigma=1.3, pbs=PBSCoefficients.balanced()))
    assert bell_weights(st).w_phi_plus == pytest.approx(1.0, abs=1e-10)
