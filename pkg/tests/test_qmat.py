import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from fuzzyent import fermi
from fuzzyent.errors import NotAState
from fuzzyent.qmat import (PHI_MINUS, PHI_PLUS, PSI_MINUS, SINGLET, SWAP, TwoQubitState, bell_weights, eigvals_h4,
                           negativity, partial_transpose, projector, state_metrics, validate_and_normalize,
                           werner_state)

I4 = np.eye(4) / 4


def random_state(rng, rank=4):
    a = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    m = a @ a.conj().T
    return m / np.trace(m).real


def test_normalize_identity_and_scaling():
    assert np.allclose(validate_and_normalize(np.eye(4)).entries, I4)
    assert np.allclose(validate_and_normalize(2 * np.eye(4)).entries, I4)


def test_reject_negative_and_zero_trace():
    with pytest.raises(NotAState):
        validate_and_normalize(np.diag([1, 1, 1, -0.5]))
    with pytest.raises(NotAState):
        validate_and_normalize(np.zeros((4, 4)))
    with pytest.raises(NotAState):
        TwoQubitState(np.diag([1.0, 0, 0, 0.1]))  # trace != 1


def test_state_is_immutable():
    s = TwoQubitState(I4)
    with pytest.raises(ValueError):
        s.entries[0, 0] = 1.0


def test_partial_transpose_index_map():
    m = np.arange(16).reshape(4, 4)
    expected = np.array([[0, 1, 8, 9], [4, 5, 12, 13], [2, 3, 10, 11], [6, 7, 14, 15]])
    assert np.array_equal(partial_transpose(m).real, expected)


def test_partial_transpose_examples():
    assert np.allclose(partial_transpose(I4), I4)
    assert eigvals_h4(partial_transpose(SINGLET))[0] == pytest.approx(-0.5, abs=1e-14)


@pytest.mark.parametrize("seed", range(5))
def test_partial_transpose_involution_and_trace(seed):
    rho = random_state(np.random.default_rng(seed))
    pt = partial_transpose(rho)
    assert np.allclose(partial_transpose(pt), rho, atol=1e-15)
    assert np.trace(pt) == pytest.approx(np.trace(rho), abs=1e-15)


def test_eigvals_examples():
    assert np.allclose(eigvals_h4(np.diag([4.0, 3, 2, 1])), [1, 2, 3, 4])
    assert np.allclose(eigvals_h4(partial_transpose(SINGLET)), [-0.5, 0.5, 0.5, 0.5], atol=1e-14)


@pytest.mark.parametrize("seed", range(20))
def test_eigvals_determinant_oracle(seed):
    rng = np.random.default_rng(100 + seed)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = a + a.conj().T
    lam = eigvals_h4(h)
    assert np.all(np.diff(lam) >= 0)
    assert lam.sum() == pytest.approx(np.trace(h).real, abs=1e-12)
    for x in lam:
        assert abs(np.linalg.det(h - x * np.eye(4))) <= 1e-9


def test_eigvals_degenerate_and_rejects_nonhermitian():
    assert np.allclose(eigvals_h4(np.ones((4, 4))), [0, 0, 0, 4], atol=1e-14)
    with pytest.raises(ValueError):
        eigvals_h4(np.triu(np.ones((4, 4))))


def test_negativity_examples():
    rep = negativity(TwoQubitState(SINGLET))
    assert rep.negativity_eigen == pytest.approx(1.0, abs=1e-14)
    assert rep.ppt_entangled
    rep = negativity(TwoQubitState(I4))
    assert rep.negativity_eigen == 0.0 and not rep.ppt_entangled


def test_negativity_werner_oracle():
    # eigen-decomposition oracle: PT of the lambda = 0.7 Werner state via numpy
    rho = werner_state(0.7)
    lo = np.linalg.eigvalsh(partial_transpose(rho))[0]
    rep = negativity(TwoQubitState(rho))
    assert rep.negativity_eigen == pytest.approx(-2 * lo, abs=1e-14)
    assert rep.negativity_eigen == pytest.approx(0.4, abs=1e-14)
    assert rep.singlet_fraction == pytest.approx(0.7, abs=1e-14)


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, (2, 4, 4), elements=st.floats(-1, 1)))
def test_negativity_properties(parts):
    a = parts[0] + 1j * parts[1]
    m = a @ a.conj().T + 1e-3 * np.eye(4)
    rho = validate_and_normalize(m)
    rep = negativity(rho)
    assert 0.0 <= rep.negativity_eigen <= 1.0 + 1e-12
    assert (rep.negativity_eigen > 2e-12) == rep.ppt_entangled
    swapped = negativity(validate_and_normalize(SWAP @ rho.entries @ SWAP))
    assert swapped.negativity_eigen == pytest.approx(rep.negativity_eigen, abs=1e-12)
    w = bell_weights(rho)
    assert all(-1e-12 <= x <= 1 + 1e-12 for x in w.as_tuple())
    assert w.total <= 1 + 1e-12


def test_bell_weights_examples():
    assert np.allclose(bell_weights(projector(PHI_MINUS)).as_tuple(), (0, 1, 0, 0))
    assert np.allclose(bell_weights(I4).as_tuple(), (0.25,) * 4)
    assert bell_weights(fermi.ideal_pair_state(1.0, 0.0)).w_psi_minus == pytest.approx(1.0, abs=1e-14)


def test_state_metrics():
    assert state_metrics(I4, I4)[0] == pytest.approx(0.0, abs=1e-15)
    dist, fid = state_metrics(projector(PHI_PLUS), projector(PHI_MINUS))
    assert dist == pytest.approx(1.0, abs=1e-14)
    assert fid == pytest.approx(0.0, abs=1e-14)
    assert state_metrics(I4, projector(PSI_MINUS))[1] == pytest.approx(0.25)
    assert state_metrics(I4, I4)[1] is None


def test_ideal_state_far_apart_is_maximally_mixed():
    # F(1000) = 3 j1(1000)/1000 <= 3/1000^2, so distance <= (3/4)F^2 ~ 7e-12
    dist, _ = state_metrics(fermi.ideal_pair_state(1.0, 1000.0), I4)
    assert dist <= 1e-5
