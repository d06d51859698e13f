import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm
from scipy.special import gammaln

from photonsub.errors import DegenerateStateError, TruncationError
from photonsub.states import (
    SqueezeParams,
    annihilate,
    fock,
    photon_subtracted,
    squeezed_vacuum,
    vacuum,
)


def ladder(dim):
    a = np.diag(np.sqrt(np.arange(1, dim)), 1).astype(complex)
    return a, a.conj().T


def phase_fixed(v):
    i = np.argmax(np.abs(v))
    return v * abs(v[i]) / v[i]


def series_squeezed_vacuum(xi, dim):
    """exp(xi a^dag^2 / 2)|0> by summing the exponential series term by term."""
    _, ad = ladder(dim)
    ad2 = ad @ ad
    term = np.zeros(dim, complex)
    term[0] = 1
    total = term.copy()
    for j in range(dim):
        term = (xi / 2) * (ad2 @ term) / (j + 1)
        total += term
        if np.linalg.norm(term) < 1e-30:
            break
    return phase_fixed(total / np.linalg.norm(total))


def test_squeeze_params_reduces_theta():
    p = SqueezeParams(0.5, -math.pi / 2)
    assert p.theta == pytest.approx(3 * math.pi / 2)
    assert SqueezeParams(0.5, 4 * math.pi).theta == pytest.approx(0.0)
    assert p.xi_mag == pytest.approx(math.tanh(0.5))
    assert abs(p.xi) == pytest.approx(math.tanh(0.5))


@pytest.mark.parametrize("bad", [dict(r=-0.1), dict(r=math.inf), dict(r=0.1, theta=math.nan)])
def test_squeeze_params_rejects(bad):
    with pytest.raises(ValueError):
        SqueezeParams(**bad)


@given(st.floats(0, 20), st.floats(-100, 100))
def test_squeeze_params_invariants(r, theta):
    p = SqueezeParams(r, theta)
    assert 0 <= p.theta < 2 * math.pi
    assert 0 <= p.xi_mag <= 1


def test_vacuum_at_zero_squeezing():
    s = squeezed_vacuum(SqueezeParams(0.0))
    assert s.amplitudes.tolist() == [1.0]
    assert s.tail_bound == 0.0


def test_squeezed_vacuum_matches_exponential_series():
    params = SqueezeParams(0.31)
    s = squeezed_vacuum(params)
    ref = series_squeezed_vacuum(params.xi, s.n_max + 1)
    np.testing.assert_allclose(s.amplitudes, ref, atol=1e-12)
    assert abs(s.norm - 1) < 1e-12
    # |c2|^2 = tanh^2(r)/2 sech(r) relative to the vacuum normalisation
    c2 = abs(s.amplitudes[2]) ** 2
    assert c2 == pytest.approx(math.tanh(0.31) ** 2 / 2 / math.cosh(0.31), rel=1e-10)


def test_squeezed_vacuum_parity_at_pi():
    s = squeezed_vacuum(SqueezeParams(0.8, math.pi))
    assert np.all(s.amplitudes[1::2] == 0)
    # e^{i pi k} phases alternate the sign of |2k> amplitudes
    assert np.all(np.sign(s.amplitudes[0:12:2].real) == [1, -1, 1, -1, 1, -1])


def test_cutoff_is_smallest_even_meeting_tol():
    params = SqueezeParams(0.9)
    s = squeezed_vacuum(params, tol=1e-12)
    assert s.n_max % 2 == 0
    assert s.tail_bound < 1e-12
    # two photons fewer would violate the tolerance
    smaller = squeezed_vacuum(params, n_max=s.n_max - 2)
    assert smaller.tail_bound >= 1e-12


def test_tail_bound_is_an_upper_bound():
    params = SqueezeParams(1.0)
    s = photon_subtracted(params, 1, tol=1e-6)
    big = photon_subtracted(params, 1, n_max=4 * s.n_max)
    true_tail = np.sum(big.populations[s.n_max + 1:])
    assert true_tail <= s.tail_bound
    assert s.tail_bound < 1e-6


def test_cutoff_overflow():
    with pytest.raises(TruncationError):
        squeezed_vacuum(SqueezeParams(6.0), tol=1e-12)


def test_photon_subtracted_parity_and_norm(kitten):
    state, _ = kitten
    assert np.all(state.amplitudes[0::2] == 0)
    assert abs(state.norm - 1) < 1e-12


def test_photon_subtracted_mean_photon_number(kitten):
    state, _ = kitten
    xi = math.tanh(0.31)
    closed = (1 + 2 * xi ** 2) / (1 - xi ** 2)
    n = np.arange(state.n_max + 1)
    assert np.sum(n * state.populations) == pytest.approx(closed, abs=1e-9)
    assert closed == pytest.approx(1.29765, abs=1e-5)


def test_photon_subtracted_zero_norm():
    with pytest.raises(DegenerateStateError):
        photon_subtracted(SqueezeParams(0.0), 1)


@pytest.mark.parametrize("r", [0.1, 0.3, 0.5, 0.8, 1.1, 1.5])
@pytest.mark.parametrize("theta", [0.0, math.pi / 4, math.pi])
@pytest.mark.parametrize("p", [1, 2, 3])
def test_parity_grid(r, theta, p):
    s = photon_subtracted(SqueezeParams(r, theta), p)
    assert np.all(s.amplitudes[(p + 1) % 2::2] == 0)
    assert abs(s.norm - 1) < 1e-12


@pytest.mark.parametrize("r,theta", [(0.31, 0.0), (0.8, 1.0), (1.2, 2.5)])
def test_subtracted_equals_annihilated_squeezed_vacuum(r, theta):
    params = SqueezeParams(r, theta)
    direct = photon_subtracted(params, 1, tol=1e-16)
    sv = squeezed_vacuum(params, n_max=direct.n_max + 1)
    oracle = annihilate(sv)
    np.testing.assert_allclose(direct.amplitudes, oracle.amplitudes, atol=1e-10)


def test_p1_equals_squeezed_single_photon():
    """a S|0> and S|1> coincide up to phase; S built by matrix exponential."""
    params = SqueezeParams(0.31, 0.7)
    dim = 160
    a, ad = ladder(dim)
    z = params.zeta
    squeeze = expm(0.5 * (z * ad @ ad - np.conj(z) * a @ a))
    one = np.zeros(dim, complex)
    one[1] = 1
    ref = phase_fixed(squeeze @ one)
    s = photon_subtracted(params, 1)
    np.testing.assert_allclose(s.amplitudes, ref[: s.n_max + 1], atol=1e-10)


def test_printed_odd_series_coefficients():
    """Cross-check against the printed odd-p series with m = 0.

    The printed denominator sqrt(2s+1) does not normalise to the same state;
    sqrt((2s+1)!) does. The discrepancy is reported, not asserted away.
    """
    params = SqueezeParams(0.31)
    state = photon_subtracted(params, 1)
    s = np.arange((state.n_max + 1) // 2)
    xi = params.xi_mag
    log_common = (s + 1) * math.log(xi / 2) - gammaln(s + 2) + gammaln(2 * s + 3)
    printed = np.exp(log_common - 0.5 * np.log(2 * s + 1))
    factorial_form = np.exp(log_common - 0.5 * gammaln(2 * s + 2))
    printed /= np.linalg.norm(printed)
    factorial_form /= np.linalg.norm(factorial_form)
    odd = state.amplitudes[1::2].real
    np.testing.assert_allclose(factorial_form, odd, atol=1e-12)
    gap = np.max(np.abs(printed - odd))
    print(f"printed odd-series coefficients deviate from a S|0> by {gap:.3e} (sqrt(2s+1) vs sqrt((2s+1)!))")
    assert gap > 1e-3


@pytest.mark.parametrize("r,p", [(0.31, 1), (0.8, 1), (1.2, 2), (0.5, 0)])
def test_cutoff_stability(r, p):
    tol = 1e-12
    s = photon_subtracted(SqueezeParams(r, 0.3), p, tol=tol)
    doubled = photon_subtracted(SqueezeParams(r, 0.3), p, n_max=2 * s.n_max + p % 2)
    assert np.max(np.abs(doubled.amplitudes[: s.n_max + 1] - s.amplitudes)) < tol


@given(st.floats(0.05, 1.5), st.floats(0, 2 * math.pi), st.integers(0, 4))
@settings(max_examples=40, deadline=None)
def test_norm_within_tail(r, theta, p):
    s = photon_subtracted(SqueezeParams(r, theta), p)
    total = float(np.sum(s.populations))
    assert 1 - s.tail_bound - 1e-14 <= total <= 1 + 1e-14
    assert s.tail_bound <= 1e-12
    assert abs(s.amplitudes[np.argmax(np.abs(s.amplitudes))].imag) == 0


def test_fock_helpers():
    assert vacuum(3).amplitudes.tolist() == [1, 0, 0, 0]
    assert fock(2).amplitudes.tolist() == [0, 0, 1]
    with pytest.raises(ValueError):
        fock(3, 1)


def test_fock_state_is_read_only(kitten):
    state, _ = kitten
    with pytest.raises(ValueError):
        state.amplitudes[0] = 1
