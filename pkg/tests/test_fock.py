import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from photonsub.errors import NonHermitianError, StepSizeError
from photonsub.fock import (
    Channel,
    DecayParams,
    DensityMatrix,
    amplitude_decay,
    evolve,
    from_pure,
    min_steps,
    ode_evolve_oracle,
    phase_damping,
)
from photonsub.states import SqueezeParams, fock, photon_subtracted, vacuum


def one_photon():
    return from_pure(fock(1))


def test_from_pure_vacuum():
    rho = from_pure(vacuum(2))
    np.testing.assert_array_equal(rho.elements, np.diag([1, 0, 0]))
    assert rho.trace == 1
    assert rho.purity == 1


def test_from_pure_kitten(kitten):
    state, rho = kitten
    assert abs(rho.trace - 1) < 1e-12
    assert abs(rho.purity - 1) < 1e-12
    assert rho.tail_bound == state.tail_bound
    assert np.all(rho.populations[0::2] == 0)


def test_density_matrix_validation():
    with pytest.raises(NonHermitianError):
        DensityMatrix(np.array([[0.5, 0.1], [0.0, 0.5]]))
    with pytest.raises(ValueError):
        DensityMatrix(np.ones((2, 3)))
    with pytest.raises(ValueError):
        DensityMatrix(np.diag([1.5, -0.5]))
    with pytest.raises(ValueError):
        DensityMatrix(np.array([[np.nan]]))


def test_density_matrix_is_read_only(kitten):
    _, rho = kitten
    with pytest.raises(ValueError):
        rho.elements[0, 0] = 1


def test_decay_params():
    assert DecayParams(0.0).x == math.inf
    assert DecayParams(math.log(2) / 2).x == pytest.approx(1.0)
    with pytest.raises(ValueError):
        DecayParams(-0.1)


def test_amplitude_decay_identity_at_zero(kitten):
    _, rho = kitten
    np.testing.assert_array_equal(amplitude_decay(rho, 0.0).elements, rho.elements)


def test_amplitude_decay_single_photon():
    rho = amplitude_decay(one_photon(), 0.1)
    np.testing.assert_allclose(rho.populations, [1 - math.exp(-0.2), math.exp(-0.2)], atol=1e-15)


def test_amplitude_decay_long_time_is_vacuum(kitten):
    _, rho = kitten
    late = amplitude_decay(rho, 30.0)
    assert late.populations[0] >= 1 - 1e-6
    assert abs(late.trace - 1) < 1e-9


@pytest.mark.parametrize("bad", [-1e-3, math.nan, math.inf])
def test_time_validation(kitten, bad):
    _, rho = kitten
    with pytest.raises(ValueError):
        amplitude_decay(rho, bad)
    with pytest.raises(ValueError):
        phase_damping(rho, bad)


def test_phase_damping_shape(kitten):
    _, rho = kitten
    out = phase_damping(rho, 0.25)
    np.testing.assert_array_equal(out.populations, rho.populations)
    assert out.elements[1, 3] == pytest.approx(rho.elements[1, 3] * math.exp(-1.0), rel=1e-14)
    late = phase_damping(rho, 50.0)
    off = late.elements - np.diag(late.elements.diagonal())
    assert np.max(np.abs(off)) < 1e-30
    np.testing.assert_array_equal(phase_damping(rho, 0.0).elements, rho.elements)


def test_evolve_dispatch(kitten):
    _, rho = kitten
    assert evolve(rho, "none", 3.0) is rho
    np.testing.assert_array_equal(evolve(rho, Channel.PHASE, 0.2).elements, phase_damping(rho, 0.2).elements)
    with pytest.raises(ValueError):
        evolve(rho, "thermal", 0.1)


@pytest.mark.parametrize("kt", [0.05, 0.1, 0.3, 0.5])
@pytest.mark.parametrize("channel", ["amplitude", "phase"])
def test_exact_maps_match_rk4(kitten, kt, channel):
    _, rho = kitten
    exact = evolve(rho, channel, kt)
    ode = ode_evolve_oracle(rho, channel, kt)
    assert np.max(np.abs(exact.elements - ode.elements)) < 1e-6


def test_rk4_single_photon():
    rho = ode_evolve_oracle(one_photon(), "amplitude", 0.1, steps=200)
    np.testing.assert_allclose(rho.populations, [1 - math.exp(-0.2), math.exp(-0.2)], atol=1e-9)


def test_rk4_step_rule(kitten):
    _, rho = kitten
    need = min_steps("amplitude", 0.5, rho.n_max)
    assert need * 0.1 / 0.5 > rho.n_max
    with pytest.raises(StepSizeError):
        ode_evolve_oracle(rho, "amplitude", 0.5, steps=need - 1)
    assert min_steps("phase", 0.5, rho.n_max) > need
    with pytest.raises(ValueError):
        ode_evolve_oracle(rho, "none", 0.1)


@pytest.mark.parametrize("channel", ["amplitude", "phase"])
def test_semigroup(kitten, channel):
    _, rho = kitten
    for t1, t2 in [(0.1, 0.2), (0.35, 0.05), (1.0, 2.0)]:
        a = evolve(evolve(rho, channel, t1), channel, t2).elements
        b = evolve(rho, channel, t1 + t2).elements
        assert np.max(np.abs(a - b)) < 1e-9


@given(
    r=st.floats(0.05, 1.2),
    theta=st.floats(0, 2 * math.pi),
    p=st.integers(0, 3),
    kt=st.floats(0.0, 5.0),
    channel=st.sampled_from(["amplitude", "phase"]),
)
@settings(max_examples=30, deadline=None)
def test_channel_outputs_are_states(r, theta, p, kt, channel):
    rho0 = from_pure(photon_subtracted(SqueezeParams(r, theta), p))
    rho = evolve(rho0, channel, kt)
    assert abs(rho.trace - 1) < 1e-10
    np.testing.assert_array_equal(rho.elements, rho.elements.conj().T)
    assert np.min(np.linalg.eigvalsh(rho.elements)) >= -1e-12
    assert rho.purity <= 1 + 1e-12
