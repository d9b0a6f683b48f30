"""Reduction pipeline (w, nu, mu) against the transcribed flow equations."""

import numpy as np
import pytest

from quadflow.errors import SingularNu
from quadflow.flow import integrate
from quadflow.reduction import assemble, reference_odes
from quadflow.schedule import CoefficientSchedule


def test_origin_gives_identity_nu_and_mu_equals_a():
    rng = np.random.default_rng(0)
    a = rng.uniform(-1, 1, 15)
    state = assemble(a, np.zeros(15))
    np.testing.assert_array_equal(state.nu, np.eye(15))
    np.testing.assert_array_equal(state.mu, a)
    np.testing.assert_array_equal(state.w, a)


def test_reference_odes_at_origin_equal_a():
    rng = np.random.default_rng(1)
    a = rng.uniform(-1, 1, 15)
    np.testing.assert_array_equal(reference_odes(a, np.zeros(15)), a)


def test_kinetic_only_rhs_at_origin():
    m = 1.7
    a = np.zeros(15)
    a[8] = a[9] = 1 / (2 * m)
    dot = reference_odes(a, np.zeros(15))
    assert dot[8] == dot[9] == 1 / (2 * m)
    assert np.count_nonzero(dot) == 2


def test_pipeline_matches_transcription_on_random_states():
    rng = np.random.default_rng(42)
    worst = 0.0
    for _ in range(300):
        a = rng.uniform(-1, 1, 15)
        alpha = rng.uniform(-1, 1, 15)
        state = assemble(a, alpha)
        worst = max(worst, float(np.max(np.abs(state.mu
                                               - reference_odes(a, alpha)))))
    assert worst < 1e-10


def test_pipeline_matches_transcription_along_constant_field_flow():
    sched = CoefficientSchedule.landau(m=1.0, omega_c=1.0)
    alpha = integrate(sched, 0.5).final.alpha
    a = sched.coefficients(0.5)
    state = assemble(a, alpha)
    assert np.max(np.abs(state.mu - reference_odes(a, alpha))) < 1e-10


def test_det_nu_is_one():
    rng = np.random.default_rng(7)
    for _ in range(200):
        alpha = rng.uniform(-0.5, 0.5, 15)
        state = assemble(rng.uniform(-1, 1, 15), alpha)
        assert abs(np.linalg.det(state.nu) - 1.0) < 1e-9


def test_mu_is_linear_in_a():
    rng = np.random.default_rng(3)
    alpha = rng.uniform(-1, 1, 15)
    a1 = rng.uniform(-1, 1, 15)
    a2 = rng.uniform(-1, 1, 15)
    lhs = assemble(a1 + a2, alpha).mu
    rhs = assemble(a1, alpha).mu + assemble(a2, alpha).mu
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)
    # nu itself does not depend on a
    np.testing.assert_array_equal(assemble(a1, alpha).nu,
                                  assemble(a2, alpha).nu)


def test_nu_times_mu_recovers_w():
    rng = np.random.default_rng(9)
    a = rng.uniform(-1, 1, 15)
    alpha = rng.uniform(-1, 1, 15)
    state = assemble(a, alpha)
    np.testing.assert_allclose(state.nu @ state.mu, state.w, atol=1e-12)


def test_overflowing_alpha_raises_singular_nu():
    a = np.ones(15)
    alpha = np.zeros(15)
    alpha[11] = 400.0  # exp(+-4*alpha12) overflows the determinant
    with pytest.raises(SingularNu):
        assemble(a, alpha)


def test_invalid_shapes_rejected():
    with pytest.raises(ValueError):
        assemble(np.zeros(14), np.zeros(15))
    with pytest.raises(ValueError):
        assemble(np.zeros(15), np.full(15, np.nan))
