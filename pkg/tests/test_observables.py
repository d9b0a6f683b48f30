"""Heisenberg affine map, symplecticity, classical correspondence."""

import json
import math

import numpy as np
from scipy.integrate import simpson

from quadflow.flow import integrate, constant_field_closed_form
from quadflow.observables import (SYMPLECTIC_J, classical_lagrangian,
                                  euler_residuals, heisenberg_closed_form,
                                  heisenberg_map, write_heisenberg_json)
from quadflow.reduction import reference_odes
from quadflow.schedule import CoefficientSchedule


def test_identity_at_zero_alpha():
    m = heisenberg_map(np.zeros(15))
    np.testing.assert_array_equal(m.S, np.eye(4))
    np.testing.assert_array_equal(m.d, np.zeros(4))
    assert m.phase == 0.0


def test_landau_quarter_period_rows():
    al = constant_field_closed_form(1.0, 1.0, t=math.pi / 2)
    m = heisenberg_map(al)
    np.testing.assert_allclose(m.S[0], [0.5, -0.5, 1.0, -1.0], atol=1e-12)
    np.testing.assert_allclose(m.S[2], [-0.25, 0.25, 0.5, -0.5], atol=1e-12)


def test_product_path_matches_closed_form():
    rng = np.random.default_rng(12)
    for _ in range(200):
        al = rng.uniform(-1, 1, 15)
        a = heisenberg_map(al)
        b = heisenberg_closed_form(al)
        assert np.max(np.abs(a.S - b.S)) < 1e-12
        np.testing.assert_array_equal(a.d, b.d)


def test_shift_is_exactly_the_first_parameters():
    rng = np.random.default_rng(13)
    for _ in range(50):
        al = rng.uniform(-1, 1, 15)
        m = heisenberg_map(al)
        np.testing.assert_array_equal(m.d, [al[3], al[4], -al[1], -al[2]])


def test_symplecticity_along_random_flows():
    rng = np.random.default_rng(14)
    for k in range(5):
        sched = CoefficientSchedule.from_constant_vector(
            rng.uniform(-1, 1, 15))
        res = integrate(sched, 0.5)
        for state in res.samples[:: max(1, len(res.samples) // 20)]:
            assert heisenberg_map(state.alpha).symplectic_defect() < 1e-8


def test_map_quadratic_agrees_with_direct_substitution():
    rng = np.random.default_rng(15)
    al = rng.uniform(-0.5, 0.5, 15)
    m = heisenberg_map(al)
    Q = rng.uniform(-1, 1, (4, 4))
    l = rng.uniform(-1, 1, 4)
    c = 0.7
    Qh, lh, ch = m.map_quadratic(Q, l, c)
    for _ in range(10):
        z = rng.uniform(-2, 2, 4)
        zh = m.apply(z)
        direct = zh @ Q @ zh + l @ zh + c
        mapped = z @ Qh @ z + lh @ z + ch
        assert abs(direct - mapped) < 1e-10


def test_push_gaussian_moments():
    rng = np.random.default_rng(16)
    al = rng.uniform(-0.5, 0.5, 15)
    m = heisenberg_map(al)
    mean = rng.uniform(-1, 1, 4)
    A = rng.uniform(-1, 1, (4, 4))
    cov = A @ A.T + np.eye(4)
    mean2, cov2 = m.push_gaussian(mean, cov)
    np.testing.assert_allclose(mean2, m.S @ mean + m.d, atol=1e-14)
    np.testing.assert_allclose(cov2, m.S @ cov @ m.S.T, atol=1e-12)


def test_lagrangian_zero_coefficients():
    rng = np.random.default_rng(17)
    al = rng.uniform(-1, 1, 15)
    assert classical_lagrangian(np.zeros(15), al, np.zeros(15)) == 0.0


def test_free_particle_lagrangian_is_kinetic_energy():
    m_mass = 1.4
    sched = CoefficientSchedule.free(m=m_mass)
    res = integrate(sched, 1.0, initial_alpha=np.array(
        [0, 0.6, -0.3, 0.2, 0.1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0.0]))
    st = res.final
    a = sched.coefficients(st.t)
    adot = reference_odes(a, st.alpha)
    L = classical_lagrangian(a, st.alpha, adot)
    kinetic = (st.alpha[1] ** 2 + st.alpha[2] ** 2) / (2 * m_mass)
    assert abs(L - kinetic) < 1e-12


def test_action_accumulates_alpha1():
    sched = CoefficientSchedule.landau(m=1.0, omega_c=1.0, E_x=0.3, E_y=-0.2)
    res = integrate(sched, 2.5)
    ls = []
    for s in res.samples:
        a = sched.coefficients(s.t)
        ls.append(classical_lagrangian(a, s.alpha, reference_odes(a, s.alpha)))
    action = simpson(np.array(ls), x=res.ts)
    assert abs(action - res.final.alpha[0]) < 1e-8


def test_euler_residuals_vanish_along_flow():
    sched = CoefficientSchedule.landau(m=1.0, omega_c=1.0, E_x=0.2)
    res = integrate(sched, 2.0)
    for s in res.samples[::17]:
        a = sched.coefficients(s.t)
        r = euler_residuals(a, s.alpha, reference_odes(a, s.alpha))
        assert np.max(np.abs(r)) < 1e-8


def test_euler_residuals_origin_pattern():
    a = np.zeros(15)
    a[1] = 1.0  # linear-in-x coefficient only
    r = euler_residuals(a, np.zeros(15), np.zeros(15))
    np.testing.assert_array_equal(r, [0.0, 0.0, -1.0, 0.0])


def test_euler_residuals_match_flow_equations_off_flow():
    rng = np.random.default_rng(18)
    a = rng.uniform(-1, 1, 15)
    al = rng.uniform(-1, 1, 15)
    adot = rng.uniform(-1, 1, 15)
    r = euler_residuals(a, al, adot)
    mu = reference_odes(a, al)
    expected = np.array([mu[3] - adot[3], mu[4] - adot[4],
                         -(mu[1] - adot[1]), -(mu[2] - adot[2])])
    np.testing.assert_allclose(r, expected, atol=1e-12)


def test_heisenberg_json_output(tmp_path):
    res = integrate(CoefficientSchedule.landau(), 0.5, samples=10)
    path = tmp_path / "heisenberg.json"
    write_heisenberg_json(res, path)
    records = json.loads(path.read_text())
    assert len(records) == 11
    first = records[0]
    assert first["t"] == 0.0
    np.testing.assert_array_equal(np.array(first["S"]), np.eye(4))
    assert first["d"] == [0.0, 0.0, 0.0, 0.0]
    sym = np.array(records[-1]["S"])
    defect = np.max(np.abs(sym.T @ SYMPLECTIC_J @ sym - SYMPLECTIC_J))
    assert defect < 1e-8
