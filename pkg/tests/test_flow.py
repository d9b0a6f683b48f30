"""Flow integration: closed-form oracle, breakdown, schedule handling."""

import math

import numpy as np
import pytest

from quadflow.errors import InvalidSchedule, SingularTime
from quadflow.flow import (constant_field_closed_form, integrate,
                           write_alphas_csv)
from quadflow.schedule import CoefficientSchedule


def landau(E_x=0.0, E_y=0.0):
    return CoefficientSchedule.landau(m=1.0, omega_c=1.0, E_x=E_x, E_y=E_y,
                                      e=1.0)


def test_zero_schedule_stays_at_origin():
    res = integrate(CoefficientSchedule.zero(), 3.0)
    assert res.breakdown is None
    assert np.max(np.abs(res.alphas)) == 0.0


def test_pure_magnetic_quarter_period_values():
    res = integrate(landau(), math.pi / 2)
    al = res.final.alpha
    s2 = math.sqrt(2) / 2
    expected = np.zeros(15)
    expected[5] = expected[6] = 0.25            # (m wc / 4) tan(pi/4)
    expected[8] = expected[9] = s2 * s2         # cos*sin at pi/4
    expected[11] = math.log(s2)
    expected[13] = 0.5
    expected[14] = -1.0
    np.testing.assert_allclose(al, expected, atol=1e-8)


def test_integration_tracks_closed_form_with_electric_field():
    res = integrate(landau(E_x=0.3, E_y=-0.2), 2.8)
    ref = constant_field_closed_form(1.0, 1.0, 0.3, -0.2, 1.0, t=res.ts)
    assert np.max(np.abs(res.alphas - ref)) < 1e-6


def test_closed_form_zero_time_and_alpha2_value():
    assert np.max(np.abs(constant_field_closed_form(1.0, 1.0, 0.3, -0.2,
                                                    t=0.0))) == 0.0
    t, Ex, Ey, wc, e = 1.0, 0.3, -0.2, 1.0, 1.0
    a2 = (-e * Ey / (2 * wc) + e * Ex * t / 2
          + e / (2 * wc) * (Ex * math.sin(wc * t) + Ey * math.cos(wc * t)))
    got = constant_field_closed_form(1.0, wc, Ex, Ey, e, t=t)[1]
    assert abs(got - a2) < 1e-15
    res = integrate(landau(E_x=Ex, E_y=Ey), t)
    assert abs(res.final.alpha[1] - a2) < 1e-6


def test_closed_form_singular_time():
    with pytest.raises(SingularTime):
        constant_field_closed_form(1.0, 1.0, t=math.pi)
    with pytest.raises(SingularTime):
        constant_field_closed_form(1.0, 1.0, t=3.5)
    with pytest.raises(ValueError):
        constant_field_closed_form(1.0, 0.0, t=0.5)


def test_breakdown_at_first_factorization_pole():
    res = integrate(landau(), 3.5)
    assert res.breakdown is not None
    assert abs(res.breakdown.t_break - math.pi) < 1e-3
    assert res.breakdown.index in (6, 7, 12, 15)  # divergent components
    assert res.breakdown.reason in ("magnitude-overflow", "step-underflow")
    assert res.ts[-1] <= res.breakdown.t_break + 1e-12
    assert np.all(np.diff(res.ts) > 0)


def test_magnitude_cap_breakdown_reports_riccati_component():
    # Kanai-Caldirola factorization has a tan-type pole; the quadratic
    # potential parameter crosses the cap first
    sched = CoefficientSchedule.kanai_caldirola(m=1.0, omega=2.0, lam=0.3)
    res = integrate(sched, 2.0)
    assert res.breakdown is not None
    assert res.breakdown.reason == "magnitude-overflow"
    assert res.breakdown.index == 6
    assert abs(res.dense(res.breakdown.t_break)[5]) >= 0.99e8


def test_linear_potential_subalgebra_decouples():
    sched = CoefficientSchedule.from_expressions(
        {1: "0.3", 2: "sin(t)", 3: "0.5*cos(2*t)", 4: "t", 5: "0.2"})
    res = integrate(sched, 1.5)
    assert res.breakdown is None
    assert np.max(np.abs(res.alphas[:, 5:])) == 0.0
    assert np.max(np.abs(res.alphas[:, :5])) > 0.01


def test_tightening_tolerances_reduces_error():
    # max_step must not dominate, or the error saturates below tolerance
    errs = []
    for tol in (1e-3, 1e-6, 1e-9):
        res = integrate(landau(E_x=0.3), 2.0, rtol=tol, atol=tol,
                        max_step=2.0)
        ref = constant_field_closed_form(1.0, 1.0, 0.3, 0.0, 1.0, t=res.ts)
        errs.append(np.max(np.abs(res.alphas - ref)))
    assert errs[0] > errs[1] > errs[2]


def test_time_reversal_returns_to_origin():
    sched = CoefficientSchedule.from_expressions(
        {2: "0.4", 6: "0.3*sin(2*t)", 9: "0.5", 10: "0.5", 14: "0.2*t"})
    T = 0.5
    fwd = integrate(sched, T)
    back = integrate(sched.negated_reverse(T), T,
                     initial_alpha=fwd.final.alpha)
    assert np.max(np.abs(back.final.alpha)) < 1e-6


def test_piecewise_handoff_matches_single_run():
    whole = integrate(landau(E_x=0.2), 0.6)
    first = integrate(landau(E_x=0.2), 0.3)
    second = integrate(landau(E_x=0.2), 0.3, initial_alpha=first.final.alpha)
    # constant coefficients: the flow is autonomous, so state handoff
    # composes exactly
    np.testing.assert_allclose(second.final.alpha, whole.final.alpha,
                               atol=1e-9)


def test_domain_error_in_schedule_surfaces_as_invalid_schedule():
    sched = CoefficientSchedule.from_expressions({6: "ln(cos(t))"})
    with pytest.raises(InvalidSchedule) as err:
        integrate(sched, 2.0)  # cos(t) < 0 past pi/2
    assert err.value.coefficient == 6
    assert err.value.time is not None and err.value.time > 1.5


def test_invalid_arguments():
    with pytest.raises(ValueError):
        integrate(landau(), -1.0)
    with pytest.raises(ValueError):
        integrate(landau(), 1.0, rtol=-1e-10)
    with pytest.raises(ValueError):
        integrate(landau(), 1.0, initial_alpha=np.zeros(3))


def test_dense_output_matches_samples():
    res = integrate(landau(E_x=0.1), 1.2)
    mid = 0.37
    direct = integrate(landau(E_x=0.1), mid).final.alpha
    np.testing.assert_allclose(res.interpolate(mid), direct, atol=1e-8)
    assert res.step_times[0] == 0.0
    assert res.step_times[-1] == pytest.approx(1.2)


def test_alphas_csv_row_count_and_precision(tmp_path):
    res = integrate(landau(), 1.0, samples=200)
    path = tmp_path / "alphas.csv"
    write_alphas_csv(res, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0].split(",") == ["t"] + [f"alpha{i}" for i in range(1, 16)]
    assert len(lines) == 202  # header + 201 sample rows
    values = [float(v) for v in lines[-1].split(",")]
    assert values[0] == pytest.approx(1.0, abs=0)
    # full double precision round-trip
    assert values[6] == res.final.alpha[5]
