"""Integration of the transformation-parameter flow alpha_dot = mu(a(t), alpha).

The flow starts from alpha(0) = 0 (the evolution operator is the identity at
t = 0) and is advanced with the embedded 5(4) pair from :mod:`.rk` at tight
default tolerances.  The factorization has coordinate singularities - for
the pure-magnetic-field case alpha_6 grows like tan(omega_c t / 2) and
diverges at omega_c t = pi - so breakdown is a first-class result, not an
exception: integration halts when any |alpha_i| exceeds ``magnitude_cap``
or when the step size underflows, and reports the offending component and a
bracketed breakdown time.

:func:`constant_field_closed_form` holds the analytic solution for constant
perpendicular magnetic plus in-plane electric fields; it is the oracle the
acceptance suite integrates against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rk
from .algebra import N_GENERATORS
from .errors import SingularNu, SingularTime
from .reduction import assemble
from .schedule import CoefficientSchedule

__all__ = ["AlphaState", "Breakdown", "FlowResult", "integrate",
           "constant_field_closed_form", "write_alphas_csv"]


@dataclass(frozen=True)
class AlphaState:
    t: float
    alpha: np.ndarray


@dataclass(frozen=True)
class Breakdown:
    t_break: float
    index: int            # offending generator index, 1-based
    reason: str           # "magnitude-overflow" | "step-underflow"


@dataclass
class FlowResult:
    samples: list               # ordered AlphaState, strictly increasing t
    breakdown: Breakdown | None
    dense: rk.DenseSolution
    n_rhs: int

    @property
    def ts(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    @property
    def alphas(self) -> np.ndarray:
        return np.array([s.alpha for s in self.samples])

    @property
    def final(self) -> AlphaState:
        return self.samples[-1]

    @property
    def step_times(self) -> np.ndarray:
        """Endpoints of the accepted integrator steps (natural time grid)."""
        if not self.dense.segments:
            return np.array([0.0])
        ends = [seg.t0 for seg in self.dense.segments]
        ends.append(self.dense.segments[-1].t0 + self.dense.segments[-1].h)
        return np.array(ends)

    def interpolate(self, t):
        """Dense-output evaluation of alpha(t) within the integrated span."""
        return self.dense(t)


def integrate(schedule: CoefficientSchedule, t_end: float, *, rtol=1e-10,
              atol=1e-10, max_step=None, magnitude_cap=1e8, samples=200,
              initial_alpha=None) -> FlowResult:
    """Integrate the flow from t = 0 to ``t_end``.

    Parameters
    ----------
    schedule : coefficient functions a(t); non-finite evaluations raise
        InvalidSchedule
    samples : number of uniform interior sample points; accepted step
        endpoints are merged in as well
    magnitude_cap : |alpha_i| bound beyond which the factorization is
        declared broken down
    initial_alpha : optional 15-vector for piecewise continuation (defaults
        to zeros, the identity factorization)

    Returns
    -------
    FlowResult; if breakdown occurred, samples stop at ``t_break``.
    """
    if t_end <= 0:
        raise ValueError("t_end must be positive")
    alpha0 = np.zeros(N_GENERATORS) if initial_alpha is None \
        else np.asarray(initial_alpha, dtype=float).copy()
    if alpha0.shape != (N_GENERATORS,):
        raise ValueError("initial_alpha must be a 15-vector")

    def rhs(t, alpha):
        a = schedule.coefficients(t)          # InvalidSchedule propagates
        if not np.all(np.isfinite(alpha)):
            return np.full(N_GENERATORS, np.nan)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            try:
                # assemble's det(nu) = 1 assertion doubles as a conditioning
                # sentinel: once the matrix entries outrun double precision
                # the factorization data is meaningless, so reject the step
                # and let the controller degrade into an underflow breakdown
                return assemble(a, alpha).mu
            except (SingularNu, ValueError, np.linalg.LinAlgError):
                return np.full(N_GENERATORS, np.nan)

    res = rk.solve(rhs, 0.0, alpha0, t_end, rtol=rtol, atol=atol,
                   max_step=max_step, cap=magnitude_cap)

    breakdown = None
    if res.status == "cap":
        y_stop = res.ys[-1]
        index = int(np.argmax(np.abs(y_stop))) + 1
        breakdown = Breakdown(t_break=res.t_stop, index=index,
                              reason="magnitude-overflow")
    elif res.status == "underflow":
        y_stop = res.ys[-1]
        index = int(np.argmax(np.abs(y_stop))) + 1
        breakdown = Breakdown(t_break=res.t_stop, index=index,
                              reason="step-underflow")

    # uniform sample grid over the integrated span (samples + 1 rows in the
    # CSV contract); the dense interpolant carries the per-step resolution
    if res.dense.segments:
        times = np.linspace(0.0, res.t_stop, samples + 1)
        states = [AlphaState(float(t), res.dense(t)) for t in times]
    else:
        states = [AlphaState(0.0, alpha0.copy())]  # halted before any step
    return FlowResult(samples=states, breakdown=breakdown, dense=res.dense,
                      n_rhs=res.n_rhs)


def constant_field_closed_form(m, omega_c, E_x=0.0, E_y=0.0, e=1.0, t=0.0):
    """Analytic transformation parameters for the constant-field Hamiltonian.

    Valid on the first factorization branch omega_c*t in (-pi, pi); raises
    SingularTime at and beyond the tan/log singularity (omega_c*t = pi mod
    2*pi is where the first divergence sits).

    Accepts scalar or array ``t``; returns shape (..., 15).
    """
    if omega_c == 0:
        raise ValueError("omega_c must be nonzero (use the free preset instead)")
    t_arr = np.asarray(t, dtype=float)
    th = 0.5 * omega_c * t_arr                 # half cyclotron phase
    c, s = np.cos(th), np.sin(th)
    if np.any(c <= 1e-12):
        raise SingularTime(
            "closed form undefined at/beyond omega_c*t = pi (mod 2*pi): "
            f"cos(omega_c*t/2) = {np.min(c)!r}")
    wt = omega_c * t_arr
    sin_wt, cos_wt = np.sin(wt), np.cos(wt)
    out = np.zeros(t_arr.shape + (N_GENERATORS,))
    E2 = E_x ** 2 + E_y ** 2
    out[..., 0] = e ** 2 * E2 / (2 * m * omega_c ** 3) * (sin_wt - wt * cos_wt)
    out[..., 1] = (-e * E_y / (2 * omega_c) + 0.5 * e * E_x * t_arr
                   + e / (2 * omega_c) * (E_x * sin_wt + E_y * cos_wt))
    out[..., 2] = (e * E_x / (2 * omega_c) + 0.5 * e * E_y * t_arr
                   + e / (2 * omega_c) * (E_y * sin_wt - E_x * cos_wt))
    out[..., 3] = (-e * E_x / (m * omega_c ** 2) + e * E_y * t_arr / (m * omega_c)
                   + e / (m * omega_c ** 2) * (E_x * cos_wt - E_y * sin_wt))
    out[..., 4] = (-e * E_y / (m * omega_c ** 2) - e * E_x * t_arr / (m * omega_c)
                   + e / (m * omega_c ** 2) * (E_x * sin_wt + E_y * cos_wt))
    tan_th = s / c
    out[..., 5] = out[..., 6] = 0.25 * m * omega_c * tan_th   # alpha6, alpha7
    # alpha8 = 0
    out[..., 8] = out[..., 9] = c * s / (m * omega_c)         # alpha9, alpha10
    # alpha11 = 0
    out[..., 11] = np.log(c)                                  # alpha12
    # alpha13 = 0
    out[..., 13] = c * s                                      # alpha14
    out[..., 14] = -tan_th                                    # alpha15
    return out


def write_alphas_csv(result: FlowResult, path):
    """CSV with header t,alpha1,...,alpha15 at full double precision."""
    header = "t," + ",".join(f"alpha{i}" for i in range(1, N_GENERATORS + 1))
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for state in result.samples:
            row = [state.t, *state.alpha]
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
