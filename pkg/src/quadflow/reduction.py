"""Reduction of the transformed Hamiltonian to the ODE system for alpha.

Applying the ordered product U = U_15 U_14 ... U_2 U_1 (all fifteen factors,
descending index; U_1 conjugates first) to H - p_t turns the coefficient
vector a into

    w(a, alpha) = M_15^T M_14^T ... M_1^T a,

while the energy-operator shifts accumulate through the matrix

    nu(alpha) = sum_k (M_15^T ... M_{k+1}^T) I_k,      (I_k)[j,l] = delta_kj delta_kl.

Requiring the transformed Hamiltonian to reduce to the bare energy operator
yields the flow equations alpha_dot = mu(a, alpha) with mu = nu^{-1} w.  For
this ordering det(nu) = 1 identically, which the assembly asserts.

:func:`reference_odes` is a fully independent transcription of the fifteen
explicit right-hand sides; agreement with the matrix pipeline to 1e-10 over
random states is an acceptance criterion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .adjoint import _adjoint
from .algebra import N_GENERATORS
from .errors import SingularNu

__all__ = ["ReductionState", "assemble", "mu_rhs", "reference_odes"]

_DET_TOL = 1e-6


@dataclass(frozen=True)
class ReductionState:
    """One evaluation of the reduction pipeline at (a, alpha)."""

    a: np.ndarray
    alpha: np.ndarray
    w: np.ndarray
    nu: np.ndarray
    mu: np.ndarray


def _as_vector(x, name):
    v = np.asarray(x, dtype=float)
    if v.shape != (N_GENERATORS,):
        raise ValueError(f"{name} must be a 15-vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} contains non-finite entries")
    return v


def _w_nu(alpha: np.ndarray):
    # R_k = M_15^T ... M_{k+1}^T built by descending recursion (R_15 = I);
    # column k of nu is column k of R_k, and w = R_0 a with M_1 = I.
    nu = np.empty((N_GENERATORS, N_GENERATORS))
    R = np.eye(N_GENERATORS)
    for k in range(N_GENERATORS, 0, -1):
        nu[:, k - 1] = R[:, k - 1]
        if k > 1:  # M_1 is the identity (h1 central)
            R = R @ _adjoint(k, alpha[k - 1]).T
    return R, nu


def assemble(a, alpha) -> ReductionState:
    """Evaluate w, nu and the flow right-hand side mu = nu^{-1} w.

    Parameters
    ----------
    a : 15-vector of Hamiltonian coefficients at the current time
    alpha : 15-vector of transformation parameters

    Raises
    ------
    SingularNu
        If |det(nu) - 1| > 1e-6.  det(nu) = 1 holds analytically for this
        transformation ordering, so a violation indicates an assembly bug
        (or a wildly out-of-range alpha).
    """
    a = _as_vector(a, "a")
    alpha = _as_vector(alpha, "alpha")
    with np.errstate(over="ignore", invalid="ignore"):
        R, nu = _w_nu(alpha)
        det = np.linalg.det(nu)
        if not np.isfinite(det) or abs(det - 1.0) > _DET_TOL:
            raise SingularNu(f"det(nu) = {det!r} at alpha = {alpha.tolist()}")
        w = R @ a
        mu = np.linalg.solve(nu, w)
    return ReductionState(a=a, alpha=alpha, w=w, nu=nu, mu=mu)


def mu_rhs(a: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """Flow right-hand side only (hot path used by the integrator).

    Skips the det(nu) assertion of :func:`assemble`: near a factorization
    breakdown the matrix entries span so many orders of magnitude that the
    floating-point determinant drifts off 1 even though the assembly is
    correct, and the flow's own breakdown detection owns that regime.
    """
    R, nu = _w_nu(alpha)
    return np.linalg.solve(nu, R @ a)


def reference_odes(a, alpha) -> np.ndarray:
    """The fifteen explicit flow equations, transcribed term by term.

    Returns alpha_dot such that each transcribed expression
    mu_k(a, alpha) - alpha_dot_k vanishes.  This function deliberately shares
    no code with the matrix pipeline; it is the oracle for
    :func:`assemble`.
    """
    a = _as_vector(a, "a")
    al = _as_vector(alpha, "alpha")
    # 1-based views keep the transcription readable
    a = np.concatenate(([0.0], a))
    al = np.concatenate(([0.0], al))
    e_pm = np.exp(2 * al[13] - 2 * al[12])   # e^{2 a13 - 2 a12}
    e_mp = np.exp(2 * al[12] - 2 * al[13])   # e^{2 a12 - 2 a13}
    d = np.empty(16)
    d[1] = (a[9] * al[2] ** 2 - a[4] * al[2] + a[11] * al[3] * al[2]
            + a[10] * al[3] ** 2 - a[6] * al[4] ** 2 - a[7] * al[5] ** 2
            - a[5] * al[3] - a[8] * al[4] * al[5] + a[1])
    d[2] = (-2 * a[12] * al[2] - a[14] * al[3] + 2 * a[6] * al[4]
            + a[8] * al[5] + a[2])
    d[3] = (-a[15] * al[2] - 2 * a[13] * al[3] + a[8] * al[4]
            + 2 * a[7] * al[5] + a[3])
    d[4] = (-2 * a[9] * al[2] - a[11] * al[3] + 2 * a[12] * al[4]
            + a[15] * al[5] + a[4])
    d[5] = (-a[11] * al[2] - 2 * a[10] * al[3] + a[14] * al[4]
            + 2 * a[13] * al[5] + a[5])
    d[6] = (4 * a[9] * al[6] ** 2 - 4 * a[12] * al[6]
            + 2 * a[11] * al[8] * al[6] + a[10] * al[8] ** 2
            - a[14] * al[8] + a[6])
    d[7] = (4 * a[10] * al[7] ** 2 - 4 * a[13] * al[7]
            + 2 * a[11] * al[8] * al[7] + a[9] * al[8] ** 2
            - a[15] * al[8] + a[7])
    d[8] = (-2 * a[14] * al[7] - 2 * a[15] * al[6]
            - 2 * a[12] * al[8] - 2 * a[13] * al[8]
            + 4 * a[9] * al[6] * al[8] + 4 * a[10] * al[7] * al[8]
            + a[11] * (al[8] ** 2 + 4 * al[6] * al[7]) + a[8])
    d[9] = (4 * a[12] * al[9] + a[15] * al[11]
            - 2 * a[11] * (al[8] * al[9] + al[7] * al[11])
            + a[9] * (1 - 8 * al[6] * al[9] - 2 * al[8] * al[11]))
    d[10] = (4 * a[13] * al[10] + a[14] * al[11]
             - 2 * a[11] * (al[8] * al[10] + al[6] * al[11])
             + a[10] * (1 - 8 * al[7] * al[10] - 2 * al[8] * al[11]))
    d[11] = (2 * a[14] * al[9] + 2 * a[15] * al[10]
             + 2 * a[12] * al[11] + 2 * a[13] * al[11]
             - a[9] * (4 * al[8] * al[10] + 4 * al[6] * al[11])
             - a[10] * (4 * al[8] * al[9] + 4 * al[7] * al[11])
             + a[11] * (1 - 4 * al[6] * al[9] - 4 * al[7] * al[10]
                        - 2 * al[8] * al[11]))
    d[12] = (0.5 * e_pm * a[15] * al[14]
             - a[11] * (al[8] / 2 + e_pm * al[7] * al[14])
             - a[9] * (2 * al[6] + e_pm * al[8] * al[14]) + a[12])
    d[13] = (-2 * a[10] * al[7] - 0.5 * e_pm * a[15] * al[14]
             + e_pm * a[9] * al[8] * al[14]
             + a[11] * (e_pm * al[7] * al[14] - al[8] / 2) + a[13])
    d[14] = (e_pm * a[15] * al[14] ** 2
             - 2 * e_pm * a[9] * al[8] * al[14] ** 2
             + e_mp * a[14] - 2 * e_mp * a[10] * al[8]
             - 2 * np.exp(-2 * (al[12] + al[13])) * a[11]
             * (np.exp(4 * al[13]) * al[7] * al[14] ** 2
                + np.exp(4 * al[12]) * al[6]))
    d[15] = e_pm * a[15] - 2 * e_pm * a[11] * al[7] - 2 * e_pm * a[9] * al[8]
    return d[1:]
