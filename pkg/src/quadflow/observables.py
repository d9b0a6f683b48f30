"""Heisenberg-picture observables and the classical correspondence.

The conjugated position/momentum operators are affine in the Schroedinger
operators,

    (x_H, y_H, p_xH, p_yH)^T = S(alpha) (x, y, p_x, p_y)^T + d(alpha),

with S symplectic and d = (alpha4, alpha5, -alpha2, -alpha3): the first
five transformation parameters carry the classical action (alpha1) and the
classical trajectory (alpha2..alpha5 = -p_x, -p_y, x, y).  The map is
computed two independent ways - the ordered product of adjoint matrices
restricted to the affine block, and a transcription of the closed-form
coefficient expressions - which the test suite holds to 1e-12 of each other.

Quadratic observables transform through the same map (A_H = A evaluated on
the mapped operators), exposed as :meth:`AffineSymplecticMap.map_quadratic`;
Gaussian means/covariances push forward with
:meth:`AffineSymplecticMap.push_gaussian`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .adjoint import _adjoint
from .algebra import N_GENERATORS

__all__ = ["SYMPLECTIC_J", "AffineSymplecticMap", "heisenberg_map",
           "heisenberg_closed_form", "classical_lagrangian",
           "euler_residuals", "write_heisenberg_json"]

# symplectic form on (x, y, p_x, p_y)
SYMPLECTIC_J = np.array([
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, -1.0, 0.0, 0.0],
])


@dataclass(frozen=True)
class AffineSymplecticMap:
    """Affine action z -> S z + d on (x, y, p_x, p_y), plus the action phase."""

    S: np.ndarray       # (4, 4)
    d: np.ndarray       # (4,)
    phase: float        # accumulated classical action (units of hbar)

    @classmethod
    def identity(cls) -> "AffineSymplecticMap":
        return cls(S=np.eye(4), d=np.zeros(4), phase=0.0)

    def apply(self, z) -> np.ndarray:
        return self.S @ np.asarray(z, dtype=float) + self.d

    def symplectic_defect(self) -> float:
        """max-norm of S^T J S - J; zero for an exactly symplectic map."""
        return float(np.max(np.abs(self.S.T @ SYMPLECTIC_J @ self.S
                                   - SYMPLECTIC_J)))

    def map_quadratic(self, Q, l=None, c=0.0):
        """Push a quadratic observable z^T Q z + l . z + c through the map.

        Heisenberg images of analytic observables are the observables of the
        mapped operators, so for A(z) = z^T Q z + l.z + c:

            A_H(z) = z^T (S^T Q S) z + (S^T (Q + Q^T) d + S^T l) . z
                     + d^T Q d + l . d + c
        """
        Q = np.asarray(Q, dtype=float)
        l = np.zeros(4) if l is None else np.asarray(l, dtype=float)
        Qh = self.S.T @ Q @ self.S
        lh = self.S.T @ ((Q + Q.T) @ self.d + l)
        ch = float(self.d @ Q @ self.d + l @ self.d + c)
        return Qh, lh, ch

    def push_gaussian(self, mean, cov):
        """Mean and covariance of a Gaussian state after the map."""
        mean = np.asarray(mean, dtype=float)
        cov = np.asarray(cov, dtype=float)
        return self.S @ mean + self.d, self.S @ cov @ self.S.T


def _product_rows(alpha: np.ndarray) -> np.ndarray:
    # rows 2..5 of M_2(a2) M_3(a3) ... M_15(a15); M_1 = identity
    rows = np.zeros((4, N_GENERATORS))
    rows[0, 1] = rows[1, 2] = rows[2, 3] = rows[3, 4] = 1.0
    for i in range(2, N_GENERATORS + 1):
        rows = rows @ _adjoint(i, alpha[i - 1])
    return rows


def heisenberg_map(alpha) -> AffineSymplecticMap:
    """Affine Heisenberg map from the ordered adjoint-matrix product.

    The images of x, y, p_x, p_y stay within span{1, x, y, p_x, p_y}; the
    constant column gives d = (alpha4, alpha5, -alpha2, -alpha3) exactly.
    """
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (N_GENERATORS,):
        raise ValueError("alpha must be a 15-vector")
    rows = _product_rows(alpha)
    if np.max(np.abs(rows[:, 5:])) > 1e-10 * max(1.0, np.max(np.abs(rows))):
        raise AssertionError("affine block leaked into quadratic generators")
    return AffineSymplecticMap(S=rows[:, 1:5].copy(), d=rows[:, 0].copy(),
                               phase=float(alpha[0]))


def heisenberg_closed_form(alpha) -> AffineSymplecticMap:
    """Transcribed closed-form coefficients of the Heisenberg operators (oracle)."""
    alpha = np.asarray(alpha, dtype=float)
    (a2, a3, a4, a5, a6, a7, a8, a9, a10, a11, a12, a13, a14, a15) = alpha[1:]
    e12, e13 = math.exp(2 * a12), math.exp(2 * a13)
    em12, em13 = math.exp(-2 * a12), math.exp(-2 * a13)
    k = a14 * a15 + 1.0
    gx = 4 * a6 * a9 + a8 * a11 - 1.0
    gy = 4 * a7 * a10 + a8 * a11 - 1.0
    S = np.array([
        [e12,
         e12 * a15,
         2 * em12 * a9 * k - em13 * a11 * a15,
         em13 * a11 - 2 * em12 * a9 * a14],
        [e13 * a14,
         e13 * k,
         em12 * a11 * k - 2 * em13 * a10 * a15,
         2 * em13 * a10 - em12 * a11 * a14],
        [-(2 * e12 * a6 + e13 * a8 * a14),
         -(2 * e12 * a6 * a15 + e13 * a8 * k),
         2 * em13 * (a8 * a10 + a6 * a11) * a15 - em12 * gx * k,
         em12 * gx * a14 - 2 * em13 * (a8 * a10 + a6 * a11)],
        [-(e12 * a8 + 2 * e13 * a7 * a14),
         -(e12 * a8 * a15 + 2 * e13 * a7 * k),
         em13 * gy * a15 - 2 * em12 * (a8 * a9 + a7 * a11) * k,
         2 * em12 * (a8 * a9 + a7 * a11) * a14 - em13 * gy],
    ])
    d = np.array([a4, a5, -a2, -a3])
    return AffineSymplecticMap(S=S, d=d, phase=float(alpha[0]))


def classical_lagrangian(a, alpha, alpha_dot) -> float:
    """Classical Lagrangian in the transformation-parameter variables.

    Along a valid flow L equals alpha1_dot, so the accumulated phase alpha1
    is the classical action integral.
    """
    a = np.concatenate(([0.0], np.asarray(a, dtype=float)))
    al = np.concatenate(([0.0], np.asarray(alpha, dtype=float)))
    ad = np.concatenate(([0.0], np.asarray(alpha_dot, dtype=float)))
    return float(
        a[9] * al[2] ** 2 - a[4] * al[2] + a[11] * al[3] * al[2]
        - 2 * a[12] * al[4] * al[2] - a[15] * al[5] * al[2]
        + a[10] * al[3] ** 2 + a[6] * al[4] ** 2 + a[7] * al[5] ** 2
        - a[5] * al[3] + a[2] * al[4] - a[14] * al[3] * al[4]
        + a[3] * al[5] - 2 * a[13] * al[3] * al[5] + a[8] * al[4] * al[5]
        + a[1] - al[4] * ad[2] - al[5] * ad[3])


def euler_residuals(a, alpha, alpha_dot) -> np.ndarray:
    """Euler-Lagrange combinations d/dt(dL/d(alpha_k_dot)) - dL/d(alpha_k).

    Returned in the order (k = 2, 3, 4, 5); the four expressions vanish
    identically along a valid flow and reproduce the flow equations for
    alpha4, alpha5, alpha2, alpha3 with signs (+, +, -, -).
    """
    a = np.concatenate(([0.0], np.asarray(a, dtype=float)))
    al = np.concatenate(([0.0], np.asarray(alpha, dtype=float)))
    ad = np.concatenate(([0.0], np.asarray(alpha_dot, dtype=float)))
    # dL/d(alpha2_dot) = -alpha4, dL/d(alpha3_dot) = -alpha5; the rest lack
    # velocity dependence
    r2 = (-ad[4] - (2 * a[9] * al[2] - a[4] + a[11] * al[3]
                    - 2 * a[12] * al[4] - a[15] * al[5]))
    r3 = (-ad[5] - (a[11] * al[2] + 2 * a[10] * al[3] - a[5]
                    - a[14] * al[4] - 2 * a[13] * al[5]))
    r4 = -(-2 * a[12] * al[2] + 2 * a[6] * al[4] + a[2]
           - a[14] * al[3] + a[8] * al[5] - ad[2])
    r5 = -(-a[15] * al[2] + 2 * a[7] * al[5] + a[3]
           - 2 * a[13] * al[3] + a[8] * al[4] - ad[3])
    return np.array([r2, r3, r4, r5])


def write_heisenberg_json(flow_result, path):
    """One record per flow sample: {"t", "S", "d", "phase"}."""
    records = []
    for state in flow_result.samples:
        m = heisenberg_map(state.alpha)
        records.append({"t": state.t, "S": m.S.tolist(), "d": m.d.tolist(),
                        "phase": m.phase})
    with open(path, "w") as fh:
        json.dump(records, fh, indent=1)
        fh.write("\n")
