"""Adjoint-action matrices of the one-parameter unitaries U_i = exp(i*alpha_i*h_i/hbar).

Conjugation closes on the generator basis,

    U_i(alpha) h_j U_i(alpha)^dagger = sum_k M_i(alpha)[j, k] h_k,

and differentiating in alpha gives M_i(alpha) = expm(-alpha * C_i) with
(C_i)[j, k] = c[i][j][k].  Row j of the matrix is the image of h_j; that
orientation is fixed throughout (the reduction assembly uses transposes).

Two independent implementations are provided and tested against each other:

* :func:`adjoint_matrix` - matrix exponential of the structure constants.
  C_i is nilpotent of index <= 3 for every generator except the dilatation
  generators 12 and 13, whose C is purely diagonal; both cases are summed
  exactly (terminating series / elementwise exp).
* :func:`adjoint_closed_form` - the conjugation rules transcribed entry by
  entry, used as the oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import N_GENERATORS, _check_index, standard_algebra

__all__ = ["AdjointMatrix", "EnergyShift", "adjoint_matrix",
           "adjoint_closed_form", "adjoint_generator"]


@dataclass(frozen=True)
class AdjointMatrix:
    """15x15 real matrix of U_i(alpha) conjugation; row j = image of h_j."""

    i: int
    alpha: float
    m: np.ndarray

    def inverse(self) -> "AdjointMatrix":
        # one-parameter group: M_i(alpha)^-1 = M_i(-alpha)
        return adjoint_matrix(self.i, -self.alpha)


@dataclass(frozen=True)
class EnergyShift:
    """U_i p_t U_i^dagger = p_t + alpha_dot_i * h_i: shift along coordinate i."""

    i: int
    alpha_dot: float

    def vector(self) -> np.ndarray:
        v = np.zeros(N_GENERATORS)
        v[self.i - 1] = self.alpha_dot
        return v


def _build_generator_matrices():
    alg = standard_algebra()
    mats = [None]
    for i in range(1, N_GENERATORS + 1):
        C = np.zeros((N_GENERATORS, N_GENERATORS))
        for j in range(1, N_GENERATORS + 1):
            for k, v in alg.commutator(i, j).items():
                C[j - 1, k - 1] = float(v)
        mats.append(C)
    return mats


_C = _build_generator_matrices()


def _nilpotent_powers(C, max_index=8):
    powers = [np.eye(N_GENERATORS)]
    P = np.eye(N_GENERATORS)
    for _ in range(max_index):
        P = P @ C
        if not P.any():
            return powers
        powers.append(P.copy())
    return None  # not nilpotent within max_index


_DIAGONAL = {}
_POWERS = {}
for _i in range(1, N_GENERATORS + 1):
    _Ci = _C[_i]
    if not np.count_nonzero(_Ci - np.diag(np.diag(_Ci))):
        _DIAGONAL[_i] = np.diag(_Ci).copy()
    else:
        _pw = _nilpotent_powers(_Ci)
        if _pw is not None:
            _POWERS[_i] = _pw


def adjoint_generator(i: int) -> np.ndarray:
    """The matrix C_i with (C_i)[j, k] = c[i][j][k] (0-based array indices)."""
    _check_index(i)
    return _C[i].copy()


def _adjoint(i: int, alpha: float) -> np.ndarray:
    """exp(-alpha*C_i) without the dataclass wrapper (hot path)."""
    if i in _DIAGONAL:
        return np.diag(np.exp(-alpha * _DIAGONAL[i]))
    if i in _POWERS:
        powers = _POWERS[i]
        M = powers[0].copy()
        fac = 1.0
        for k in range(1, len(powers)):
            fac *= -alpha / k
            M += fac * powers[k]
        return M
    # not reachable for this algebra (all C_i nilpotent or diagonal); kept as
    # a safe fallback for exotic tensors
    from scipy.linalg import expm

    return expm(-alpha * _C[i])


def adjoint_matrix(i: int, alpha: float) -> AdjointMatrix:
    """M_i(alpha) = exp(-alpha*C_i) via exact terminating series.

    Parameters
    ----------
    i : generator index in 1..15
    alpha : transformation parameter (finite)

    Returns
    -------
    AdjointMatrix with ``m[j-1, k-1]`` the coefficient of h_k in the image
    of h_j.  Sign convention check: row 2 of M_9(alpha) is h2 + 2*alpha*h4
    (x picks up 2*alpha_9*p_x under U_9).
    """
    _check_index(i)
    alpha = float(alpha)
    if not math.isfinite(alpha):
        raise ValueError(f"alpha must be finite, got {alpha}")
    return AdjointMatrix(i, alpha, _adjoint(i, alpha))


# --------------------------------------------------------------------------
# Transcribed conjugation rules (independent oracle).  Each entry list reads
# (row j, column k, coefficient as a function of alpha).
# --------------------------------------------------------------------------

def _closed_form_entries(i: int, a: float):
    if i == 1:
        return []
    if i == 2:
        return [(4, 1, -a), (9, 4, -2 * a), (9, 1, a * a), (11, 5, -a),
                (12, 2, -2 * a), (15, 3, -a)]
    if i == 3:
        return [(5, 1, -a), (10, 5, -2 * a), (10, 1, a * a), (11, 4, -a),
                (13, 3, -2 * a), (14, 2, -a)]
    if i == 4:
        return [(2, 1, a), (6, 2, 2 * a), (6, 1, a * a), (8, 3, a),
                (12, 4, 2 * a), (14, 5, a)]
    if i == 5:
        return [(3, 1, a), (7, 3, 2 * a), (7, 1, a * a), (8, 2, a),
                (13, 5, 2 * a), (15, 4, a)]
    if i == 6:
        return [(4, 2, -2 * a), (9, 12, -2 * a), (9, 6, 4 * a * a),
                (11, 14, -2 * a), (12, 6, -4 * a), (15, 8, -2 * a)]
    if i == 7:
        return [(5, 3, -2 * a), (10, 13, -2 * a), (10, 7, 4 * a * a),
                (11, 15, -2 * a), (13, 7, -4 * a), (14, 8, -2 * a)]
    if i == 8:
        return [(4, 3, -a), (5, 2, -a), (9, 15, -2 * a), (9, 7, a * a),
                (10, 14, -2 * a), (10, 6, a * a),
                (11, 12, -a / 2), (11, 13, -a / 2), (11, 8, a * a),
                (12, 8, -2 * a), (13, 8, -2 * a), (14, 6, -a), (15, 7, -a)]
    if i == 9:
        return [(2, 4, 2 * a), (6, 12, 2 * a), (6, 9, 4 * a * a),
                (8, 15, 2 * a), (12, 9, 4 * a), (14, 11, 2 * a)]
    if i == 10:
        return [(3, 5, 2 * a), (7, 13, 2 * a), (7, 10, 4 * a * a),
                (8, 14, 2 * a), (13, 10, 4 * a), (15, 11, 2 * a)]
    if i == 11:
        return [(2, 5, a), (3, 4, a), (6, 14, 2 * a), (6, 10, a * a),
                (7, 15, 2 * a), (7, 9, a * a),
                (8, 12, a / 2), (8, 13, a / 2), (8, 11, a * a),
                (12, 11, 2 * a), (13, 11, 2 * a), (14, 10, a), (15, 9, a)]
    if i == 14:
        return [(3, 2, a), (4, 5, -a), (7, 8, 2 * a), (7, 6, a * a),
                (8, 6, a), (9, 11, -2 * a), (9, 10, a * a), (11, 10, -a),
                (12, 14, -2 * a), (13, 14, 2 * a),
                (15, 12, a / 2), (15, 13, -a / 2), (15, 14, -a * a)]
    if i == 15:
        return [(2, 3, a), (5, 4, -a), (6, 8, 2 * a), (6, 7, a * a),
                (8, 7, a), (10, 11, -2 * a), (10, 9, a * a), (11, 9, -a),
                (12, 15, 2 * a), (13, 15, -2 * a),
                (14, 12, -a / 2), (14, 13, a / 2), (14, 15, -a * a)]
    raise AssertionError(i)


# dilatation actions: (row, exp multiplier on alpha)
_DILATATION_ROWS = {
    12: ((2, 2.0), (4, -2.0), (6, 4.0), (8, 2.0), (9, -4.0), (11, -2.0),
         (14, 2.0), (15, -2.0)),
    13: ((3, 2.0), (5, -2.0), (7, 4.0), (8, 2.0), (10, -4.0), (11, -2.0),
         (14, -2.0), (15, 2.0)),
}


def adjoint_closed_form(i: int, alpha: float) -> AdjointMatrix:
    """Hardcoded closed-form conjugation matrices (test oracle).

    Implemented independently from the exponential path; agreement of the two
    implementations to 1e-12 is part of the acceptance suite.
    """
    _check_index(i)
    a = float(alpha)
    M = np.eye(N_GENERATORS)
    if i in _DILATATION_ROWS:
        for row, mult in _DILATATION_ROWS[i]:
            M[row - 1, row - 1] = math.exp(mult * a)
    else:
        for row, col, coeff in _closed_form_entries(i, a):
            M[row - 1, col - 1] += coeff
    return AdjointMatrix(i, a, M)
