"""Embedded Dormand-Prince 5(4) stepper with PI step-size control.

Propagates the 5th-order solution, estimates the local error from the
embedded 4th-order weights, and controls the step with the standard
proportional-integral rule (error exponent 0.2 - 0.75*beta, beta = 0.04).
Each accepted step stores the quartic dense-output polynomial, so solutions
can be evaluated anywhere without re-integration.

Two halting modes besides reaching ``t_end``:

* ``cap``: some |y_i| exceeded ``cap`` during an accepted step; the crossing
  time is bracketed by bisection on the dense polynomial of that step.
* ``underflow``: the controller pushed the step size below the resolvable
  floor (typically because the solution blows up faster than any polynomial).

Non-finite stage values or error norms reject the step rather than raising,
so blow-ups degrade gracefully into the ``underflow`` outcome.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["RKResult", "DenseSolution", "solve"]

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# b - b_hat: weights of the embedded error estimate
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920,
               -17253 / 339200, 22 / 525, -1 / 40])
# quartic dense-output coefficients (Shampine's interpolant for this pair)
_P = np.array([
    [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608,
     -12715105075 / 11282082432],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933,
     87487479700 / 32700410799],
    [0.0, -1754552775 / 470086768, 14199869525 / 1410260304,
     -10690763975 / 1880347072],
    [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408,
     701980252875 / 199316789632],
    [0.0, -282668133 / 205662961, 2019193451 / 616988883,
     -1453857185 / 822651844],
    [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])

_SAFETY = 0.9
_BETA = 0.04
_EXPO = 0.2 - 0.75 * _BETA
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0


@dataclass
class _Segment:
    t0: float
    h: float
    y0: np.ndarray
    q: np.ndarray  # (n, 4) dense-output matrix

    def eval(self, t: float) -> np.ndarray:
        x = (t - self.t0) / self.h
        p = np.array([x, x * x, x ** 3, x ** 4])
        return self.y0 + self.h * (self.q @ p)


@dataclass
class DenseSolution:
    """Piecewise-quartic interpolant over the accepted steps."""

    segments: list = field(default_factory=list)

    @property
    def t_min(self):
        return self.segments[0].t0 if self.segments else None

    @property
    def t_max(self):
        s = self.segments[-1] if self.segments else None
        return s.t0 + s.h if s else None

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if t.ndim == 0:
            return self._eval_scalar(float(t))
        return np.array([self._eval_scalar(float(ti)) for ti in t])

    def _eval_scalar(self, t: float) -> np.ndarray:
        if not self.segments:
            raise ValueError("empty dense solution")
        lo, hi = 0, len(self.segments) - 1
        if t <= self.segments[0].t0:
            return self.segments[0].eval(t)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.segments[mid].t0 + self.segments[mid].h < t:
                lo = mid + 1
            else:
                hi = mid
        return self.segments[lo].eval(t)


@dataclass
class RKResult:
    ts: np.ndarray           # accepted step endpoints, starting at t0
    ys: np.ndarray           # states at ts, shape (len(ts), n)
    dense: DenseSolution
    status: str              # "done" | "cap" | "underflow"
    t_stop: float            # final valid time (== ts[-1])
    n_rhs: int


def _error_norm(delta, y_old, y_new, rtol, atol):
    scale = atol + rtol * np.maximum(np.abs(y_old), np.abs(y_new))
    return math.sqrt(float(np.mean((delta / scale) ** 2)))


def _initial_step(f, t0, y0, f0, t_end, rtol, atol, max_step):
    scale = atol + rtol * np.abs(y0)
    d0 = math.sqrt(float(np.mean((y0 / scale) ** 2)))
    d1 = math.sqrt(float(np.mean((f0 / scale) ** 2)))
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h0 = min(h0, t_end - t0, max_step)
    y1 = y0 + h0 * f0
    f1 = f(t0 + h0, y1)
    d2 = math.sqrt(float(np.mean(((f1 - f0) / scale) ** 2))) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1, t_end - t0, max_step)


def _cap_crossing(segment: _Segment, cap: float) -> float:
    """Bisect inside one accepted step for the first time max|y| = cap."""
    t_lo, t_hi = segment.t0, segment.t0 + segment.h
    for _ in range(80):
        t_mid = 0.5 * (t_lo + t_hi)
        if np.max(np.abs(segment.eval(t_mid))) > cap:
            t_hi = t_mid
        else:
            t_lo = t_mid
        if t_hi - t_lo < 1e-12 * max(1.0, abs(t_hi)):
            break
    return t_hi


def solve(f, t0, y0, t_end, rtol=1e-10, atol=1e-10, max_step=None,
          cap=None) -> RKResult:
    """Integrate y' = f(t, y) from t0 to t_end.

    Parameters
    ----------
    f : callable (t, y) -> ndarray; may return non-finite values, which
        reject the current step
    cap : optional magnitude bound; integration halts once any |y_i| > cap
    """
    y0 = np.asarray(y0, dtype=float)
    if t_end <= t0:
        raise ValueError("t_end must exceed t0")
    if rtol <= 0 or atol <= 0:
        raise ValueError("tolerances must be positive")
    if max_step is None:
        max_step = (t_end - t0) / 50
    n_rhs = 0

    def rhs(t, y):
        nonlocal n_rhs
        n_rhs += 1
        return np.asarray(f(t, y), dtype=float)

    t, y = float(t0), y0.copy()
    k1 = rhs(t, y)
    h = _initial_step(rhs, t, y, k1, t_end, rtol, atol, max_step)

    ts, ys = [t], [y.copy()]
    dense = DenseSolution()
    facold = 1e-4
    status = "done"
    K = np.empty((7, y.size))
    rejections = 0  # consecutive; a long streak means no h can be certified

    while t < t_end:
        h = min(h, max_step, t_end - t)
        if h < 16 * np.finfo(float).eps * max(abs(t), 1.0) or rejections > 60:
            status = "underflow"
            break
        K[0] = k1
        failed_finite = False
        for s in range(1, 7):
            ys_stage = y + h * (K[:s].T @ _A[s])
            K[s] = rhs(t + _C[s] * h, ys_stage)
            if not np.all(np.isfinite(K[s])):
                failed_finite = True
                break
        if failed_finite:
            h *= 0.25
            rejections += 1
            continue
        y_new = y + h * (K.T @ _B)
        err_vec = h * (K.T @ _E)
        if not np.all(np.isfinite(y_new)):
            h *= 0.25
            rejections += 1
            continue
        err = _error_norm(err_vec, y, y_new, rtol, atol)
        if not math.isfinite(err):
            h *= 0.25
            rejections += 1
            continue
        if err > 1.0:
            # rejected: plain proportional shrink, no PI memory update
            factor = max(_MIN_FACTOR, _SAFETY * err ** (-_EXPO))
            h *= min(1.0, factor)
            rejections += 1
            continue
        # accepted
        rejections = 0
        seg = _Segment(t0=t, h=h, y0=y.copy(), q=K.T @ _P)
        dense.segments.append(seg)
        t_new = t + h
        if cap is not None and np.max(np.abs(y_new)) > cap:
            t_cross = _cap_crossing(seg, cap)
            y_cross = seg.eval(t_cross)
            seg.h = t_cross - seg.t0  # truncate validity of the last segment
            ts.append(t_cross)
            ys.append(y_cross)
            status = "cap"
            break
        ts.append(t_new)
        ys.append(y_new.copy())
        # PI controller (accepted step)
        fac11 = err ** _EXPO if err > 0 else 1e-10
        factor = min(_MAX_FACTOR,
                     max(_MIN_FACTOR, _SAFETY * facold ** _BETA / fac11))
        facold = max(err, 1e-4)
        h *= factor
        t, y = t_new, y_new
        k1 = K[6]  # FSAL

    return RKResult(ts=np.array(ts), ys=np.array(ys), dense=dense,
                    status=status, t_stop=ts[-1], n_rhs=n_rhs)
