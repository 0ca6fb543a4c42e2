"""Explicit Runge-Kutta integrators for small first-order systems.

Two independent routes: an adaptive Dormand-Prince 5(4) pair with step
control, and classical fixed-step RK4. Both operate on ``y' = rhs(t, y)``
with ``y`` a 1-D float array and return samples at requested times.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import BlowUpError, StepUnderflowError

# Dormand-Prince 5(4) tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B_LOW = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640,
                   -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B - _B_LOW


def _check(y, bound, t, guard):
    if not np.all(np.isfinite(y)) or np.max(np.abs(y)) > bound:
        raise BlowUpError(f"|y| exceeded {bound:g} near t = {t:.6g}")
    if guard is not None:
        guard(t, y)


def dopri54(rhs, y0, times, tol=1e-10, bound=1e6, guard=None, h0=None,
            max_steps=10_000_000):
    """Adaptive Dormand-Prince integration sampled at `times`.

    Steps are clipped so that every requested time is hit exactly; no
    dense-output interpolation is involved. The local error estimate of each
    accepted step satisfies ``|err_i| <= tol * max(1, |y_i|)``.

    Parameters
    ----------
    rhs : callable
        ``rhs(t, y) -> ndarray``.
    y0 : array_like
        State at ``times[0]``.
    times : array_like
        Non-decreasing sample times.
    tol : float
        Local error target.
    bound : float
        Blow-up guard on ``max |y|``.
    guard : callable, optional
        ``guard(t, y)`` called after every accepted step; may raise.

    Returns
    -------
    ndarray of shape ``(len(times), len(y0))``
    """
    times = np.asarray(times, dtype=float)
    y = np.array(y0, dtype=float)
    out = np.empty((times.size, y.size))
    out[0] = y
    t = float(times[0])
    span = float(times[-1] - times[0])
    h = h0 if h0 is not None else (min(1e-3, span) if span > 0 else 1e-3)
    k = np.empty((7, y.size))
    k[0] = rhs(t, y)
    steps = 0
    for i in range(1, times.size):
        target = float(times[i])
        while t < target:
            if steps >= max_steps:
                raise StepUnderflowError("maximum number of steps exceeded")
            last = h >= target - t
            step = target - t if last else h
            if step <= 1e-14 * max(1.0, abs(t)):
                if last:
                    t = target
                    break
                raise StepUnderflowError(f"step size underflow at t = {t:.6g}")
            for s in range(1, 7):
                ys = y + step * np.dot(_A[s], k[:s])
                k[s] = rhs(t + _C[s] * step, ys)
            y_new = y + step * (_B @ k)
            err = step * (_E @ k)
            scale = tol * np.maximum(1.0, np.maximum(np.abs(y), np.abs(y_new)))
            ratio = float(np.max(np.abs(err) / scale))
            steps += 1
            if ratio <= 1.0 and np.all(np.isfinite(y_new)):
                t = target if last else t + step
                y = y_new
                k[0] = k[6]  # FSAL
                _check(y, bound, t, guard)
                fac = 5.0 if ratio == 0 else min(5.0, 0.9 * ratio ** -0.2)
                if not last or fac < 1.0:
                    h = step * fac
            else:
                fac = 0.2 if not np.isfinite(ratio) else max(0.2, 0.9 * ratio ** -0.2)
                h = step * fac
        out[i] = y
    return out


def rk4_fixed(rhs, y0, t0, dt, n, bound=1e6, guard=None):
    """Classical RK4 with constant step; returns ``n`` samples starting at `t0`."""
    y = np.array(y0, dtype=float)
    out = np.empty((n, y.size))
    out[0] = y
    for i in range(1, n):
        t = t0 + (i - 1) * dt
        k1 = rhs(t, y)
        k2 = rhs(t + 0.5 * dt, y + 0.5 * dt * k1)
        k3 = rhs(t + 0.5 * dt, y + 0.5 * dt * k2)
        k4 = rhs(t + dt, y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        _check(y, bound, t + dt, guard)
        out[i] = y
    return out


def observed_order(coarse, mid, fine):
    """Empirical order ``log2(|c - m| / |m - f|)`` in the max norm.

    Returns ``inf`` when all three runs agree exactly.
    """
    d1 = float(np.max(np.abs(np.asarray(coarse) - np.asarray(mid))))
    d2 = float(np.max(np.abs(np.asarray(mid) - np.asarray(fine))))
    if d1 == 0.0 and d2 == 0.0:
        return math.inf
    if d2 == 0.0:
        return math.inf
    return math.log2(d1 / d2)
