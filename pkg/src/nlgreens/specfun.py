"""Real-argument special functions used by the kernel catalog.

Jacobi functions are parametrized by ``m = k**2``. The base evaluation for
``0 <= m <= 1`` comes from :func:`scipy.special.ellipj`; negative and
greater-than-one parameters are mapped into that range with the
imaginary-modulus and reciprocal-modulus transformations. Weierstrass
``P`` is built from Jacobi functions through the real roots of
``4e**3 - g2*e - g3``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import ConvergenceError, DomainError, PoleError

_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)


def erf(x):
    """Gauss error function (vectorized)."""
    return special.erf(x)


def _erfinv_seed(y):
    # Winitzki's closed-form approximation, good to ~2e-3 relative
    a = 0.147
    ln = np.log1p(-y * y)
    b = 2.0 / (math.pi * a) + 0.5 * ln
    return np.sign(y) * np.sqrt(np.sqrt(b * b - ln / a) - b)


def erf_inv(y, tol=1e-12, maxiter=50):
    """Inverse error function by Newton iteration.

    Near ``|y| = 1`` the iteration runs on ``erfc(x) = 1 - |y|`` so that the
    residual keeps its relative accuracy.

    Raises
    ------
    DomainError
        If any ``|y| >= 1``.
    ConvergenceError
        If the Newton step does not drop below `tol` (relative) in `maxiter`
        iterations.
    """
    y = np.asarray(y, dtype=float)
    if np.any(~np.isfinite(y)) or np.any(np.abs(y) >= 1.0):
        raise DomainError("erf_inv requires -1 < y < 1")
    ay = np.abs(y)
    x = np.abs(_erfinv_seed(ay))
    tail = ay > 0.5
    q = 1.0 - ay  # exact for ay > 0.5 (Sterbenz)
    for _ in range(maxiter):
        dens = _TWO_OVER_SQRT_PI * np.exp(-x * x)
        resid = np.where(tail, q - special.erfc(x), special.erf(x) - ay)
        step = resid / dens
        x = x - step
        if np.all(np.abs(step) <= tol * np.maximum(np.abs(x), 1e-300)):
            break
    else:
        raise ConvergenceError("erf_inv Newton iteration did not converge")
    out = np.sign(y) * x
    return out if out.ndim else float(out)


def ellipk(m):
    """Complete elliptic integral of the first kind, ``m < 1``."""
    return special.ellipk(m)


def jacobi_ellipj(u, m):
    """Jacobi ``sn, cn, dn`` and amplitude ``am`` for real `u` and any real `m`.

    Returns
    -------
    sn, cn, dn, am : ndarray or float
    """
    u = np.asarray(u, dtype=float)
    m = float(m)
    if not np.isfinite(m) or np.any(~np.isfinite(u)):
        raise DomainError("jacobi_ellipj needs finite arguments")
    if 0.0 <= m <= 1.0:
        sn, cn, dn, am = special.ellipj(u, m)
    elif m < 0.0:
        # imaginary modulus: sn(u|m) = sd(s u|mu)/s, cn = cd, dn = nd
        s = math.sqrt(1.0 - m)
        mu = -m / (1.0 - m)
        sn_, cn_, dn_, _ = special.ellipj(s * u, mu)
        sn = sn_ / (s * dn_)
        cn = cn_ / dn_
        dn = 1.0 / dn_
        # am(u + 2K) = am(u) + pi and |am - pi u / 2K| < pi/2
        quarter = ellipk(m)
        base = np.arctan2(sn, cn)
        lin = 0.5 * math.pi * u / quarter
        am = base + 2.0 * math.pi * np.round((lin - base) / (2.0 * math.pi))
    else:
        # reciprocal modulus: sn(u|m) = sn(k u|1/m)/k, cn = dn', dn = cn'
        k = math.sqrt(m)
        sn_, cn_, dn_, _ = special.ellipj(k * u, 1.0 / m)
        sn = sn_ / k
        cn = dn_
        dn = cn_
        # libration: |am| < pi/2 and cn > 0
        am = np.arctan2(sn, cn)
    if np.any(~np.isfinite(sn)):
        raise ConvergenceError("Jacobi function evaluation failed")
    if u.ndim == 0:
        return float(sn), float(cn), float(dn), float(am)
    return sn, cn, dn, am


def jacobi_sn(u, m):
    """Jacobi elliptic sine ``sn(u | m)``; ``m = -1`` is modulus ``k = i``."""
    return jacobi_ellipj(u, m)[0]


def jacobi_am(u, m):
    """Jacobi amplitude ``am(u | m)``; ``m = 2`` is modulus ``k = sqrt(2)``."""
    return jacobi_ellipj(u, m)[3]


@dataclass(frozen=True)
class WeierstrassInvariants:
    """Invariants ``(g2, g3)`` of ``(P')**2 = 4 P**3 - g2 P - g3``."""

    g2: float
    g3: float

    def __post_init__(self):
        if not (math.isfinite(self.g2) and math.isfinite(self.g3)):
            raise DomainError("Weierstrass invariants must be finite")

    @property
    def discriminant(self) -> float:
        return self.g2 ** 3 - 27.0 * self.g3 ** 2

    @property
    def degenerate(self) -> bool:
        scale = max(abs(self.g2) ** 3, 27.0 * self.g3 ** 2)
        return abs(self.discriminant) <= 1e-14 * scale or scale == 0.0

    def roots(self) -> np.ndarray:
        """Real roots of ``4e**3 - g2 e - g3`` in decreasing order."""
        r = np.roots([4.0, 0.0, -self.g2, -self.g3])
        if self.discriminant > 0:
            r = np.sort(r.real)[::-1]
        else:
            r = np.array([r[np.argmin(np.abs(r.imag))].real])
        # polish with Newton on the cubic
        for _ in range(3):
            f = 4 * r ** 3 - self.g2 * r - self.g3
            df = 12 * r ** 2 - self.g2
            r = np.where(df != 0, r - f / np.where(df != 0, df, 1.0), r)
        return r

    def _form(self):
        """Select the Jacobi/elementary representation for the real axis."""
        g2, g3 = self.g2, self.g3
        if self.degenerate:
            if g2 == 0.0 and g3 == 0.0:
                return ("zero", None)
            c = math.sqrt(max(g2, 0.0) / 12.0)
            return ("trig", c) if g3 > 0 else ("hyp", c)
        if self.discriminant > 0:
            e1, e2, e3 = self.roots()
            return ("three", (e1, e2, e3))
        (e2,) = self.roots()
        h = math.sqrt(3.0 * e2 * e2 - 0.25 * g2)
        return ("one", (e2, h))

    @property
    def real_period(self) -> float:
        """Real period ``2*omega`` (``inf`` when the real axis has one pole)."""
        kind, p = self._form()
        if kind in ("zero", "hyp"):
            return math.inf
        if kind == "trig":
            return math.pi / math.sqrt(3.0 * p)
        if kind == "three":
            e1, e2, e3 = p
            return 2.0 * ellipk((e2 - e3) / (e1 - e3)) / math.sqrt(e1 - e3)
        e2, h = p
        return 2.0 * ellipk(0.5 - 0.75 * e2 / h) / math.sqrt(h)


def _check_poles(z, period, eps):
    if math.isfinite(period):
        dist = np.abs(z - period * np.round(z / period))
        if eps is None:
            eps = 1e-6 * period
    else:
        dist = np.abs(z)
        if eps is None:
            eps = 1e-6
    if np.any(dist < eps):
        raise PoleError(f"argument within {eps:.3g} of a pole of P")


def weierstrass_p(z, inv: WeierstrassInvariants, eps=None, derivative=False):
    """Weierstrass ``P(z; g2, g3)`` on the real axis.

    Parameters
    ----------
    z : float or array_like
        Real argument, away from the real-axis lattice points.
    inv : WeierstrassInvariants
    eps : float, optional
        Pole exclusion radius; defaults to ``1e-6`` times the real period.
    derivative : bool
        Also return ``P'(z)``.

    Degenerate invariants (zero discriminant) are handled by their
    elementary closed forms.
    """
    z = np.asarray(z, dtype=float)
    _check_poles(z, inv.real_period, eps)
    kind, p = inv._form()
    if kind == "zero":
        val = 1.0 / z ** 2
        der = -2.0 / z ** 3
    elif kind in ("trig", "hyp"):
        c = p
        a = math.sqrt(3.0 * c)
        if kind == "trig":
            s, co = np.sin(a * z), np.cos(a * z)
            val = -c + 3.0 * c / s ** 2
        else:
            s, co = np.sinh(a * z), np.cosh(a * z)
            val = c + 3.0 * c / s ** 2
        der = -6.0 * c * a * co / s ** 3
    elif kind == "three":
        e1, e2, e3 = p
        r = math.sqrt(e1 - e3)
        sn, cn, dn, _ = jacobi_ellipj(r * z, (e2 - e3) / (e1 - e3))
        val = e3 + (e1 - e3) / sn ** 2
        der = -2.0 * r ** 3 * cn * dn / sn ** 3
    else:
        e2, h = p
        sh = math.sqrt(h)
        sn, cn, dn, _ = jacobi_ellipj(2.0 * sh * z, 0.5 - 0.75 * e2 / h)
        # (1 + cn)/(1 - cn) rewritten without the cancellation in 1 - cn
        onepc = 1.0 + cn
        val = e2 + h * onepc ** 2 / sn ** 2
        der = -4.0 * h * sh * onepc ** 2 * dn / sn ** 3
    if z.ndim == 0:
        val, der = float(val), float(der)
    return (val, der) if derivative else val
