"""Nonlinear Green's function catalog.

A kernel ``G`` solves ``G'' + N(G, G') = s1 * delta(t)`` with rest data
before the impulse, i.e. ``G(0+) = 0`` and ``G'(0+) = s1`` and the
homogeneous equation for ``t > 0``. Six nonlinearities have closed forms;
any of them can also be integrated numerically.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import optimize

from . import specfun
from .errors import DomainError, SingularityError
from .grids import TimeGrid, Trajectory
from .integrate import dopri54

_SQRT2 = math.sqrt(2.0)
_QUARTIC_ROOT2 = 2.0 ** 0.25


class Nonlinearity(enum.Enum):
    CUBIC = "cubic"
    SINE_GORDON = "sine-gordon"
    QUADRATIC = "quadratic"
    RECIPROCAL = "reciprocal"
    EXPONENTIAL = "exponential"
    ADVECTIVE = "advective"

    @classmethod
    def parse(cls, tag: str) -> "Nonlinearity":
        key = tag.strip().lower().replace("_", "-")
        aliases = {"sine": "sine-gordon", "sin": "sine-gordon", "sinegordon": "sine-gordon",
                   "exp": "exponential", "w3": "cubic", "w2": "quadratic",
                   "inverse": "reciprocal"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise DomainError(f"unknown nonlinearity {tag!r}") from None

    def evaluate(self, w, w_prime=0.0, t=0.0):
        """``N(w, w', t)``; `t` is accepted for signature uniformity and unused."""
        if self is Nonlinearity.CUBIC:
            return w ** 3
        if self is Nonlinearity.SINE_GORDON:
            return np.sin(w)
        if self is Nonlinearity.QUADRATIC:
            return w ** 2
        if self is Nonlinearity.RECIPROCAL:
            return 1.0 / w
        if self is Nonlinearity.EXPONENTIAL:
            return np.exp(w)
        return w * w_prime

    __call__ = evaluate

    def potential(self, w):
        """``V`` with ``V' = N`` for the conservative (velocity-free) cases."""
        if self is Nonlinearity.CUBIC:
            return 0.25 * w ** 4
        if self is Nonlinearity.SINE_GORDON:
            return 1.0 - np.cos(w)
        if self is Nonlinearity.QUADRATIC:
            return w ** 3 / 3.0
        if self is Nonlinearity.RECIPROCAL:
            return np.log(np.abs(w))
        if self is Nonlinearity.EXPONENTIAL:
            return np.exp(w)
        raise DomainError("the advective nonlinearity has no potential")

    @property
    def rest_is_equilibrium(self) -> bool:
        return self in (Nonlinearity.CUBIC, Nonlinearity.SINE_GORDON,
                        Nonlinearity.QUADRATIC, Nonlinearity.ADVECTIVE)


class KernelForm(enum.Enum):
    CLOSED = "closed"
    NUMERIC = "numeric"


@dataclass(frozen=True)
class KernelSpec:
    """Which Green's function to use and with what constants.

    For ``NUMERIC`` kernels `s1` is the initial slope. For ``CLOSED`` kernels
    ``(c1, c2)`` fix the kernel and `s1` is bookkeeping; use
    :meth:`homogeneous` to get constants that realize a given slope.
    """

    nonlinearity: Nonlinearity
    s1: float = 1.0
    c1: float = 0.0
    c2: float = 0.0
    form: KernelForm = KernelForm.CLOSED
    regularization: float | None = None
    tol: float = 1e-10
    bound: float = 1e6

    def __post_init__(self):
        for name in ("s1", "c1", "c2"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"kernel constant {name} must be finite")

    @classmethod
    def homogeneous(cls, nl: Nonlinearity, s1: float = 1.0,
                    form: KernelForm = KernelForm.CLOSED, **kw) -> "KernelSpec":
        """Kernel with ``G(0+) = 0`` and, where the family allows, ``G'(0+) = s1``.

        Cubic and sine-Gordon closed forms are fixed (slopes 1 and sqrt(2));
        the reciprocal family only fixes the sign of its amplitude.
        """
        if form is KernelForm.NUMERIC:
            return cls(nl, s1, form=form, **kw)
        c1, c2 = cauchy_constants(nl, s1)
        return cls(nl, s1, c1, c2, form, **kw)

    def with_s1(self, s1: float) -> "KernelSpec":
        """Same family and form re-parametrized to slope `s1`."""
        if self.form is KernelForm.NUMERIC:
            return replace(self, s1=s1)
        c1, c2 = cauchy_constants(self.nonlinearity, s1)
        return replace(self, s1=s1, c1=c1, c2=c2)


def catalog_kernel(nl: Nonlinearity) -> KernelSpec:
    """Closed form with the constants used throughout the catalog tests.

    The exponential kernel is the zero-slope one, ``ln(1 - tanh^2(t/sqrt 2))``;
    the others carry unit slope.
    """
    s1 = 0.0 if nl is Nonlinearity.EXPONENTIAL else 1.0
    return KernelSpec.homogeneous(nl, s1)


# -- constants from homogeneous Cauchy data --------------------------------

def quadratic_scale() -> float:
    """Real scale ``c`` in ``G = -(1/c) P(c t + c1; 0, c2)``.

    Substitution gives ``G'' + G**2 = P**2 (1/c**2 - 6c)``; among the real cube
    roots of ``+-1/6`` the one cancelling this coefficient is kept. The
    negative root instead produces ``G'' = G**2``.
    """
    candidates = (float(np.cbrt(1.0 / 6.0)), float(np.cbrt(-1.0 / 6.0)))
    return min(candidates, key=lambda c: abs(1.0 / c ** 2 - 6.0 * c))


def exponential_constants(s1: float) -> tuple[float, float]:
    """``(c1, c2)`` with ``G(0) = 0`` and ``G'(0) = s1`` for ``G'' + exp(G) = 0``.

    Energy gives ``c1 = 2 + s1**2``; the phase is ``c2 = -2 asinh(s1/sqrt 2)/sqrt(c1)``.
    """
    c1 = 2.0 + s1 * s1
    c2 = -2.0 * math.asinh(s1 / _SQRT2) / math.sqrt(c1)
    return c1, c2


def exponential_c2(c1: float, slope_sign: float = 1.0) -> float:
    """Phase ``c2`` enforcing ``G(0) = 0`` for a given ``c1 >= 2``.

    Solves ``(c1/2) sech^2(sqrt(c1) c2 / 2) = 1``; the root is taken on the
    branch whose initial slope has sign `slope_sign`.
    """
    if c1 < 2.0:
        raise DomainError("G(0) = 0 needs c1 >= 2 for the exponential kernel")
    # acosh(sqrt(c1/2)) written as asinh to stay accurate near c1 = 2
    mag = 2.0 * math.asinh(math.sqrt(0.5 * c1 - 1.0)) / math.sqrt(c1)
    return -math.copysign(mag, slope_sign)


def quadratic_constants(s1: float) -> tuple[float, float]:
    """``(c1, c2)`` for the quadratic kernel: ``c2 = -s1**2``, ``P(c1) = 0``."""
    if s1 == 0.0:
        raise DomainError("zero slope gives the rest state G = 0, not a P kernel")
    inv = specfun.WeierstrassInvariants(0.0, -s1 * s1)
    half = 0.5 * inv.real_period
    lo, hi = (1e-3 * half, half) if s1 > 0 else (half, 2.0 * half - 1e-3 * half)
    c1 = optimize.brentq(lambda z: specfun.weierstrass_p(z, inv), lo, hi,
                         xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    return float(c1), -s1 * s1


def cauchy_constants(nl: Nonlinearity, s1: float) -> tuple[float, float]:
    """Integration constants ``(c1, c2)`` for the closed form of `nl`."""
    if nl is Nonlinearity.EXPONENTIAL:
        return exponential_constants(s1)
    if nl is Nonlinearity.ADVECTIVE:
        if s1 < 0:
            raise DomainError("the tanh kernel only realizes slopes s1 >= 0")
        return math.sqrt(2.0 * s1), 0.0
    if nl is Nonlinearity.QUADRATIC:
        return quadratic_constants(s1)
    if nl is Nonlinearity.RECIPROCAL:
        # the displayed family solves G'' + 1/G = 0 only for |c1| = 1
        return math.copysign(1.0, s1), -math.sqrt(0.5 * math.pi)
    return 0.0, 0.0


# -- closed forms -----------------------------------------------------------

def _logcosh(x):
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2.0 * ax)) - math.log(2.0)


def _reciprocal_phi(spec, t):
    arg = -math.sqrt(2.0 / math.pi) * abs(spec.c1) * np.abs(t + spec.c2)
    if np.any(np.abs(arg) > 1.0):
        raise DomainError("reciprocal kernel left its validity window (|erf argument| > 1)")
    edge = np.abs(arg) == 1.0
    phi = np.zeros_like(arg)
    if np.any(~edge):
        phi[~edge] = specfun.erf_inv(arg[~edge])
    return phi, edge, np.sign(t + spec.c2)


def _closed_derivatives(spec: KernelSpec, t: np.ndarray):
    """``(G, G', G'')`` of a closed form at positive lags `t`."""
    nl = spec.nonlinearity
    if nl is Nonlinearity.CUBIC:
        a = _QUARTIC_ROOT2
        sn, cn, dn, _ = specfun.jacobi_ellipj(t / a, -1.0)
        return a * sn, cn * dn, (sn * cn ** 2 - sn * dn ** 2) / a
    if nl is Nonlinearity.SINE_GORDON:
        sn, cn, dn, am = specfun.jacobi_ellipj(t / _SQRT2, 2.0)
        return 2.0 * am, _SQRT2 * dn, -2.0 * sn * cn
    if nl is Nonlinearity.QUADRATIC:
        c = quadratic_scale()
        inv = specfun.WeierstrassInvariants(0.0, spec.c2)
        p, dp = specfun.weierstrass_p(c * t + spec.c1, inv, derivative=True)
        return -p / c, -dp, -c * (6.0 * p ** 2 - 0.5 * inv.g2)
    if nl is Nonlinearity.RECIPROCAL:
        c1 = spec.c1
        phi, edge, sgn = _reciprocal_phi(spec, t)
        g = np.where(edge, 0.0, c1 * np.exp(-phi ** 2))
        dg = math.sqrt(2.0) * c1 * abs(c1) * phi * sgn
        with np.errstate(over="ignore"):
            d2g = -c1 ** 3 * np.exp(phi ** 2)
        return g, np.where(edge, np.inf * sgn, dg), np.where(edge, -np.inf, d2g)
    if nl is Nonlinearity.EXPONENTIAL:
        c1 = spec.c1
        if c1 <= 0:
            raise DomainError("exponential kernel needs c1 > 0")
        b = 0.5 * math.sqrt(c1)
        s = b * (t + spec.c2)
        sech2 = 1.0 / np.cosh(np.minimum(np.abs(s), 350.0)) ** 2
        return (math.log(0.5 * c1) - 2.0 * _logcosh(s), -2.0 * b * np.tanh(s),
                -2.0 * b * b * sech2)
    c1 = spec.c1
    x = 0.5 * c1 * (t + spec.c2)
    th = np.tanh(x)
    sech2 = 1.0 / np.cosh(np.minimum(np.abs(x), 350.0)) ** 2
    return c1 * th, 0.5 * c1 ** 2 * sech2, -0.5 * c1 ** 3 * sech2 * th


def kernel_derivatives(spec: KernelSpec, lags):
    """Analytic ``(G, G', G'')`` of a closed-form kernel at positive `lags`."""
    if spec.form is not KernelForm.CLOSED:
        raise DomainError("analytic derivatives exist only for closed forms")
    t = np.atleast_1d(np.asarray(lags, dtype=float))
    if np.any(t <= 0):
        raise DomainError("derivatives are taken on the open support t > 0")
    return _closed_derivatives(spec, t)


def eval_kernel(spec: KernelSpec, delta_t):
    """Kernel value ``G(delta_t)``, zero for ``delta_t <= 0``.

    Works for both forms; a numeric kernel is integrated up to the largest
    requested lag.
    """
    d = np.asarray(delta_t, dtype=float)
    flat = np.atleast_1d(d)
    out = np.zeros(flat.shape)
    pos = flat > 0
    if np.any(pos):
        if spec.form is KernelForm.CLOSED:
            out[pos] = _closed_derivatives(spec, flat[pos])[0]
        else:
            out[pos] = _numeric_values(spec, flat[pos])
    return float(out[0]) if d.ndim == 0 else out.reshape(d.shape)


def kernel_on_grid(spec: KernelSpec, grid: TimeGrid) -> np.ndarray:
    """Kernel sampled at lags ``k*dt``, ``k = 0..n-1``."""
    return eval_kernel(spec, grid.dt * np.arange(grid.n))


# -- certification ---------------------------------------------------------

def _fd_residual(spec, t, h):
    g_m = eval_kernel(spec, t - h)
    g_0 = eval_kernel(spec, t)
    g_p = eval_kernel(spec, t + h)
    d2 = (g_p - 2.0 * g_0 + g_m) / (h * h)
    d1 = (g_p - g_m) / (2.0 * h)
    return np.abs(d2 + spec.nonlinearity(g_0, d1))


def kernel_residual(spec: KernelSpec, grid: TimeGrid) -> float:
    """Max ``|G'' + N(G, G')|`` over interior grid points by central differences."""
    if grid.t0 <= 0:
        raise DomainError("residual grid must start strictly after the impulse (t0 > 0)")
    g = eval_kernel(spec, grid.points)
    h = grid.dt
    d2 = (g[2:] - 2.0 * g[1:-1] + g[:-2]) / (h * h)
    d1 = (g[2:] - g[:-2]) / (2.0 * h)
    return float(np.max(np.abs(d2 + spec.nonlinearity(g[1:-1], d1))))


def analytic_residual(spec: KernelSpec, lags) -> float:
    """Max ``|G'' + N(G, G')|`` using analytic derivatives of the closed form."""
    g, dg, d2g = kernel_derivatives(spec, lags)
    return float(np.max(np.abs(d2g + spec.nonlinearity(g, dg))))


def residual_convergence_ratio(spec: KernelSpec, points, h: float) -> float:
    """Ratio of finite-difference residuals at fixed `points` for steps ``h`` and ``h/2``.

    About 4 for a correct closed form in the truncation-dominated regime.
    """
    points = np.asarray(points, dtype=float)
    coarse = np.max(_fd_residual(spec, points, h))
    fine = np.max(_fd_residual(spec, points, 0.5 * h))
    return float(coarse / fine)


def boundary_values(spec: KernelSpec, h: float = 1e-9) -> tuple[float, float]:
    """``(G(h), (G(2h) - G(h))/h)``: limits of value and slope at the impulse."""
    g1, g2 = eval_kernel(spec, np.array([h, 2.0 * h]))
    return float(g1), float((g2 - g1) / h)


def satisfies_homogeneous(spec: KernelSpec, h: float = 1e-9, atol: float = 1e-6) -> bool:
    """True when ``G(0+)`` vanishes, i.e. the constants respect rest initial data."""
    return abs(boundary_values(spec, h)[0]) <= atol


# -- numeric kernels -------------------------------------------------------

def _reciprocal_start(amplitude: float, eps: float) -> tuple[float, float]:
    """Exact short-time data of ``G'' = -1/G`` with ``G(0) = 0`` and peak `amplitude`.

    The zero-energy solution satisfies ``t = sqrt(pi/2) erfc(U)``,
    ``G = exp(-U**2)``, ``G' = sqrt(2) U``; scaling ``G -> a G(t/a)`` sets the peak.
    """
    a = abs(amplitude)
    q = (eps / a) / math.sqrt(0.5 * math.pi)
    if not 0.0 < q < 1.0:
        raise DomainError("regularization offset outside the rising branch")
    u = specfun.erf_inv(1.0 - q)
    g, dg = a * math.exp(-u * u), math.sqrt(2.0) * u
    return math.copysign(g, amplitude), math.copysign(dg, amplitude)


def _numeric_values(spec: KernelSpec, lags: np.ndarray) -> np.ndarray:
    nl = spec.nonlinearity
    order = np.argsort(lags, kind="stable")
    sorted_lags = lags[order]
    out = np.empty_like(sorted_lags)

    def rhs(t, y):
        return np.array([y[1], -nl(y[0], y[1])])

    guard = None
    if nl is Nonlinearity.RECIPROCAL:
        if spec.regularization is None:
            raise SingularityError("reciprocal kernel needs a regularization offset to start")
        if spec.s1 == 0.0:
            raise DomainError("reciprocal kernel amplitude s1 must be nonzero")
        eps = spec.regularization
        sign = math.copysign(1.0, spec.s1)

        def guard(t, y):
            if y[0] * sign <= 0.0:
                raise SingularityError(f"reciprocal kernel reached G = 0 at t = {t:.6g}")

        early = sorted_lags <= eps
        for i in np.nonzero(early)[0]:
            out[i] = _reciprocal_start(spec.s1, sorted_lags[i])[0]
        start = np.array(_reciprocal_start(spec.s1, eps))
        t0, late = eps, ~early
    else:
        start = np.array([0.0, spec.s1])
        t0, late = 0.0, np.ones(sorted_lags.shape, bool)
    if np.any(late):
        times = np.concatenate([[t0], sorted_lags[late]])
        traj = dopri54(rhs, start, times, tol=spec.tol, bound=spec.bound, guard=guard)
        out[late] = traj[1:, 0]
    result = np.empty_like(out)
    result[order] = out
    return result


def numeric_kernel(nl: Nonlinearity, s1: float, grid: TimeGrid, regularization=None,
                   tol: float = 1e-10, bound: float = 1e6) -> Trajectory:
    """Integrate ``G'' + N(G, G') = 0`` from ``G(0) = 0, G'(0) = s1`` on `grid`.

    The reciprocal nonlinearity is singular at ``G = 0``; it starts at
    ``t = regularization`` from exact short-time data with peak ``|s1|``.
    """
    if grid.t0 != 0.0:
        raise DomainError("numeric kernels are tabulated from t0 = 0")
    spec = KernelSpec(nl, s1, form=KernelForm.NUMERIC, regularization=regularization,
                      tol=tol, bound=bound)
    return Trajectory(grid, eval_kernel(spec, grid.points))
