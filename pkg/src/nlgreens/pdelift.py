"""Lift of ODE kernels to the exponential-nonlinearity wave equation.

The auxiliary variable

    chi^2 = a1 * (exp(-lambda x) / (alpha lambda^2) - (t + a2)^2 / 4)

reduces ``w_tt = alpha (exp(lambda x) w_x)_x + N(w)`` to
``w'' + (4/a1) N(w) = 0`` in ``chi``. With ``(alpha, lambda, a1, a2) =
(1, 2, 4, 0)`` this is ``chi^2 = exp(-2x) - t^2`` and the lifted kernel is
``G~(x, t) = G(chi(x, t))``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError
from .kernels import KernelSpec, Nonlinearity, eval_kernel, catalog_kernel


@dataclass(frozen=True)
class PdeConfig:
    alpha: float = 1.0
    lam: float = 2.0
    a1: float = 4.0
    a2: float = 0.0

    def __post_init__(self):
        vals = (self.alpha, self.lam, self.a1, self.a2)
        if not all(math.isfinite(v) for v in vals):
            raise ConfigError("PDE parameters must be finite")
        if self.a1 == 0.0:
            raise ConfigError("separation constant a1 must be nonzero")
        if self.alpha == 0.0 or self.lam == 0.0:
            raise ConfigError("alpha and lambda must be nonzero")


EXP_WAVE = PdeConfig()


@dataclass(frozen=True)
class SpaceTimeGrid:
    x0: float
    dx: float
    nx: int
    t0: float
    dt: float
    nt: int

    def __post_init__(self):
        if self.dx <= 0 or self.dt <= 0:
            raise ConfigError("grid steps must be positive")
        if self.nx < 2 or self.nt < 2:
            raise ConfigError("grid needs at least 2 points per axis")

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.nx)

    @property
    def t(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.nt)


@dataclass
class Field2D:
    grid: SpaceTimeGrid
    values: np.ndarray  # (nx, nt)
    mask: np.ndarray  # True where chi^2 < 0

    def __post_init__(self):
        shape = (self.grid.nx, self.grid.nt)
        self.values = np.asarray(self.values, dtype=float)
        self.mask = np.asarray(self.mask, dtype=bool)
        if self.values.shape != shape or self.mask.shape != shape:
            raise DomainError(f"field arrays must have shape {shape}")


def chi_squared(x, t, cfg: PdeConfig = EXP_WAVE):
    x, t = np.asarray(x, dtype=float), np.asarray(t, dtype=float)
    return cfg.a1 * (np.exp(-cfg.lam * x) / (cfg.alpha * cfg.lam ** 2)
                     - (t + cfg.a2) ** 2 / 4.0)


def chi(x, t, cfg: PdeConfig = EXP_WAVE):
    """Nonnegative root of ``chi^2``; ``nan`` where ``chi^2 < 0``."""
    c2 = chi_squared(x, t, cfg)
    with np.errstate(invalid="ignore"):
        out = np.where(c2 >= 0.0, np.sqrt(np.abs(c2)), np.nan)
    return float(out) if out.ndim == 0 else out


def reduced_ode_coefficient(cfg: PdeConfig) -> float:
    """Factor ``4/a1`` multiplying the nonlinearity in the reduced ODE."""
    return 4.0 / cfg.a1


def lift_kernel(x, t, spec: KernelSpec | None = None, cfg: PdeConfig = EXP_WAVE):
    """``G(chi(x, t))``, zero where ``chi`` is invalid.

    Non-exponential kernels are accepted but the lift is only meaningful for
    the exponential wave equation; a warning is issued for them.
    """
    spec = spec or catalog_kernel(Nonlinearity.EXPONENTIAL)
    if spec.nonlinearity is not Nonlinearity.EXPONENTIAL:
        warnings.warn("lifting a non-exponential kernel is experimental", stacklevel=2)
    c = np.atleast_1d(chi(x, t, cfg))
    out = np.zeros(c.shape)
    ok = ~np.isnan(c)
    if np.any(ok):
        out[ok] = eval_kernel(spec, c[ok])
    if np.ndim(x) == 0 and np.ndim(t) == 0:
        return float(out[0])
    return out


def _weights(n, h):
    w = np.full(n, h)
    w[0] = w[-1] = 0.5 * h
    return w


def pde_solve(f, spec: KernelSpec | None, cfg: PdeConfig, s2: float, grid: SpaceTimeGrid,
              margin: float = 0.25, mass_tol: float = 1e-3) -> Field2D:
    """Approximate wave-equation field ``s2 * int int G~(x-xi, t-tau) f(xi, tau)``.

    Parameters
    ----------
    f : ndarray (nx, nt) or callable
        Source sampled on the grid, or ``f(xi, tau)`` which is then sampled on
        the grid widened by `margin` times its width on both sides in ``x``.
    spec : KernelSpec, optional
        Defaults to the zero-slope exponential kernel.
    cfg : PdeConfig
    s2 : float
    grid : SpaceTimeGrid
        Must start at ``t0 = 0``.

    Composite trapezoid in both variables; the time integral runs over
    ``[0, t]`` and the space integral over the (widened) window.
    """
    spec = spec or catalog_kernel(Nonlinearity.EXPONENTIAL)
    if grid.t0 != 0.0:
        raise DomainError("space-time grid must start at t0 = 0")
    x, t = grid.x, grid.t
    if callable(f):
        pad = int(round(margin * (grid.nx - 1)))
        xi = grid.x0 + grid.dx * np.arange(-pad, grid.nx + pad)
        fs = np.asarray(f(xi[:, None], t[None, :]), dtype=float) * np.ones((xi.size, t.size))
    else:
        pad = 0
        xi = x
        fs = np.asarray(f, dtype=float)
        if fs.shape != (grid.nx, grid.nt):
            raise DomainError("sampled source must have shape (nx, nt)")
    if not np.all(np.isfinite(fs)):
        raise DomainError("source must be finite on the grid")
    peak = np.max(np.abs(fs))
    if peak > 0 and max(np.max(np.abs(fs[0])), np.max(np.abs(fs[-1]))) > mass_tol * peak:
        warnings.warn("source has significant mass at the spatial window edge; "
                      "the truncated x-integral may be inaccurate", stacklevel=2)
    wx = _weights(xi.size, grid.dx)
    # spatial lags x_i - xi_j are integer multiples of dx
    lag_idx = np.arange(grid.nx)[:, None] - (np.arange(xi.size)[None, :] - pad)
    lags = grid.dx * np.arange(lag_idx.min(), lag_idx.max() + 1)
    table = np.stack([lift_kernel(lags, q * grid.dt, spec, cfg) for q in range(grid.nt)], axis=1)
    offset = -lag_idx.min()
    values = np.zeros((grid.nx, grid.nt))
    fw = fs * wx[:, None]
    for k in range(1, grid.nt):
        wt = _weights(k + 1, grid.dt)
        acc = np.zeros(grid.nx)
        for l in range(k + 1):
            acc += wt[l] * (table[lag_idx + offset, k - l] @ fw[:, l])
        values[:, k] = acc
    values *= s2
    mask = chi_squared(x[:, None], t[None, :], cfg) < 0.0
    values[mask] = 0.0
    return Field2D(grid, values, mask)


def levelset_points(chi0: float, cfg: PdeConfig, samples: int, grid: SpaceTimeGrid):
    """Up to `samples` points of ``{chi = chi0}`` inside the grid window."""
    ts = np.linspace(grid.t[0], grid.t[-1], 4 * samples)
    arg = cfg.alpha * cfg.lam ** 2 * (chi0 ** 2 / cfg.a1 + (ts + cfg.a2) ** 2 / 4.0)
    ok = arg > 0
    xs = -np.log(arg[ok]) / cfg.lam
    ts = ts[ok]
    inside = (xs >= grid.x[0]) & (xs <= grid.x[-1])
    xs, ts = xs[inside], ts[inside]
    if xs.size == 0:
        return xs, ts
    pick = np.unique(np.linspace(0, xs.size - 1, samples).round().astype(int))
    return xs[pick], ts[pick]


DEFAULT_WINDOW = SpaceTimeGrid(-2.0, 0.01, 401, 0.0, 0.01, 201)


def levelset_consistency(spec: KernelSpec | None, cfg: PdeConfig, chi0: float,
                         samples: int = 10, grid: SpaceTimeGrid = DEFAULT_WINDOW) -> float:
    """Max pairwise spread of ``G~`` along the level set ``chi = chi0``.

    Zero up to rounding when the lift depends on ``(x, t)`` only through ``chi``.
    """
    if samples < 2:
        raise DomainError("need at least 2 samples")
    if chi0 < 0:
        raise DomainError("level must be nonnegative")
    xs, ts = levelset_points(chi0, cfg, samples, grid)
    if xs.size < 2:
        raise DomainError(f"level set chi = {chi0} does not meet the grid window")
    vals = np.atleast_1d(lift_kernel(xs, ts, spec, cfg))
    return float(vals.max() - vals.min())
