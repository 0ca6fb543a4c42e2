"""Scaled convolution approximation ``w(t) ~ s2 * int_0^t G(t - tau) f(tau) dtau``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .grids import TimeGrid, Trajectory
from .integrate import observed_order
from .kernels import KernelSpec, eval_kernel, kernel_on_grid
from .sources import CompositeSource, SourceFunction

Source = SourceFunction | CompositeSource


@dataclass(frozen=True)
class ScalePair:
    s1: float
    s2: float


def _impulse_weight(loc: float, t0: float) -> float:
    # an impulse sitting on the lower limit contributes half its mass
    if loc == t0:
        return 0.5
    return 1.0 if loc > t0 else 0.0


def _trapezoid(g: np.ndarray, fv: np.ndarray, dt: float) -> np.ndarray:
    n = g.size
    out = np.zeros(n)
    for i in range(1, n):
        # fixed summation order; only f[0..i] is read for output i
        inner = np.dot(g[i - 1:0:-1], fv[1:i]) if i > 1 else 0.0
        out[i] = dt * (inner + 0.5 * (g[i] * fv[0] + g[0] * fv[i]))
    return out


def _simpson(spec: KernelSpec, f: Source, grid: TimeGrid, panels: int) -> np.ndarray:
    out = np.zeros(grid.n)
    for i, t in enumerate(grid.points):
        if t == grid.t0:
            continue
        tau = np.linspace(grid.t0, t, 2 * panels * i + 1)
        h = tau[1] - tau[0]
        y = eval_kernel(spec, t - tau) * f.smooth(tau)
        out[i] = h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum())
    return out


def convolve(spec: KernelSpec, f: Source, grid: TimeGrid, quadrature: str = "trapezoid",
             panels: int = 1) -> np.ndarray:
    """Unscaled convolution ``int_0^t G(t - tau) f(tau) dtau`` at the grid points.

    Impulses are sifted exactly; the smooth part uses composite trapezoid on
    the grid, or composite Simpson with ``2*panels`` subintervals per grid
    step when ``quadrature="simpson"``.
    """
    if grid.t0 != 0.0:
        raise DomainError("convolution grids start at t0 = 0")
    t = grid.points
    total = np.zeros(grid.n)
    if quadrature == "trapezoid":
        smooth = _trapezoid(kernel_on_grid(spec, grid), f.smooth(t), grid.dt)
    elif quadrature == "simpson":
        smooth = _simpson(spec, f, grid, panels)
    else:
        raise DomainError(f"unknown quadrature {quadrature!r}")
    total += smooth
    for loc, amp in f.impulses():
        w = _impulse_weight(loc, grid.t0)
        if w:
            total += w * amp * eval_kernel(spec, t - loc)
    return total


def frasca_solve(spec: KernelSpec, f: Source, s2: float, grid: TimeGrid,
                 quadrature: str = "trapezoid") -> Trajectory:
    """Approximate solution ``s2 * (G * f)(t)`` on `grid`.

    A delta at the start of the window is sifted with half weight, one at an
    interior time with full weight.
    """
    return Trajectory(grid, s2 * convolve(spec, f, grid, quadrature))


def convolution_order_check(spec: KernelSpec, f: Source, grid: TimeGrid) -> float:
    """Observed quadrature order from runs at ``dt``, ``dt/2``, ``dt/4``."""
    if not f.is_smooth:
        raise DomainError("order check needs a smooth source; impulses are sifted exactly")
    runs = [convolve(spec, f, grid.refine(k))[::k] for k in (1, 2, 4)]
    return observed_order(*runs)
