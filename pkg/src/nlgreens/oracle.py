"""Reference solutions of ``w'' + N(w, w') = f(t)`` by direct integration.

The adaptive Dormand-Prince pair produces the "exact" curve; classical
fixed-step RK4 is kept as an independent cross-check. Impulses in `f`
become slope jumps, so the integrated right-hand side is always smooth.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularityError, StepUnderflowError
from .grids import TimeGrid, Trajectory
from .integrate import dopri54, observed_order, rk4_fixed
from .kernels import Nonlinearity
from .sources import CompositeSource, SourceFunction

Source = SourceFunction | CompositeSource


@dataclass(frozen=True)
class IvpProblem:
    nonlinearity: Nonlinearity
    source: Source
    w0: float = 0.0
    v0: float = 0.0
    tolerance: float = 1e-10
    bound: float = 1e6

    def __post_init__(self):
        if not self.tolerance > 0:
            raise DomainError("tolerance must be positive")


def _rhs(p: IvpProblem):
    nl, f = p.nonlinearity, p.source

    def rhs(t, y):
        return np.array([y[1], f.smooth(t) - nl(y[0], y[1])])

    return rhs


def _guard(p: IvpProblem):
    if p.nonlinearity is not Nonlinearity.RECIPROCAL:
        return None
    sign = math.copysign(1.0, p.w0)

    def guard(t, y):
        if y[0] * sign <= 0.0:
            raise SingularityError(f"solution reached w = 0 at t = {t:.6g}")

    return guard


def _segments(p: IvpProblem, grid: TimeGrid):
    """Check the start and collect slope jumps ``{location: amplitude}`` inside the window."""
    if grid.t0 != 0.0:
        raise DomainError("reference solutions start at t0 = 0")
    if p.nonlinearity is Nonlinearity.RECIPROCAL and p.w0 == 0.0:
        raise SingularityError("1/w is singular at the rest state; start from w0 != 0")
    jumps: dict[float, float] = {}
    for loc, amp in p.source.impulses():
        if 0.0 <= loc <= grid.t_end:
            jumps[loc] = jumps.get(loc, 0.0) + amp
    return jumps


def _solve(p: IvpProblem, grid: TimeGrid, stepper):
    t = grid.points
    jumps = _segments(p, grid)
    y = np.array([p.w0, p.v0 + jumps.pop(0.0, 0.0)])
    out = np.empty((grid.n, 2))
    out[0] = y
    start_idx, t_start = 0, 0.0
    cuts = sorted(jumps)
    for loc in cuts + [None]:
        end_idx = grid.n - 1 if loc is None else int(np.searchsorted(t, loc, side="right")) - 1
        times = np.concatenate([[t_start], t[start_idx + 1:end_idx + 1]])
        if loc is not None and loc > times[-1]:
            times = np.concatenate([times, [loc]])
        seg = stepper(times, y)
        n_grid = end_idx - start_idx
        out[start_idx + 1:end_idx + 1] = seg[1:1 + n_grid]
        if loc is None:
            break
        y = seg[-1].copy()
        y[1] += jumps[loc]
        if t[end_idx] == loc:
            out[end_idx] = y
        start_idx, t_start = end_idx, loc
    return out


def reference_solve(p: IvpProblem, grid: TimeGrid, full_state: bool = False):
    """Adaptive reference trajectory ``w_exact`` on `grid`.

    With ``full_state=True`` the ``(n, 2)`` array of ``(w, w')`` is returned
    instead of a `Trajectory`.
    """
    rhs, guard = _rhs(p), _guard(p)

    def stepper(times, y0):
        try:
            return dopri54(rhs, y0, times, tol=p.tolerance, bound=p.bound, guard=guard)
        except StepUnderflowError as exc:
            # steps collapse as w -> 0 under 1/w before the sign check can fire
            if guard is not None:
                raise SingularityError(f"solution reached w = 0 ({exc})") from exc
            raise

    out = _solve(p, grid, stepper)
    return out if full_state else Trajectory(grid, out[:, 0])


def fixed_step_solve(p: IvpProblem, grid: TimeGrid, substeps: int = 1) -> Trajectory:
    """RK4 with step ``grid.dt / substeps``, sampled on `grid`.

    Impulses must sit on grid points.
    """
    rhs, guard = _rhs(p), _guard(p)
    h = grid.dt / substeps

    def stepper(times, y0):
        if times.size < 2:
            return y0[None, :]
        n_fine = int(round((times[-1] - times[0]) / h)) + 1
        fine = rk4_fixed(rhs, y0, times[0], h, n_fine, bound=p.bound, guard=guard)
        idx = np.round((times - times[0]) / h).astype(int)
        return fine[idx]

    return Trajectory(grid, _solve(p, grid, stepper)[:, 0])


def convergence_check(p: IvpProblem, grid: TimeGrid) -> float:
    """Observed order of RK4 from steps ``dt``, ``dt/2``, ``dt/4`` (about 4).

    ``inf`` means all three runs agree exactly (e.g. an equilibrium).
    """
    runs = [fixed_step_solve(p, grid, k).values for k in (1, 2, 4)]
    return observed_order(*runs)


def energy(nl: Nonlinearity, w, v):
    """``E = v**2/2 + V(w)``; conserved for unforced conservative nonlinearities."""
    return 0.5 * np.asarray(v) ** 2 + nl.potential(np.asarray(w))
