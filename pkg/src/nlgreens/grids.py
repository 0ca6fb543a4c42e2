"""Uniform time grids and sampled trajectories."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, GridMismatchError


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid ``t0 + i*dt`` for ``i = 0 .. n-1``."""

    t0: float
    dt: float
    n: int

    def __post_init__(self):
        if not (np.isfinite(self.t0) and np.isfinite(self.dt)):
            raise ConfigError("grid start and step must be finite")
        if self.dt <= 0:
            raise ConfigError(f"grid step must be positive, got {self.dt}")
        if int(self.n) != self.n or self.n < 2:
            raise ConfigError(f"grid needs at least 2 points, got {self.n}")

    @classmethod
    def from_horizon(cls, t_max: float, dt: float, t0: float = 0.0) -> "TimeGrid":
        """Grid covering ``[t0, t_max]`` with step `dt` (horizon rounded to whole steps)."""
        steps = int(round((t_max - t0) / dt))
        return cls(t0, dt, steps + 1)

    @property
    def points(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n)

    @property
    def t_end(self) -> float:
        return self.t0 + self.dt * (self.n - 1)

    def refine(self, factor: int = 2) -> "TimeGrid":
        """Same interval, step divided by `factor`."""
        return TimeGrid(self.t0, self.dt / factor, (self.n - 1) * factor + 1)


@dataclass
class Trajectory:
    """Real samples of a solution, kernel or error curve on a `TimeGrid`.

    ``flagged`` optionally marks samples that were clamped or otherwise
    special-cased by the producer (see :func:`nlgreens.calibrate.log_error`).
    """

    grid: TimeGrid
    values: np.ndarray
    flagged: np.ndarray | None = field(default=None)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.n,):
            raise GridMismatchError(
                f"{self.values.shape[0] if self.values.ndim else 0} values "
                f"for a grid of {self.grid.n} points")
        if np.isnan(self.values).any():
            raise ValueError("trajectory values must not contain NaN")

    @property
    def t(self) -> np.ndarray:
        return self.grid.points

    def __len__(self):
        return self.grid.n
