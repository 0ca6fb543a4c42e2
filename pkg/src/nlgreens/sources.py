"""Source terms ``f(t)`` for the forced oscillator.

Delta sources are distributions: they are never sampled pointwise. Their
impulses are reported separately through :meth:`SourceFunction.impulses`
and the smooth part through :meth:`SourceFunction.smooth`.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


class SourceFamily(enum.Enum):
    DELTA = "delta"
    HEAVISIDE = "heaviside"
    SINE = "sine"
    EXPONENTIAL = "exp"
    CUBIC_POLY = "poly"
    LOG_SHIFT = "log"
    ZERO = "zero"

    @classmethod
    def parse(cls, tag: str) -> "SourceFamily":
        key = tag.strip().lower()
        aliases = {"step": "heaviside", "theta": "heaviside", "sin": "sine",
                   "exponential": "exp", "polynomial": "poly", "cubic": "poly",
                   "ln": "log", "logshift": "log", "log-shift": "log", "none": "zero"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise DomainError(f"unknown source family {tag!r}") from None


@dataclass(frozen=True)
class SourceFunction:
    """One member of the source catalog, scaled by `amplitude`.

    ``location`` is used by delta sources only; ``coeffs`` by the cubic
    polynomial ``c0 + c1 t + c2 t^2 + c3 t^3``.
    """

    family: SourceFamily
    amplitude: float = 1.0
    location: float = 0.0
    coeffs: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)

    @property
    def tag(self) -> str:
        return self.family.value

    @property
    def is_smooth(self) -> bool:
        return self.family is not SourceFamily.DELTA

    def smooth(self, t):
        """Pointwise value of the regular part (zero for a delta)."""
        t = np.asarray(t, dtype=float)
        fam = self.family
        if fam is SourceFamily.DELTA or fam is SourceFamily.ZERO:
            val = np.zeros_like(t)
        elif fam is SourceFamily.HEAVISIDE:
            val = np.where(t >= 0.0, 1.0, 0.0)
        elif fam is SourceFamily.SINE:
            val = np.sin(t)
        elif fam is SourceFamily.EXPONENTIAL:
            val = np.exp(t)
        elif fam is SourceFamily.CUBIC_POLY:
            c0, c1, c2, c3 = self.coeffs
            val = c0 + t * (c1 + t * (c2 + t * c3))
        else:
            if np.any(t <= -1.0):
                raise DomainError("ln(1 + t) needs t > -1")
            val = np.log1p(t)
        val = self.amplitude * val
        return float(val) if val.ndim == 0 else val

    def impulses(self) -> list[tuple[float, float]]:
        """``(location, weight)`` of every Dirac component."""
        if self.family is SourceFamily.DELTA:
            return [(float(self.location), float(self.amplitude))]
        return []

    def __call__(self, t):
        if self.family is SourceFamily.DELTA:
            raise DomainError("a delta source cannot be evaluated pointwise")
        return self.smooth(t)

    def __mul__(self, a: float) -> "CompositeSource":
        return CompositeSource(((float(a), self),))

    __rmul__ = __mul__

    def __add__(self, other) -> "CompositeSource":
        return CompositeSource(((1.0, self),)) + other


@dataclass(frozen=True)
class CompositeSource:
    """Weighted sum of catalog sources."""

    terms: tuple[tuple[float, SourceFunction], ...]

    @property
    def tag(self) -> str:
        return "+".join(s.tag for _, s in self.terms)

    @property
    def is_smooth(self) -> bool:
        return all(s.is_smooth for _, s in self.terms)

    def smooth(self, t):
        t = np.asarray(t, dtype=float)
        total = np.zeros_like(t)
        for w, s in self.terms:
            total = total + w * s.smooth(t)
        return float(total) if total.ndim == 0 else total

    def impulses(self):
        return [(loc, w * a) for w, s in self.terms for loc, a in s.impulses()]

    def __call__(self, t):
        if not self.is_smooth:
            raise DomainError("a delta source cannot be evaluated pointwise")
        return self.smooth(t)

    def __add__(self, other):
        if isinstance(other, SourceFunction):
            other = CompositeSource(((1.0, other),))
        return CompositeSource(self.terms + other.terms)

    def __mul__(self, a: float):
        return CompositeSource(tuple((a * w, s) for w, s in self.terms))

    __rmul__ = __mul__


def delta(amplitude=1.0, location=0.0):
    return SourceFunction(SourceFamily.DELTA, amplitude, location)


def heaviside(amplitude=1.0):
    return SourceFunction(SourceFamily.HEAVISIDE, amplitude)


def sine(amplitude=1.0):
    return SourceFunction(SourceFamily.SINE, amplitude)


def exponential(amplitude=1.0):
    return SourceFunction(SourceFamily.EXPONENTIAL, amplitude)


def cubic_poly(c0=1.0, c1=1.0, c2=1.0, c3=1.0, amplitude=1.0):
    return SourceFunction(SourceFamily.CUBIC_POLY, amplitude, coeffs=(c0, c1, c2, c3))


def log_shift(amplitude=1.0):
    return SourceFunction(SourceFamily.LOG_SHIFT, amplitude)


def zero():
    return SourceFunction(SourceFamily.ZERO)
