import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from nlgreens import sources as S
from nlgreens.errors import DomainError
from nlgreens.frasca import ScalePair, convolution_order_check, convolve, frasca_solve
from nlgreens.grids import TimeGrid
from nlgreens.kernels import Nonlinearity, eval_kernel, catalog_kernel

EXP_KERNEL = catalog_kernel(Nonlinearity.EXPONENTIAL)
GRID = TimeGrid.from_horizon(1.0, 1e-2)


def zero_slope_exp(t):
    return np.log(1 - np.tanh(t / math.sqrt(2)) ** 2)


class Spliced:
    """Sine up to `cut`, then `tail(t)`; duck-types a smooth source."""

    tag = "spliced"
    is_smooth = True

    def __init__(self, cut, tail):
        self.cut, self.tail = cut, tail

    def smooth(self, t):
        t = np.asarray(t, dtype=float)
        return np.where(t <= self.cut, np.sin(t), self.tail(t))

    def impulses(self):
        return []


# -- sources ----------------------------------------------------------------

def test_source_values():
    t = np.array([0.0, 0.5, 2.0])
    np.testing.assert_array_equal(S.heaviside()(t), [1, 1, 1])
    assert S.heaviside()(-0.1) == 0.0
    np.testing.assert_array_equal(S.sine()(t), np.sin(t))
    np.testing.assert_array_equal(S.exponential()(t), np.exp(t))
    np.testing.assert_allclose(S.cubic_poly()(t), 1 + t + t ** 2 + t ** 3, rtol=1e-15)
    np.testing.assert_array_equal(S.log_shift()(t), np.log1p(t))
    assert S.cubic_poly(0, 0, 0, 2)(3.0) == 54.0


def test_source_guards():
    with pytest.raises(DomainError):
        S.delta()(0.0)
    with pytest.raises(DomainError):
        S.log_shift()(-1.0)
    with pytest.raises(DomainError):
        S.SourceFamily.parse("gaussian")
    assert S.SourceFamily.parse("theta") is S.SourceFamily.HEAVISIDE


def test_composite_source():
    f = 2 * S.sine() + S.delta(0.5, 0.3)
    assert not f.is_smooth
    assert f.impulses() == [(0.3, 0.5)]
    assert f.smooth(1.0) == 2 * math.sin(1.0)
    with pytest.raises(DomainError):
        f(1.0)


# -- convolution ------------------------------------------------------------

def test_delta_at_origin_is_half_sifted():
    # an impulse on the lower limit of int_0^t carries half its mass
    grid = TimeGrid.from_horizon(1.0, 1e-3)
    w = frasca_solve(EXP_KERNEL, S.delta(), 2.0, grid)
    expected = 2.0 * (0.5 * eval_kernel(EXP_KERNEL, grid.points))
    np.testing.assert_array_equal(w.values, expected)
    np.testing.assert_allclose(w.values, zero_slope_exp(grid.points), rtol=0, atol=1e-15)
    assert w.values[0] == 0.0


def test_interior_delta_is_fully_sifted():
    f = S.delta(1.5, 0.3)
    w = frasca_solve(EXP_KERNEL, f, 2.0, GRID)
    t = GRID.points
    np.testing.assert_array_equal(w.values, 2.0 * 1.5 * eval_kernel(EXP_KERNEL, t - 0.3))
    assert np.all(w.values[t <= 0.3] == 0.0)


def test_delta_before_window_ignored():
    w = frasca_solve(EXP_KERNEL, S.delta(1.0, -0.5), 1.0, GRID)
    assert np.all(w.values == 0.0)


@pytest.mark.parametrize("f", [S.sine(), S.delta(), S.heaviside(), S.log_shift()])
def test_zero_scale(f):
    assert np.all(frasca_solve(EXP_KERNEL, f, 0.0, GRID).values == 0.0)


def test_heaviside_against_independent_quadrature():
    # adaptive quadrature of int_0^t G(t - tau) dtau
    t_check = [0.25, 0.5, 1.0]
    ref = [quad(lambda s: zero_slope_exp(t - s), 0, t, epsabs=1e-14)[0] for t in t_check]
    idx = [int(round(t / GRID.dt)) for t in t_check]
    simp = convolve(EXP_KERNEL, S.heaviside(), GRID, "simpson", panels=2)
    np.testing.assert_allclose(simp[idx], ref, atol=1e-10)
    trap = frasca_solve(EXP_KERNEL, S.heaviside(), 1.0, GRID).values
    assert np.max(np.abs(trap[idx] - ref)) < 1e-4


def test_trapezoid_gap_to_simpson_is_second_order():
    gaps = []
    for dt in (1e-2, 5e-3):
        grid = TimeGrid.from_horizon(1.0, dt)
        trap = frasca_solve(EXP_KERNEL, S.heaviside(), 1.0, grid).values
        simp = convolve(EXP_KERNEL, S.heaviside(), grid, "simpson", panels=2)
        gaps.append(np.max(np.abs(trap - simp)))
    assert 3.6 < gaps[0] / gaps[1] < 4.4


@pytest.mark.parametrize("f", [S.sine(), S.cubic_poly(1, 1, 1, 1), S.exponential(),
                               S.log_shift()])
def test_convolution_order(f):
    order = convolution_order_check(EXP_KERNEL, f, GRID)
    assert 1.8 <= order <= 2.2


def test_order_check_rejects_delta():
    with pytest.raises(DomainError):
        convolution_order_check(EXP_KERNEL, S.delta(), GRID)


def test_convolution_grid_must_start_at_zero():
    with pytest.raises(DomainError):
        convolve(EXP_KERNEL, S.sine(), TimeGrid(0.5, 1e-2, 10))
    with pytest.raises(DomainError):
        convolve(EXP_KERNEL, S.sine(), GRID, "midpoint")


@settings(max_examples=30, deadline=None)
@given(st.floats(-10, 10), st.floats(-10, 10))
def test_linearity_in_source(a, b):
    f, g = S.sine(), S.cubic_poly()
    lhs = frasca_solve(EXP_KERNEL, a * f + b * g, 1.3, GRID).values
    rhs = (a * frasca_solve(EXP_KERNEL, f, 1.3, GRID).values
           + b * frasca_solve(EXP_KERNEL, g, 1.3, GRID).values)
    scale = max(1.0, np.max(np.abs(rhs)))
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * scale


@given(st.floats(-1e3, 1e3).filter(lambda s: s == 0 or abs(s) > 1e-100))
def test_scale_linearity(s2):
    one = frasca_solve(EXP_KERNEL, S.sine(), s2, GRID).values
    two = frasca_solve(EXP_KERNEL, S.sine(), 2 * s2, GRID).values
    assert np.array_equal(two, 2 * one)


@pytest.mark.parametrize("cut_index", [1, 37, 80, 98])
def test_causality_bitwise_prefix(cut_index):
    cut = GRID.points[cut_index]
    base = convolve(EXP_KERNEL, Spliced(cut, np.sin), GRID)
    perturbed = convolve(EXP_KERNEL, Spliced(cut, lambda t: 1e6 * np.cos(7 * t)), GRID)
    assert np.array_equal(base[:cut_index + 1], perturbed[:cut_index + 1])
    assert not np.array_equal(base, perturbed)


def test_prefix_grid_gives_identical_values():
    short = TimeGrid(0.0, GRID.dt, 40)
    a = convolve(EXP_KERNEL, S.sine(), GRID)
    b = convolve(EXP_KERNEL, S.sine(), short)
    assert np.array_equal(a[:40], b)


def test_scale_pair_fields():
    p = ScalePair(1.0, 2.0)
    assert (p.s1, p.s2) == (1.0, 2.0)
