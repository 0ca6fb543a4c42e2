import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from nlgreens.errors import DomainError, SingularityError
from nlgreens.grids import TimeGrid
from nlgreens.kernels import (KernelForm, KernelSpec, Nonlinearity, analytic_residual,
                              boundary_values, eval_kernel, exponential_c2,
                              exponential_constants, kernel_derivatives, kernel_residual,
                              numeric_kernel, catalog_kernel, quadratic_scale,
                              residual_convergence_ratio, satisfies_homogeneous)

NL = list(Nonlinearity)
EXP = Nonlinearity.EXPONENTIAL


def zero_slope_exp(t):
    return np.log(1 - np.tanh(t / math.sqrt(2)) ** 2)


def test_parse_aliases():
    assert Nonlinearity.parse("Sine_Gordon") is Nonlinearity.SINE_GORDON
    assert Nonlinearity.parse("exp") is EXP
    with pytest.raises(DomainError):
        Nonlinearity.parse("quartic")


def test_nonlinearity_values():
    w, v = 0.7, -1.3
    expected = {Nonlinearity.CUBIC: w ** 3, Nonlinearity.SINE_GORDON: math.sin(w),
                Nonlinearity.QUADRATIC: w ** 2, Nonlinearity.RECIPROCAL: 1 / w,
                EXP: math.exp(w), Nonlinearity.ADVECTIVE: w * v}
    for nl, val in expected.items():
        assert nl(w, v) == val


@pytest.mark.parametrize("nl", [n for n in NL if n is not Nonlinearity.ADVECTIVE])
def test_potential_derivative_is_nonlinearity(nl):
    w = np.linspace(0.2, 1.5, 14)
    h = 1e-6
    dv = (nl.potential(w + h) - nl.potential(w - h)) / (2 * h)
    np.testing.assert_allclose(dv, nl(w), rtol=1e-7)


def test_exponential_examples():
    spec = catalog_kernel(EXP)
    assert (spec.c1, spec.c2) == (2.0, 0.0)
    assert eval_kernel(spec, 0.0) == 0.0
    assert eval_kernel(spec, -1.0) == 0.0
    g1 = eval_kernel(spec, 1.0)
    assert abs(g1 - zero_slope_exp(1.0)) < 1e-15
    h = 1e-4
    gm, gp = eval_kernel(spec, 1 - h), eval_kernel(spec, 1 + h)
    assert abs((gp - 2 * g1 + gm) / h ** 2 + math.exp(g1)) < 1e-6


@pytest.mark.parametrize("nl", NL)
def test_support_is_causal(nl):
    spec = catalog_kernel(nl)
    lags = np.array([-3.0, -1.0, -1e-12, 0.0])
    assert np.all(eval_kernel(spec, lags) == 0.0)


@given(st.sampled_from(NL), st.floats(-1e6, 0.0))
def test_support_property(nl, lag):
    assert eval_kernel(catalog_kernel(nl), lag) == 0.0


@pytest.mark.parametrize("nl", NL)
def test_analytic_residual(nl):
    lags = np.linspace(0.01, 2.0, 2000)
    assert analytic_residual(catalog_kernel(nl), lags) < 1e-10


@pytest.mark.parametrize("nl", [EXP, Nonlinearity.CUBIC])
def test_fd_residual_examples(nl):
    grid = TimeGrid(0.01, 1e-3, 2000)
    assert kernel_residual(catalog_kernel(nl), grid) < 1e-4


def test_fd_residual_needs_open_support():
    with pytest.raises(DomainError):
        kernel_residual(catalog_kernel(EXP), TimeGrid(0.0, 1e-3, 100))


@pytest.mark.parametrize("nl", NL)
def test_residual_second_order(nl):
    points = np.linspace(0.01, 2.0, 200)
    ratio = residual_convergence_ratio(catalog_kernel(nl), points, 1e-3)
    assert 3.4 <= ratio <= 4.6


@pytest.mark.parametrize("nl", [n for n in NL if n is not Nonlinearity.RECIPROCAL])
def test_fd_residual_grid_halving(nl):
    spec = catalog_kernel(nl)
    coarse = kernel_residual(spec, TimeGrid(0.01, 1e-2, 200))
    fine = kernel_residual(spec, TimeGrid(0.01, 5e-3, 399))
    assert 3.4 <= coarse / fine <= 4.6


@pytest.mark.parametrize("nl", NL)
def test_homogeneous_rest_data(nl):
    spec = catalog_kernel(nl)
    assert satisfies_homogeneous(spec)


@pytest.mark.parametrize("nl,s1", [(EXP, 0.0), (EXP, 0.93107), (EXP, -0.5),
                                   (Nonlinearity.CUBIC, 1.0),
                                   (Nonlinearity.SINE_GORDON, math.sqrt(2)),
                                   (Nonlinearity.QUADRATIC, 1.0),
                                   (Nonlinearity.QUADRATIC, -0.7),
                                   (Nonlinearity.ADVECTIVE, 0.5)])
def test_initial_slope_matches_s1(nl, s1):
    spec = KernelSpec.homogeneous(nl, s1)
    g, dg, _ = kernel_derivatives(spec, np.array([1e-12]))
    assert abs(g[0]) < 1e-10
    assert abs(dg[0] - s1) < 1e-8


def test_corrupted_exponential_detected():
    bad = KernelSpec(EXP, 0.0, c1=3.0, c2=0.0)
    assert kernel_residual(bad, TimeGrid(0.01, 1e-3, 2000)) < 1e-4
    assert not satisfies_homogeneous(bad)
    assert abs(boundary_values(bad)[0] - math.log(1.5)) < 1e-9


def test_exponential_zero_slope_boundary():
    spec = catalog_kernel(EXP)
    slopes = [abs(boundary_values(spec, h)[1]) for h in (1e-2, 1e-3, 1e-4)]
    assert boundary_values(spec)[0] == pytest.approx(0.0, abs=1e-15)
    assert slopes[0] > slopes[1] > slopes[2]
    assert slopes[2] < 1e-3


@pytest.mark.parametrize("c1", [2.0, 2.5, 3.0, 10.0])
def test_exponential_c2_against_root_finder(c1):
    def gap(c2):
        return 0.5 * c1 / math.cosh(0.5 * math.sqrt(c1) * c2) ** 2 - 1
    if c1 == 2.0:
        oracle = 0.0
    else:
        oracle = -brentq(gap, 0.0, 50.0, xtol=1e-15)
    assert abs(exponential_c2(c1) - oracle) < 1e-12
    assert abs(exponential_c2(c1, -1.0) + oracle) < 1e-12


def test_exponential_c2_domain():
    with pytest.raises(DomainError):
        exponential_c2(1.5)


@given(st.floats(-5, 5).filter(lambda s: s == 0 or abs(s) > 1e-3))
def test_exponential_constants_consistent(s1):
    c1, c2 = exponential_constants(s1)
    assert abs(c2 - exponential_c2(c1, s1 if s1 else 1.0)) < 1e-12


def test_quadratic_branch():
    c = quadratic_scale()
    assert abs(c - 6 ** (-1 / 3)) < 1e-15
    assert abs(1 / c ** 2 - 6 * c) < 1e-12


def test_advective_closed_form():
    spec = KernelSpec(Nonlinearity.ADVECTIVE, 0.5, c1=1.0, c2=0.0)
    t = np.linspace(0.1, 2, 20)
    np.testing.assert_allclose(eval_kernel(spec, t), np.tanh(t / 2), rtol=0, atol=1e-15)
    with pytest.raises(DomainError):
        KernelSpec.homogeneous(Nonlinearity.ADVECTIVE, -1.0)


def test_reciprocal_window():
    spec = catalog_kernel(Nonlinearity.RECIPROCAL)
    assert eval_kernel(spec, 2.0) > 0
    with pytest.raises(DomainError):
        eval_kernel(spec, math.sqrt(2 * math.pi) + 0.1)


def test_spec_rejects_nonfinite():
    with pytest.raises(DomainError):
        KernelSpec(EXP, math.nan)


# -- numeric kernels --------------------------------------------------------

GRID = TimeGrid.from_horizon(2.0, 1e-2)


@pytest.mark.parametrize("nl,s1", [(Nonlinearity.CUBIC, 1.0),
                                   (Nonlinearity.SINE_GORDON, math.sqrt(2)),
                                   (Nonlinearity.QUADRATIC, 1.0),
                                   (EXP, 0.0), (EXP, 0.93107),
                                   (Nonlinearity.ADVECTIVE, 2.0)])
def test_numeric_matches_closed_form(nl, s1):
    tol = 1e-10
    num = numeric_kernel(nl, s1, GRID, tol=tol)
    closed = eval_kernel(KernelSpec.homogeneous(nl, s1), GRID.points)
    assert np.max(np.abs(num.values - closed)) <= 10 * tol


def test_numeric_reciprocal_matches_closed_form():
    # the steep start near t = 0 amplifies the integrator error, so the bound is looser
    num = numeric_kernel(Nonlinearity.RECIPROCAL, 1.0, GRID, regularization=1e-6, tol=1e-10)
    closed = eval_kernel(catalog_kernel(Nonlinearity.RECIPROCAL), GRID.points)
    assert np.max(np.abs(num.values - closed)) < 1e-7


def test_numeric_matches_scipy_oracle():
    sol = solve_ivp(lambda _, y: [y[1], -math.exp(y[0])], (0, 2), [0.0, 0.5],
                    method="DOP853", rtol=1e-12, atol=1e-13, t_eval=GRID.points)
    num = numeric_kernel(EXP, 0.5, GRID)
    assert np.max(np.abs(num.values - sol.y[0])) < 1e-9


@pytest.mark.parametrize("nl", [n for n in NL if n.rest_is_equilibrium])
def test_numeric_rest_state(nl):
    assert np.all(numeric_kernel(nl, 0.0, GRID).values == 0.0)


def test_numeric_reciprocal_needs_regularization():
    with pytest.raises(SingularityError):
        numeric_kernel(Nonlinearity.RECIPROCAL, 1.0, GRID)


def test_numeric_grid_must_start_at_zero():
    with pytest.raises(DomainError):
        numeric_kernel(EXP, 0.0, TimeGrid(0.1, 1e-2, 10))


def test_numeric_form_through_eval_kernel():
    spec = KernelSpec(Nonlinearity.CUBIC, 1.0, form=KernelForm.NUMERIC)
    lags = np.array([1.5, -1.0, 0.5, 0.0])
    vals = eval_kernel(spec, lags)
    assert vals[1] == vals[3] == 0.0
    closed = eval_kernel(catalog_kernel(Nonlinearity.CUBIC), lags)
    np.testing.assert_allclose(vals, closed, atol=1e-9)


def test_with_s1_reparametrizes():
    spec = catalog_kernel(EXP).with_s1(1.0)
    assert (spec.c1, spec.c2) == exponential_constants(1.0)
