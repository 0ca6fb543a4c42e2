import math
import warnings

import numpy as np
import pytest

from nlgreens.errors import ConfigError, DomainError
from nlgreens.kernels import KernelSpec, Nonlinearity, eval_kernel, catalog_kernel
from nlgreens.pdelift import (DEFAULT_WINDOW, EXP_WAVE, Field2D, PdeConfig, SpaceTimeGrid, chi,
                              chi_squared, levelset_consistency, levelset_points, lift_kernel,
                              pde_solve, reduced_ode_coefficient)

SMALL = SpaceTimeGrid(-0.5, 0.1, 11, 0.0, 0.1, 21)


def g_of_one():
    return math.log(1 - math.tanh(1 / math.sqrt(2)) ** 2)


def test_chi_examples():
    assert chi(0.0, 0.0) == 1.0
    assert math.isnan(chi(0.0, 2.0))
    cfg = PdeConfig(alpha=1.0, lam=1.0, a1=2.0, a2=0.5)
    # a1 * (exp(0) / (alpha lam^2) - (0 + 0.5)^2 / 4)
    assert chi(0.0, 0.0, cfg) == pytest.approx(math.sqrt(2 * (1 - 0.0625)), rel=1e-15)


def test_chi_specialization_identity():
    rng = np.random.default_rng(1)
    x = rng.uniform(-2, 2, 20000)
    t = rng.uniform(0, 3, 20000)
    ok = np.exp(-2 * x) - t ** 2 >= 0
    direct = np.sqrt(np.exp(-2 * x[ok]) - t[ok] ** 2)
    assert np.max(np.abs(chi(x[ok], t[ok]) - direct)) <= 4 * np.finfo(float).eps * direct.max()


def test_reduced_ode_coefficient():
    assert reduced_ode_coefficient(EXP_WAVE) == 1.0
    assert reduced_ode_coefficient(PdeConfig(a1=2.0)) == 2.0
    assert reduced_ode_coefficient(PdeConfig(a1=-8.0)) == -0.5
    with pytest.raises(ConfigError):
        PdeConfig(a1=0.0)


def test_config_and_grid_validation():
    with pytest.raises(ConfigError):
        PdeConfig(alpha=math.inf)
    with pytest.raises(ConfigError):
        SpaceTimeGrid(0, 0.1, 1, 0, 0.1, 5)
    with pytest.raises(ConfigError):
        SpaceTimeGrid(0, -0.1, 5, 0, 0.1, 5)
    with pytest.raises(DomainError):
        Field2D(SMALL, np.zeros((3, 3)), np.zeros((3, 3), bool))


def test_lift_kernel_examples():
    assert lift_kernel(0.0, 0.0) == pytest.approx(g_of_one(), rel=1e-14)
    assert lift_kernel(0.0, 2.0) == 0.0
    assert abs(lift_kernel(30.0, 0.0)) < 1e-20


def test_lift_kernel_is_composition():
    x = np.linspace(-1, 1, 9)
    t = np.full_like(x, 0.2)
    c = chi(x, t)
    np.testing.assert_array_equal(lift_kernel(x, t), eval_kernel(catalog_kernel(
        Nonlinearity.EXPONENTIAL), c))


def test_non_exponential_lift_warns():
    with pytest.warns(UserWarning):
        lift_kernel(0.0, 0.0, catalog_kernel(Nonlinearity.CUBIC))


@pytest.mark.parametrize("chi0", np.linspace(0.1, 1.0, 10))
def test_level_sets(chi0):
    assert levelset_consistency(None, EXP_WAVE, chi0) < 1e-10


def test_level_set_examples():
    xs, ts = levelset_points(1.0, EXP_WAVE, 10, DEFAULT_WINDOW)
    assert np.all(np.abs(np.exp(-2 * xs) - ts ** 2 - 1) < 1e-12)
    assert levelset_consistency(None, EXP_WAVE, 1.0) < 1e-12
    assert levelset_consistency(None, EXP_WAVE, 0.5, samples=10) < 1e-10
    small = SpaceTimeGrid(0.0, 0.01, 101, 0.0, 0.01, 51)
    with pytest.raises(DomainError):
        levelset_consistency(None, EXP_WAVE, 3.0, grid=small)


def test_level_sets_general_config():
    cfg = PdeConfig(alpha=1.0, lam=1.0, a1=2.0, a2=0.5)
    xs, ts = levelset_points(0.7, cfg, 8, DEFAULT_WINDOW)
    np.testing.assert_allclose(chi(xs, ts, cfg), 0.7, rtol=1e-12)
    assert levelset_consistency(None, cfg, 0.7, samples=8) < 1e-10


def test_zero_source_gives_zero_field():
    field = pde_solve(np.zeros((SMALL.nx, SMALL.nt)), None, EXP_WAVE, 1.0, SMALL)
    assert np.all(field.values == 0.0)


def test_spike_gives_translated_kernel():
    j, l = 5, 3
    f = np.zeros((SMALL.nx, SMALL.nt))
    f[j, l] = 1.0
    s2 = 1.7
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        field = pde_solve(f, None, EXP_WAVE, s2, SMALL)
    x, t = SMALL.x, SMALL.t
    expected = np.zeros_like(field.values)
    for k in range(l, SMALL.nt):
        wt = SMALL.dt if k > l else 0.5 * SMALL.dt
        expected[:, k] = s2 * wt * SMALL.dx * lift_kernel(x - x[j], np.full(SMALL.nx, t[k] - t[l]))
    expected[field.mask] = 0.0
    np.testing.assert_allclose(field.values, expected, rtol=1e-13, atol=1e-16)


def test_mask_layout():
    f = np.ones((SMALL.nx, SMALL.nt))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        field = pde_solve(f, None, EXP_WAVE, 1.0, SMALL)
    expected_mask = chi_squared(SMALL.x[:, None], SMALL.t[None, :]) < 0
    assert np.array_equal(field.mask, expected_mask)
    assert np.all(field.values[field.mask] == 0.0)
    assert np.all(np.isfinite(field.values))


def unreachable_sources(grid):
    """Source nodes whose every contribution meets a zero kernel or a masked output."""
    x, out_mask = grid.x, chi_squared(grid.x[:, None], grid.t[None, :]) < 0
    nodes = []
    for j in range(grid.nx):
        for l in range(grid.nt):
            reach = False
            for k in range(l, grid.nt):
                g = lift_kernel(x - x[j], np.full(grid.nx, (k - l) * grid.dt))
                if np.any((g != 0) & ~out_mask[:, k]):
                    reach = True
                    break
            if not reach:
                nodes.append((j, l))
    return nodes


def test_mask_correctness():
    nodes = unreachable_sources(SMALL)
    assert nodes
    rng = np.random.default_rng(2)
    f = rng.normal(size=(SMALL.nx, SMALL.nt))
    g = f.copy()
    for j, l in nodes:
        g[j, l] += 1e3
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        a = pde_solve(f, None, EXP_WAVE, 1.0, SMALL)
        b = pde_solve(g, None, EXP_WAVE, 1.0, SMALL)
    assert np.array_equal(a.values, b.values)


def test_callable_source_without_margin_matches_array():
    def src(xi, tau):
        return np.exp(-40 * xi ** 2) * np.sin(tau)

    arr = src(SMALL.x[:, None], SMALL.t[None, :])
    a = pde_solve(arr, None, EXP_WAVE, 1.0, SMALL)
    b = pde_solve(src, None, EXP_WAVE, 1.0, SMALL, margin=0.0)
    assert np.array_equal(a.values, b.values)


def test_margin_widens_the_window():
    def src(xi, tau):
        return np.exp(-4 * xi ** 2) * np.ones_like(tau)

    with pytest.warns(UserWarning, match="window edge"):
        narrow = pde_solve(src, None, EXP_WAVE, 1.0, SMALL, margin=0.0)
    with pytest.warns(UserWarning, match="window edge"):
        wide = pde_solve(src, None, EXP_WAVE, 1.0, SMALL)
    assert not np.array_equal(narrow.values, wide.values)


def test_pde_solve_guards():
    shifted = SpaceTimeGrid(-0.5, 0.1, 11, 0.5, 0.1, 5)
    with pytest.raises(DomainError):
        pde_solve(np.zeros((11, 5)), None, EXP_WAVE, 1.0, shifted)
    with pytest.raises(DomainError):
        pde_solve(np.zeros((3, 3)), None, EXP_WAVE, 1.0, SMALL)
    bad = np.zeros((SMALL.nx, SMALL.nt))
    bad[0, 0] = np.nan
    with pytest.raises(DomainError):
        pde_solve(bad, None, EXP_WAVE, 1.0, SMALL)


def test_explicit_exponential_spec_is_default():
    f = np.zeros((SMALL.nx, SMALL.nt))
    f[5, 2] = 1.0
    spec = KernelSpec(Nonlinearity.EXPONENTIAL, 0.0, c1=2.0, c2=0.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        a = pde_solve(f, None, EXP_WAVE, 1.0, SMALL)
        b = pde_solve(f, spec, EXP_WAVE, 1.0, SMALL)
    assert np.array_equal(a.values, b.values)
