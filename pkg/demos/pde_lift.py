# # Lifting the kernel to a wave equation
#
# With `chi**2 = exp(-2x) - t**2` the wave equation with exponential
# nonlinearity reduces to the ordinary one, so `G(chi(x, t))` is constant on
# the curves `chi = const`.

# +
import numpy as np

from nlgreens.pdelift import (DEFAULT_WINDOW, EXP_WAVE, SpaceTimeGrid, chi, levelset_consistency,
                              lift_kernel, pde_solve, reduced_ode_coefficient)
# -

print("reduced coefficient:", reduced_ode_coefficient(EXP_WAVE))
print("chi(0, 0) =", chi(0.0, 0.0), " chi(0, 2) =", chi(0.0, 2.0))

for chi0 in (0.25, 0.5, 1.0):
    print(f"spread of G~ on chi = {chi0}: {levelset_consistency(None, EXP_WAVE, chi0):.1e}")

# The lifted kernel over a small window; points where `chi**2 < 0` are masked.

x = np.linspace(-1, 1, 5)
print(np.round(lift_kernel(x[:, None], np.array([0.0, 0.5, 1.0])[None, :]), 4))

# Convolving a localized source over space and time.

# +
grid = SpaceTimeGrid(-1.0, 0.05, 41, 0.0, 0.05, 21)


def source(xi, tau):
    return np.exp(-20 * xi ** 2) * np.sin(tau)


field = pde_solve(source, None, EXP_WAVE, 1.0, grid, margin=0.0)
print("masked fraction:", field.mask.mean().round(3))
print("field at t = 1, x in {-0.5, 0, 0.5}:", field.values[[10, 20, 30], -1])
print("default window:", DEFAULT_WINDOW)
