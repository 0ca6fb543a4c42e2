# # Nonlinear Green's functions
#
# Each nonlinearity has a kernel `G` solving `G'' + N(G, G') = 0` after a unit
# kick at `t = 0`. Closed forms use elliptic functions, `tanh`, and `erf^-1`;
# the numeric form integrates the same problem directly.

# +
import numpy as np

from nlgreens.grids import TimeGrid
from nlgreens.kernels import (KernelSpec, Nonlinearity, analytic_residual, eval_kernel,
                              numeric_kernel, catalog_kernel, residual_convergence_ratio)
# -

# Residual of the defining equation, from analytic derivatives, plus the
# central-difference ratio when the step is halved (about 4 for a true solution).

# +
lags = np.linspace(0.01, 2.0, 2000)
for nl in Nonlinearity:
    spec = catalog_kernel(nl)
    print(f"{nl.value:12s} residual {analytic_residual(spec, lags):.1e}  "
          f"halving ratio {residual_convergence_ratio(spec, lags[::10], 1e-3):.2f}")
# -

# A few values. The cubic kernel oscillates with amplitude 2**(1/4), the
# sine-Gordon one swings back and forth below pi.

t = np.array([0.25, 0.5, 1.0, 2.0])
for nl in (Nonlinearity.CUBIC, Nonlinearity.SINE_GORDON, Nonlinearity.EXPONENTIAL):
    print(nl.value, np.round(eval_kernel(catalog_kernel(nl), t), 6))

# The exponential kernel for an arbitrary initial slope, closed form against
# direct integration.

# +
grid = TimeGrid.from_horizon(2.0, 1e-2)
for s1 in (0.5, 1.0, 3.0):
    closed = eval_kernel(KernelSpec.homogeneous(Nonlinearity.EXPONENTIAL, s1), grid.points)
    numeric = numeric_kernel(Nonlinearity.EXPONENTIAL, s1, grid).values
    print(f"s1={s1}: max gap {np.max(np.abs(closed - numeric)):.1e}")
