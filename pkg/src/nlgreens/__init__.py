"""Nonlinear Green's functions for oscillating second-order equations.

Approximate ``w'' + N(w, w') = f(t)`` by ``s2 * (G * f)(t)`` where ``G`` solves
the same nonlinear equation driven by an impulse, calibrate ``s2`` against a
reference integrator, and lift the kernels to the exponential wave equation.
"""
from .errors import (BlowUpError, BracketError, ConfigError, ConvergenceError, DomainError,
                     GridMismatchError, NLGreensError, PoleError, SingularityError,
                     StepUnderflowError)
from .grids import TimeGrid, Trajectory
from .kernels import (KernelForm, KernelSpec, Nonlinearity, catalog_kernel, eval_kernel,
                      kernel_residual, numeric_kernel)
from .sources import SourceFamily, SourceFunction
from .frasca import ScalePair, convolution_order_check, frasca_solve
from .oracle import IvpProblem, convergence_check, reference_solve
from .calibrate import (ErrorReport, error_extrema, log_error, optimize_s2, reproduce_table1,
                        sweep_s1_s2)
from .pdelift import (Field2D, PdeConfig, SpaceTimeGrid, chi, levelset_consistency,
                      lift_kernel, pde_solve, reduced_ode_coefficient)

__version__ = "0.1.0"
