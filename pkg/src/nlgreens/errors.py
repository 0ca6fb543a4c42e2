"""Exception taxonomy shared by every module.

The CLI maps these onto exit codes: configuration problems exit with 2,
numeric-domain problems with 3, blow-up and convergence failures with 4.
"""


class NLGreensError(Exception):
    """Base class for all package errors."""


class ConfigError(NLGreensError, ValueError):
    """Invalid experiment or grid configuration."""


class DomainError(NLGreensError, ValueError):
    """An argument left the region where a formula is defined."""


class PoleError(DomainError):
    """Evaluation too close to a pole of an elliptic function."""


class GridMismatchError(DomainError):
    """Two trajectories were sampled on different grids."""


class BracketError(DomainError):
    """Optimization bracket is empty or not finite."""


class SingularityError(DomainError):
    """Solution reached a singular point of the nonlinearity (e.g. w = 0 for 1/w)."""


class ConvergenceError(NLGreensError, ArithmeticError):
    """An iteration failed to reach its tolerance."""


class BlowUpError(ConvergenceError):
    """Solution magnitude exceeded the configured bound."""


class StepUnderflowError(ConvergenceError):
    """Adaptive step size fell below the representable minimum."""
