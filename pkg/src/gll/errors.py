"""Exception hierarchy shared by every module.

Domain and validation failures derive from :class:`ValueError`; numerical
non-convergence derives from :class:`RuntimeError`.  The CLI maps the first
family to exit code 1 and the second to exit code 2.
"""


class GllError(Exception):
    """Base class for all package errors."""


class DomainError(GllError, ValueError):
    """An argument lies outside the mathematical domain of a function."""


class InvalidParamsError(DomainError):
    """A parameter triple violates the distribution invariants."""


class BoundaryError(DomainError):
    """A re-parameterization maps onto an unattainable boundary."""


class UnsupportedParamsError(DomainError):
    """A closed form is not available for the requested parameters."""


class InfeasibleError(DomainError):
    """A regression model is infeasible for some observation."""


class ConvergenceError(GllError, RuntimeError):
    """An iterative or adaptive numerical routine failed to converge."""
