"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: ``DomainError`` -> 2,
``ResourceError`` (including ``LadderRangeError``) -> 3.
"""


class ZetaLadderError(Exception):
    """Base class for all package errors."""


class DomainError(ZetaLadderError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested at the pole s = 1 (or at sigma = 1/2 where a pole is implied)."""


class ResourceError(ZetaLadderError):
    """A computation would exceed a configured budget (memory, table range)."""


class LadderRangeError(ResourceError):
    """A ladder query needs heights beyond the tabulated domain.

    ``required`` holds an estimate of the ``domain_hi`` that would suffice.
    """

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class ConvergenceError(ZetaLadderError):
    """An iteration failed to converge; carries the best available estimate."""

    def __init__(self, message, best=None, err_est=None):
        super().__init__(message)
        self.best = best
        self.err_est = err_est


class QuadratureError(ConvergenceError):
    """Adaptive quadrature exhausted its panel budget."""


class AccuracyWarning(UserWarning):
    """Requested accuracy cannot be guaranteed at the given height."""
