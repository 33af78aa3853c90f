"""Exception types raised across the package."""


class FracLapError(Exception):
    """Base class for all package errors."""


class PoleError(FracLapError, ValueError):
    """Gamma function evaluated at (or too close to) a non-positive integer."""


class DomainError(FracLapError, ValueError):
    """Argument outside the domain where a function is defined."""


class ConvergenceError(FracLapError, ArithmeticError):
    """A series or quadrature could not reach its tolerance within budget."""


class DimensionMismatch(FracLapError, ValueError):
    """Array lengths do not agree with the chain size."""


class AlignmentError(FracLapError, ValueError):
    """A continuum coordinate does not fall on a lattice site."""
