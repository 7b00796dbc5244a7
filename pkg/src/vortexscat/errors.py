"""Exception hierarchy shared by the numerical modules and the CLI."""


class VortexScatError(Exception):
    """Base class for all package errors."""


class DomainError(VortexScatError, ValueError):
    """An argument lies outside the domain of a function."""


class BesselOverflowError(VortexScatError, OverflowError):
    """Y_alpha(u) (or its derivative) is not representable in double precision."""


class PoleError(VortexScatError, ArithmeticError):
    """A matching or boundary denominator vanishes."""


class TruncationError(VortexScatError, RuntimeError):
    """A partial-wave sum could not be certified within the channel budget."""


class ValidityGateError(VortexScatError, ValueError):
    """An asymptotic formula was requested outside its regime of validity."""


class GridTooCoarseError(VortexScatError, ValueError):
    """The angular grid cannot support the requested quadrature accuracy."""


class QuadratureError(VortexScatError, RuntimeError):
    """An adaptive quadrature failed to reach its tolerance."""
