"""Exception hierarchy shared by all modules."""


class LacunaryError(Exception):
    """Base class for every error raised by this package."""


class CapacityError(LacunaryError):
    """A polynomial would exceed the configured coefficient-slot cap."""


class SingularDenominatorError(LacunaryError, ZeroDivisionError):
    """A denominator vanishes at the origin."""


class ZeroPolynomialError(LacunaryError, ValueError):
    """An operation needs a nonzero polynomial."""


class ConvergenceError(LacunaryError, ArithmeticError):
    """An iterative routine did not reach the requested precision."""


class ArityError(LacunaryError, ValueError):
    """Number of supplied values does not match the point set."""


class DomainError(LacunaryError, ValueError):
    """Arguments lie outside the domain of the operation."""


class ColumnIndexError(LacunaryError, IndexError):
    """A column index lies outside {1, ..., n + 1}."""


class ShapeError(LacunaryError, ValueError):
    """Matrix dimensions do not match."""


class CaseError(LacunaryError, ValueError):
    """A condition was requested for the wrong multiplicity case."""


class DegenerateError(LacunaryError, ValueError):
    """Empty diagram or identically zero Bautin matrix."""


class PreconditionError(LacunaryError, ValueError):
    """Inputs do not satisfy the hypotheses a bound relies on."""


class UnsupportedError(LacunaryError, ValueError):
    """The requested branch of a bound is not available for these inputs."""


class StructureError(LacunaryError, ValueError):
    """Kernel dimension differs from what the theory predicts."""


class ConfigError(LacunaryError, ValueError):
    """Malformed configuration; message carries the offending location."""
