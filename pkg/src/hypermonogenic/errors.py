"""Exception hierarchy shared by all modules."""


class HypermonogenicError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(HypermonogenicError, ValueError):
    """Operands belong to algebras of different dimension."""


class SingularError(HypermonogenicError, ZeroDivisionError):
    """An element that must be inverted is (numerically) zero."""


class DomainError(HypermonogenicError, ValueError):
    """An argument lies outside the domain of an operation."""


class ShapeError(HypermonogenicError, ValueError):
    """A function oracle returned values of the wrong shape or blade support."""


class PoleError(HypermonogenicError, ValueError):
    """A special function was evaluated at one of its poles."""


class DivergentSpecError(HypermonogenicError, ValueError):
    """A series specification fails its convergence gate."""


class EnumerationError(HypermonogenicError, RuntimeError):
    """A coset enumeration produced no usable representatives."""


class AliasingError(HypermonogenicError, ValueError):
    """A quadrature grid is too coarse for the requested frequency."""
