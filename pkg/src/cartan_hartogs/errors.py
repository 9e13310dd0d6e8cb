"""Exception types raised by the library."""


class CartanHartogsError(ValueError):
    """Base class for all library errors."""


class DomainError(CartanHartogsError):
    """A point or matrix lies outside the set where a formula is defined."""


class StructureError(CartanHartogsError):
    """A matrix does not have the shape or symmetry its base domain requires."""


class ParameterError(CartanHartogsError):
    """Domain parameters fall outside the validity range of a formula."""


class PreconditionError(CartanHartogsError):
    """An operation's documented precondition does not hold."""


class RangeError(CartanHartogsError, OverflowError):
    """A series evaluation overflowed double precision."""
