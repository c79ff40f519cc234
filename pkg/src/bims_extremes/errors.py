"""Exception types raised by the library."""


class BimsError(ValueError):
    """Base class for all library errors."""


class InvalidChannel(BimsError):
    """Channel parameters violate the construction invariants."""


class SpecError(BimsError):
    """A channel spec is malformed or names an unknown kind."""


class NotSymmetric(InvalidChannel):
    """No output pairing certifies Gallager symmetry."""


class RhoOutOfRange(BimsError):
    pass


class DomainError(BimsError):
    pass


class RhoZero(BimsError):
    """F(0) is identically 1, so the capacity inverse is undefined."""


class FOutOfRange(BimsError):
    pass


class Infeasible(BimsError):
    """The requested (C, F) pair lies outside the BEC/BSC band."""
