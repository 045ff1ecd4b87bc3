"""Exception types shared by the engines."""


class UnityFiltersError(Exception):
    """Base class for all library errors."""


class InvalidInput(UnityFiltersError, ValueError):
    """An argument violates an operation's precondition."""


class ArithmeticOverflow(UnityFiltersError, OverflowError):
    """A value left the supported (64-bit) range."""


class ModulusMismatch(InvalidInput):
    pass


class EmptyReduction(InvalidInput):
    """The reduced system at the requested element/prime would be empty."""


class CapExceeded(UnityFiltersError):
    """An enumeration was requested beyond its documented size cap."""


class NotBinaryPartner(UnityFiltersError):
    """A Fourier partner entry is not exactly 0 or 1."""
