"""Exceptions raised by the app"""


class CurieWeissError(Exception):
    """Base class for every error raised by this app."""


class NumericalFailure(CurieWeissError, ArithmeticError):
    """An iterative kernel hit its iteration cap before converging."""


class CapacityError(CurieWeissError, MemoryError):
    """A table or enumeration is too large to allocate."""


class DomainError(CurieWeissError, ValueError):
    """Wrong regime, wrong conditioning, or an event with zero mass."""


class RangeError(CurieWeissError, ValueError):
    """An argument lies outside the range a bound is stated for."""
