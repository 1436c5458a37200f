"""Exception types raised across the package."""

from __future__ import annotations


class ComplexityError(Exception):
    """Base class for every error raised by lsys_complexity."""


class InvalidSymbolError(ComplexityError, ValueError):
    """A symbol is outside the alphabet an encoder was given."""


class CorruptStreamError(ComplexityError, ValueError):
    """An LZW index stream references an entry that cannot exist yet."""


class InvalidWindowError(ComplexityError, ValueError):
    """A window length is not a power of two >= 2."""


class DomainError(ComplexityError, ValueError):
    """An argument lies outside the domain of a measure."""
