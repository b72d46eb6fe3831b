"""Exception hierarchy shared by every shorsim module."""

from __future__ import annotations


class ShorsimError(Exception):
    """Base class for all errors raised by the package."""


class DomainError(ShorsimError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NoInverseError(DomainError):
    """``a`` has no inverse modulo ``m``; ``gcd`` is the shared factor."""

    def __init__(self, a: int, m: int, gcd: int):
        super().__init__(f"{a} has no inverse modulo {m} (gcd = {gcd})")
        self.a = a
        self.m = m
        self.gcd = gcd


class SharedFactorError(DomainError):
    """The base shares a factor with N, so a divisor is already known."""

    def __init__(self, N: int, m: int, divisor: int):
        super().__init__(f"gcd({m}, {N}) = {divisor}: divisor of {N} found classically")
        self.N = N
        self.m = m
        self.divisor = divisor


class CapacityError(ShorsimError):
    """A requested simulation exceeds the configured memory bound."""

    def __init__(self, message: str, required: int, bound: int):
        super().__init__(message)
        self.required = required
        self.bound = bound


class IntegrityError(ShorsimError):
    """A state vector violated an invariant (e.g. it is not normalized)."""
