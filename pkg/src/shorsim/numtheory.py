"""Exact integer arithmetic: Euclid, modular powers, totients, CRT and continued fractions.

Everything here works on Python ints, so products such as ``N**2 * q`` never
overflow. The functions are pure and thread-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DomainError, NoInverseError

__all__ = [
    "EuclidTrace",
    "ExtendedGcd",
    "ContinuedFractionExpansion",
    "euclid",
    "gcd",
    "extended_gcd",
    "mod_inverse",
    "mod_pow",
    "mod_pow_counted",
    "euler_phi_bruteforce",
    "euler_phi_from_factorization",
    "totient_sieve",
    "factorize",
    "crt_solve",
    "continued_fraction",
    "recover_fraction",
    "order_bruteforce",
    "integer_root",
    "perfect_power",
]


@dataclass(frozen=True)
class EuclidTrace:
    """Division-by-division record of Euclid's algorithm on ``(a, b)``.

    ``quotients[i]`` and ``remainders[i]`` come from the i-th division
    ``x = quotient * y + remainder``; ``divisions`` is the count used for the
    Lamé bound.
    """

    a: int
    b: int
    gcd: int
    quotients: tuple[int, ...]
    remainders: tuple[int, ...]

    @property
    def divisions(self) -> int:
        return len(self.quotients)


@dataclass(frozen=True)
class ExtendedGcd:
    """``d = u*a + v*b`` with ``d = gcd(a, b)``."""

    d: int
    u: int
    v: int


@dataclass(frozen=True)
class ContinuedFractionExpansion:
    """Quotients ``[q1; q2, ..., qt]`` of ``numer/denom`` and their convergents.

    Convergents are reduced ``(p, q)`` pairs. Their denominators never
    decrease and grow strictly from the second one on.
    """

    numer: int
    denom: int
    quotients: tuple[int, ...]
    convergents: tuple[tuple[int, int], ...] = field(repr=False)

    def evaluate(self) -> tuple[int, int]:
        """Rebuild the nested fraction from the quotients, as a reduced pair."""
        p, q = self.quotients[-1], 1
        for a in reversed(self.quotients[:-1]):
            p, q = a * p + q, p
        g = math.gcd(p, q)
        return p // g, q // g


def _check_int(name: str, value: int) -> None:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")


def euclid(a: int, b: int) -> EuclidTrace:
    """Run Euclid's algorithm on nonnegative ``a, b`` (not both zero)."""
    _check_int("a", a)
    _check_int("b", b)
    a, b = int(a), int(b)
    if a < 0 or b < 0:
        raise DomainError(f"euclid expects nonnegative inputs, got ({a}, {b})")
    if a == 0 and b == 0:
        raise DomainError("gcd(0, 0) is undefined")
    quotients: list[int] = []
    remainders: list[int] = []
    x, y = a, b
    while y:
        quot, rem = divmod(x, y)
        quotients.append(quot)
        remainders.append(rem)
        x, y = y, rem
    return EuclidTrace(a, b, x, tuple(quotients), tuple(remainders))


def gcd(a: int, b: int) -> int:
    """Greatest common divisor of nonnegative ``a`` and ``b``, not both zero."""
    if a < 0 or b < 0:
        raise DomainError(f"gcd expects nonnegative inputs, got ({a}, {b})")
    if a == 0 and b == 0:
        raise DomainError("gcd(0, 0) is undefined")
    while b:
        a, b = b, a % b
    return a


def extended_gcd(a: int, b: int) -> ExtendedGcd:
    """Bézout coefficients by running Euclid and carrying the back-substitution."""
    if a < 1 or b < 1:
        raise DomainError(f"extended_gcd expects positive inputs, got ({a}, {b})")
    old_r, r = a, b
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r:
        quot = old_r // r
        old_r, r = r, old_r - quot * r
        old_u, u = u, old_u - quot * u
        old_v, v = v, old_v - quot * v
    return ExtendedGcd(old_r, old_u, old_v)


def mod_inverse(a: int, m: int) -> int:
    """Return ``u`` in ``[1, m-1]`` with ``a*u = 1 (mod m)``.

    Raises :class:`NoInverseError` carrying ``gcd(a, m)`` when no inverse exists.
    Solving ``a*x = c (mod m)`` is then ``x = c * mod_inverse(a, m) % m``.
    """
    if m < 2:
        raise DomainError(f"modulus must be >= 2, got {m}")
    a_red = a % m
    if a_red == 0:
        raise NoInverseError(a, m, m)
    eg = extended_gcd(a_red, m)
    if eg.d != 1:
        raise NoInverseError(a, m, eg.d)
    return eg.u % m


def mod_pow_counted(m: int, a: int, N: int) -> tuple[int, int]:
    """``m**a mod N`` by left-to-right binary exponentiation, plus the multiplication count.

    Starting from the leading 1 bit of ``a`` the running value is squared
    once per remaining bit and multiplied by ``m`` when that bit is set.
    """
    if N < 2:
        raise DomainError(f"modulus must be >= 2, got {N}")
    if a < 0:
        raise DomainError(f"exponent must be nonnegative, got {a}")
    if a == 0:
        return 1, 0
    base = m % N
    bits = bin(a)[3:]  # drop '0b' and the leading 1 bit
    result = base
    mults = 0
    for bit in bits:
        result = result * result % N
        mults += 1
        if bit == "1":
            result = result * base % N
            mults += 1
    return result, mults


def mod_pow(m: int, a: int, N: int) -> int:
    """``m**a mod N`` computed by binary square-and-multiply."""
    return mod_pow_counted(m, a, N)[0]


def euler_phi_bruteforce(n: int) -> int:
    """Count ``0 <= a < n`` with ``gcd(a, n) = 1`` (so phi(1) = 1)."""
    if n < 1:
        raise DomainError(f"phi is defined for n >= 1, got {n}")
    return sum(1 for a in range(n) if gcd(a, n) == 1)


def euler_phi_from_factorization(prime_powers: Iterable[tuple[int, int]]) -> int:
    """Evaluate ``n * prod(1 - 1/p)`` exactly from ``[(p, alpha), ...]``."""
    result = 1
    for p, alpha in prime_powers:
        if p < 2 or alpha < 1:
            raise DomainError(f"invalid prime power ({p}, {alpha})")
        result *= p ** (alpha - 1) * (p - 1)
    return result


def totient_sieve(n_max: int) -> np.ndarray:
    """phi(n) for every ``0 <= n <= n_max`` (index 0 holds 0)."""
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    phi = np.arange(n_max + 1, dtype=np.int64)
    for p in range(2, n_max + 1):
        if phi[p] == p:  # untouched so far, hence prime
            phi[p::p] -= phi[p::p] // p
    return phi


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization by trial division, as ``[(p, alpha), ...]`` ascending."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    out: list[tuple[int, int]] = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            alpha = 0
            while n % p == 0:
                n //= p
                alpha += 1
            out.append((p, alpha))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def crt_solve(congruences: Sequence[tuple[int, int]]) -> int:
    """Solve ``x = a_i (mod m_i)`` for pairwise coprime moduli.

    Builds ``x = sum(a_i * M_i * N_i) mod M`` with ``M_i = M / m_i`` and
    ``N_i`` the inverse of ``M_i`` modulo ``m_i``.
    """
    if not congruences:
        raise DomainError("at least one congruence is required")
    moduli = [m for _, m in congruences]
    for m in moduli:
        if m < 2:
            raise DomainError(f"moduli must be >= 2, got {m}")
    for i in range(len(moduli)):
        for j in range(i + 1, len(moduli)):
            g = gcd(moduli[i], moduli[j])
            if g != 1:
                raise DomainError(
                    f"moduli {moduli[i]} and {moduli[j]} are not coprime (gcd = {g})"
                )
    M = math.prod(moduli)
    x = 0
    for a, m in congruences:
        M_i = M // m
        N_i = mod_inverse(M_i, m)
        x += a * M_i * N_i
    return x % M


def continued_fraction(numer: int, denom: int) -> ContinuedFractionExpansion:
    """Continued fraction of ``numer/denom`` from the Euclid quotient sequence."""
    if denom < 1:
        raise DomainError(f"denominator must be positive, got {denom}")
    if numer < 0:
        raise DomainError(f"numerator must be nonnegative, got {numer}")
    if numer == 0:
        return ContinuedFractionExpansion(0, denom, (0,), ((0, 1),))
    quotients = euclid(numer, denom).quotients
    convergents = []
    p_prev, p = 1, quotients[0]
    q_prev, q = 0, 1
    convergents.append((p, q))
    for a in quotients[1:]:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        convergents.append((p, q))
    return ContinuedFractionExpansion(numer, denom, quotients, tuple(convergents))


def recover_fraction(c: int, q: int, denom_bound: int) -> Optional[tuple[int, int]]:
    """Convergent ``(d, r)`` of ``c/q`` with the largest denominator below ``denom_bound``."""
    if denom_bound < 1:
        raise DomainError("denom_bound must be >= 1")
    if not 0 <= c < q:
        raise DomainError(f"need 0 <= c < q, got c={c}, q={q}")
    best = None
    for p, r in continued_fraction(c, q).convergents:
        if r >= denom_bound:
            break
        best = (p, r)
    # the first convergent has denominator 1, so this only trips for denom_bound == 1
    assert best is not None or denom_bound == 1
    return best


def order_bruteforce(m: int, N: int) -> int:
    """Least ``r >= 1`` with ``m**r = 1 (mod N)``, by repeated multiplication."""
    if N < 2:
        raise DomainError(f"modulus must be >= 2, got {N}")
    g = gcd(m % N, N) if m % N else N
    if g != 1:
        raise DomainError(f"gcd({m}, {N}) = {g}; m has no order modulo {N}")
    r, x = 1, m % N
    while x != 1:
        x = x * m % N
        r += 1
    return r


def integer_root(n: int, k: int) -> int:
    """Floor of the k-th root of ``n >= 0``."""
    if n < 0 or k < 1:
        raise DomainError(f"integer_root needs n >= 0 and k >= 1, got ({n}, {k})")
    if n < 2 or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    lo, hi = 1, 1 << (n.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**k <= n:
            lo = mid
        else:
            hi = mid - 1
    return lo


def perfect_power(n: int) -> Optional[tuple[int, int]]:
    """Return ``(root, k)`` with ``root**k == n`` and ``k >= 2`` maximal, else None."""
    if n < 4:
        return None
    for k in range(n.bit_length(), 1, -1):
        root = integer_root(n, k)
        if root > 1 and root**k == n:
            return root, k
    return None
