"""Classical post-processing: recovering the order from a measurement, and factoring N."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from . import shor
from .errors import DomainError
from .numtheory import gcd, mod_pow, perfect_power, recover_fraction
from .records import Document
from .rng import GENERATOR_ID, SeedStream


@dataclass(frozen=True)
class OrderFindingRun:
    """One pass of the quantum steps followed by continued-fraction recovery."""

    params: shor.ShorParameters
    sample: tuple[int, int]
    candidate: Optional[tuple[int, int]]
    verified: bool
    seed_offset: Optional[int] = None

    @property
    def order(self) -> Optional[int]:
        return self.candidate[1] if self.verified else None


@dataclass
class OrderSearch:
    """Result of :func:`find_order`: the verified order (or None) and every run."""

    N: int
    m: int
    seed: int
    max_repetitions: int
    order: Optional[int]
    runs: list[OrderFindingRun] = field(default_factory=list)

    @property
    def repetitions(self) -> int:
        return len(self.runs)


def candidate_order(c: int, params: shor.ShorParameters) -> tuple[int, int]:
    """Convergent ``d/r`` of ``c/q`` with the largest denominator ``r < N``."""
    fraction = recover_fraction(c, params.q, params.N)
    assert fraction is not None  # N >= 3, so the denominator-1 convergent always qualifies
    return fraction


def recover_order(c: int, params: shor.ShorParameters) -> Optional[int]:
    """Return the denominator ``r`` recovered from ``c`` if ``m^r = 1 (mod N)``, else None."""
    m = params.require_base()
    if not 0 <= c < params.q:
        raise DomainError(f"c must lie in [0, {params.q}), got {c}")
    _, r = candidate_order(c, params)
    return r if mod_pow(m, r, params.N) == 1 else None


def run_from_sample(params: shor.ShorParameters, sample: tuple[int, int], seed_offset=None) -> OrderFindingRun:
    c, _ = sample
    cand = candidate_order(c, params)
    verified = mod_pow(params.require_base(), cand[1], params.N) == 1
    return OrderFindingRun(params, sample, cand, verified, seed_offset)


def default_repetitions(N: int) -> int:
    """``ceil(10 log2(log2 N) + 10)``; grows like log log N."""
    return math.ceil(10 * math.log2(math.log2(N)) + 10)


def find_order(
    N: int,
    m: int,
    seed: int = 0,
    max_repetitions: Optional[int] = None,
    path: shor.Path = "simulation",
    max_amplitudes: int = shor.DEFAULT_MAX_AMPLITUDES,
    stream: Optional[SeedStream] = None,
) -> OrderSearch:
    """Repeat the quantum steps and recovery until an order verifies.

    The distribution is computed once and sampled per repetition, one fresh
    generator per draw from ``stream`` (or from ``seed`` when no stream is
    given). Raises :class:`~shorsim.errors.SharedFactorError` if ``gcd(m, N) > 1``.
    """
    params = shor.make_parameters(N, m, max_amplitudes)
    if max_repetitions is None:
        max_repetitions = default_repetitions(N)
    if max_repetitions < 1:
        raise DomainError("max_repetitions must be >= 1")
    if stream is None:
        stream = SeedStream(seed)
    dist = shor.outcome_distribution(params, path)
    search = OrderSearch(N, m, stream.seed, max_repetitions, None)
    for _ in range(max_repetitions):
        offset, rng = stream.next()
        run = run_from_sample(params, dist.sample(rng), offset)
        search.runs.append(run)
        if run.verified:
            search.order = run.order
            break
    return search


def nontrivial_sqrt_to_factor(b: int, N: int) -> tuple[int, int]:
    """``(gcd(b-1, N), gcd(b+1, N))`` for a square root of unity ``b`` other than +-1."""
    b %= N
    if b * b % N != 1:
        raise DomainError(f"{b}^2 is not 1 modulo {N}")
    if b in (1, N - 1):
        raise DomainError(f"{b} is a trivial square root of 1 modulo {N}")
    return gcd(b - 1, N), gcd(b + 1, N)


# ---------------------------------------------------------------- factoring


@dataclass(frozen=True)
class FactorConfig:
    max_m_attempts: int = 20
    max_repetitions: Optional[int] = None
    path: shor.Path = "simulation"
    max_amplitudes: int = shor.DEFAULT_MAX_AMPLITUDES
    trial_division_bound: int = 1000

    def __post_init__(self):
        if self.max_m_attempts < 1:
            raise DomainError("max_m_attempts must be >= 1")
        if self.max_repetitions is not None and self.max_repetitions < 1:
            raise DomainError("max_repetitions must be >= 1")
        if self.max_amplitudes < 1 or self.trial_division_bound < 0:
            raise DomainError("limits must be positive")


@dataclass
class FactorAttempt:
    """One random base: how it was drawn and what it produced."""

    seed_offset: int
    m: int
    gcd_m: int
    order: Optional[int] = None
    repetitions: int = 0
    half_power: Optional[int] = None
    gcd_minus: Optional[int] = None
    gcd_plus: Optional[int] = None
    result: str = ""


@dataclass
class FactoringOutcome:
    N: int
    seed: int
    factors: Optional[tuple[int, int]] = None
    method: Optional[str] = None
    attempts: list[FactorAttempt] = field(default_factory=list)
    reason: Optional[str] = None

    def __post_init__(self):
        if self.factors is not None:
            self._check(self.factors)

    def _check(self, factors):
        p, q = factors
        assert p * q == self.N and 1 < p <= q < self.N, (self.N, factors)

    def set_factors(self, p: int, method: str) -> None:
        pair = tuple(sorted((p, self.N // p)))
        self._check(pair)
        self.factors = pair
        self.method = method

    def to_document(self) -> Document:
        doc = Document(
            kind="factoring",
            meta={
                "N": self.N,
                "seed": self.seed,
                "generator": GENERATOR_ID,
                "p": self.factors[0] if self.factors else None,
                "q": self.factors[1] if self.factors else None,
                "method": self.method,
                "reason": self.reason.replace(" ", "-") if self.reason else None,
            },
            columns=(
                "seed_offset", "m", "gcd_m", "order", "repetitions",
                "half_power", "gcd_minus", "gcd_plus", "result",
            ),
        )
        for a in self.attempts:
            doc.add_row(
                a.seed_offset, a.m, a.gcd_m, a.order, a.repetitions,
                a.half_power, a.gcd_minus, a.gcd_plus, a.result,
            )
        return doc


def factor(N: int, seed: int = 0, config: Optional[FactorConfig] = None) -> FactoringOutcome:
    """Split ``N`` once using order finding.

    Even ``N`` and perfect powers are handled up front. Otherwise a random
    base ``m`` in ``[2, N-1]`` is drawn. A shared factor with ``N`` ends the
    search at once; else the order ``r`` is found and, when ``r`` is even and
    ``m^(r/2)`` is not ``+-1``, ``gcd(m^(r/2) - 1, N)`` is a proper divisor.
    """
    if config is None:
        config = FactorConfig()
    if N < 3:
        raise DomainError(f"N must be >= 3, got {N}")
    outcome = FactoringOutcome(N, seed)
    if N % 2 == 0:
        outcome.set_factors(2, "even")
        return outcome
    pp = perfect_power(N)
    if pp is not None:
        outcome.set_factors(pp[0], "perfect-power")
        return outcome

    # fail fast on capacity before drawing anything
    shor.choose_parameters(N, config.max_amplitudes)
    stream = SeedStream(seed)
    for _ in range(config.max_m_attempts):
        offset, rng = stream.next()
        m = int(rng.integers(2, N, endpoint=False))
        attempt = FactorAttempt(offset, m, gcd(m, N))
        outcome.attempts.append(attempt)
        if attempt.gcd_m > 1:
            attempt.result = "shared-factor"
            outcome.set_factors(attempt.gcd_m, "gcd")
            return outcome

        search = find_order(
            N, m,
            max_repetitions=config.max_repetitions,
            path=config.path,
            max_amplitudes=config.max_amplitudes,
            stream=stream,
        )
        attempt.order = search.order
        attempt.repetitions = search.repetitions
        if search.order is None:
            attempt.result = "order-not-found"
            continue
        r = search.order
        if r % 2:
            attempt.result = "odd-order"
            continue
        b = mod_pow(m, r // 2, N)
        attempt.half_power = b
        attempt.gcd_minus = gcd(b - 1, N)
        attempt.gcd_plus = gcd(b + 1, N)
        if b in (1, N - 1):
            attempt.result = "trivial-root"
            continue
        attempt.result = "split"
        outcome.set_factors(attempt.gcd_minus, "order")
        return outcome

    outcome.reason = f"no factor after {config.max_m_attempts} bases"
    p = smallest_divisor(N, config.trial_division_bound)
    if p is not None:
        outcome.set_factors(p, "trial-division")
        outcome.reason = None
    return outcome


def smallest_divisor(N: int, bound: int) -> Optional[int]:
    """Least proper divisor of ``N`` not exceeding ``bound``, by trial division."""
    p = 2
    while p <= bound and p * p <= N:
        if N % p == 0:
            return p
        p += 1
    return None
