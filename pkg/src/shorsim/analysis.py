"""Numerical checks of the probability bounds and operation counts behind Shor's algorithm.

Each ``verify_*`` function returns a :class:`TheoremReport`. Every instance
carries an observed value, the bound it is compared against, and a margin
that is ``>= 1`` exactly when the instance passes an inequality: observed/bound
for lower bounds, bound/observed for upper bounds. Exact-equality checks use
margin 1 (equal) or 0 (not equal).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Optional, Sequence

import numpy as np

from . import shor, statevector
from .errors import DomainError
from .numtheory import (
    continued_fraction,
    euclid,
    euler_phi_bruteforce,
    factorize,
    gcd,
    mod_pow_counted,
    order_bruteforce,
    totient_sieve,
)
from .postprocess import candidate_order
from .records import Document
from .rng import generator_for

DEFAULT_SUITE_N = (15, 21, 33, 35, 39, 55)

# three fixed bases per N for the (more expensive) full-simulation checks
DISTRIBUTION_BASES = {
    15: (2, 7, 14),
    21: (2, 5, 20),
    33: (2, 5, 32),
    35: (2, 3, 34),
    39: (2, 5, 38),
    55: (2, 3, 54),
}

GOOD_BASE_SUITE = (15, 21, 33, 35, 105)


def valid_bases(N: int) -> list[int]:
    return [m for m in range(2, N) if gcd(m, N) == 1]


def full_suite(Ns: Iterable[int] = DEFAULT_SUITE_N) -> list[tuple[int, int]]:
    return [(N, m) for N in Ns for m in valid_bases(N)]


def distribution_suite() -> list[tuple[int, int]]:
    return [(N, m) for N, bases in DISTRIBUTION_BASES.items() for m in bases]


# ------------------------------------------------------------------ reports


@dataclass
class InstanceResult:
    witness: dict[str, Any]
    observed: Any
    bound: Any
    passed: bool
    margin: float


@dataclass
class TheoremReport:
    theorem: str
    instances: str
    predicate: str
    results: list[InstanceResult] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, witness: dict, observed, bound, passed: bool, margin: float) -> None:
        self.results.append(InstanceResult(witness, observed, bound, bool(passed), float(margin)))

    @property
    def passed(self) -> bool:
        return bool(self.results) and all(r.passed for r in self.results)

    @property
    def failures(self) -> list[InstanceResult]:
        return [r for r in self.results if not r.passed]

    @property
    def worst(self) -> Optional[InstanceResult]:
        if not self.results:
            return None
        return min(self.results, key=lambda r: r.margin)

    @property
    def worst_margin(self) -> float:
        w = self.worst
        return w.margin if w is not None else float("nan")

    def render_text(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        lines = [
            f"[{status}] {self.theorem}",
            f"  instances: {self.instances} ({len(self.results)} checked)",
            f"  predicate: {self.predicate}",
        ]
        w = self.worst
        if w is not None:
            lines.append(
                f"  worst margin: {w.margin:.6g} at {_fmt_witness(w.witness)}"
                f" (observed {_fmt(w.observed)}, bound {_fmt(w.bound)})"
            )
        for r in self.failures[:10]:
            lines.append(f"  violation: {_fmt_witness(r.witness)} observed {_fmt(r.observed)} bound {_fmt(r.bound)}")
        for note in self.notes:
            lines.append(f"  note: {note}")
        return "\n".join(lines)

    def to_document(self) -> Document:
        doc = Document(
            kind="theorem-report",
            meta={
                "theorem": self.theorem.replace(" ", "-"),
                "passed": self.passed,
                "instances": len(self.results),
                "worst_margin": self.worst_margin,
            },
            columns=("witness", "observed", "bound", "passed", "margin"),
        )
        for r in self.results:
            witness = ",".join(f"{k}={v}" for k, v in r.witness.items())
            doc.add_row(witness.replace(" ", ""), r.observed, r.bound, r.passed, r.margin)
        return doc


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _fmt_witness(w: dict) -> str:
    return "(" + ", ".join(f"{k}={v}" for k, v in w.items()) + ")"


def _map(fn: Callable, items: Sequence, threads: int = 1) -> list:
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _lower_margin(observed: float, bound: float) -> float:
    return observed / bound if bound > 0 else math.inf


def _upper_margin(observed: float, bound: float) -> float:
    return bound / observed if observed > 0 else math.inf


# ---------------------------------------------------------------------- QFT


def verify_qft(
    s_values: Iterable[int] = range(1, 11),
    states_per_s: int = 20,
    seed: int = 0,
    tolerance: float = 1e-9,
    unitarity_max_s: int = 8,
    factorized_max_s: int = 6,
) -> TheoremReport:
    """Gate-sequence QFT against the dense DFT, plus unitarity and product-form checks."""
    report = TheoremReport(
        "QFT decomposition",
        f"s in {list(s_values)}",
        f"max |gate QFT - DFT| <= {tolerance:g}; columns orthonormal; equals the unentangled product form",
    )
    for s in s_values:
        rng = generator_for(seed, s)
        batch = rng.normal(size=(states_per_s, 1 << s)) + 1j * rng.normal(size=(states_per_s, 1 << s))
        batch /= np.linalg.norm(batch, axis=1, keepdims=True)
        dev = statevector.max_deviation(statevector.qft_batch(batch), statevector.qft_direct_batch(batch))
        report.add({"check": "oracle", "s": s}, dev, tolerance, dev <= tolerance, _upper_margin(dev, tolerance))

        if s <= unitarity_max_s:
            U = statevector.unitary_of(statevector.build_qft_gate_sequence(s))
            dev = statevector.max_deviation(U.conj().T @ U, np.eye(1 << s))
            report.add({"check": "unitarity", "s": s}, dev, tolerance, dev <= tolerance, _upper_margin(dev, tolerance))

        if s <= factorized_max_s:
            basis = np.eye(1 << s, dtype=np.complex128)
            out = statevector.qft_batch(basis)
            prod = np.stack([statevector.qft_factorized(s, a) for a in range(1 << s)])
            dev = statevector.max_deviation(out, prod)
            tol = 1e-10
            report.add({"check": "factorized", "s": s}, dev, tol, dev <= tol, _upper_margin(dev, tol))
    return report


def gate_count_report(s_values: Iterable[int] = range(1, 21)) -> TheoremReport:
    """Exact gate counts of the QFT circuit and of the state-preparation layer."""
    report = TheoremReport(
        "QFT gate count",
        f"s in {list(s_values)}",
        "s Hadamards + s(s-1)/2 controlled phases (+1 bit reversal); preparation uses s Hadamards",
    )
    for s in s_values:
        seq = statevector.build_qft_gate_sequence(s)
        expected = s + s * (s - 1) // 2
        ok = (
            seq.elementary_count == expected
            and seq.hadamard_count == s
            and seq.phase_count == s * (s - 1) // 2
            and seq.reversal_count == 1
        )
        report.add({"s": s}, seq.elementary_count, expected, ok, 1.0 if ok else 0.0)
        prep = statevector.state_preparation_sequence(s).hadamard_count
        report.add({"s": s, "stage": "preparation"}, prep, s, prep == s, 1.0 if prep == s else 0.0)
    anchor = statevector.build_qft_gate_sequence(2).operator_product()
    ok = anchor == "H_0 B_{0,1} H_1"
    report.add({"s": 2, "stage": "operator-product"}, anchor.replace(" ", "*"), "H_0*B_{0,1}*H_1", ok, 1.0 if ok else 0.0)
    return report


def operation_count_report(Ns: Iterable[int] = DEFAULT_SUITE_N) -> TheoremReport:
    """Per-N gate and multiplication counts for the first three steps of order finding."""
    report = TheoremReport(
        "order-finding operation counts",
        f"N in {list(Ns)}",
        "preparation: s Hadamards; QFT: s(s+1)/2 gates; mod_pow(m, a, N): <= 2*bitlen(a) multiplications for every a < q",
    )
    report.notes.append(
        "the asymptotic cost of modular exponentiation is not measurable at this scale; only exact counts are asserted"
    )
    for N in Ns:
        params = shor.choose_parameters(N)
        s = params.s
        prep = statevector.state_preparation_sequence(s).hadamard_count
        report.add({"N": N, "stage": "preparation"}, prep, s, prep == s, 1.0 if prep == s else 0.0)
        qft = statevector.build_qft_gate_sequence(s).elementary_count
        expected = s * (s + 1) // 2
        report.add({"N": N, "stage": "qft"}, qft, expected, qft == expected, 1.0 if qft == expected else 0.0)
        m = valid_bases(N)[0]
        worst = math.inf
        worst_a = 0
        ok = True
        for a in range(1, params.q):
            _, mults = mod_pow_counted(m, a, N)
            bound = 2 * a.bit_length()
            ok &= mults <= bound
            if bound / max(mults, 1) < worst:
                worst, worst_a = bound / max(mults, 1), a
        report.add({"N": N, "stage": "mod_pow", "m": m, "a": worst_a}, "<=2*bitlen", "2*bitlen", ok, worst)
    return report


# ------------------------------------------------------ measurement bounds


def qualifying_outcomes(q: int, r: int) -> np.ndarray:
    """Outcomes ``c`` for which some integer ``d`` has ``|r c - d q| <= r/2``."""
    c = np.arange(q, dtype=np.int64)
    d = (2 * r * c + q) // (2 * q)  # nearest integer to rc/q
    return np.flatnonzero(2 * np.abs(r * c - d * q) <= r)


def _peak_bound_instance(Nm: tuple[int, int]) -> tuple[dict, float, bool, int]:
    N, m = Nm
    params = shor.make_parameters(N, m)
    r = order_bruteforce(m, N)
    cs = qualifying_outcomes(params.q, r)
    assert cs.size > 0 and cs[0] == 0
    table = shor.closed_form_table(params, r)[cs]
    ratio = table * 3 * r * r
    flat = int(np.argmin(ratio))
    ci, k = divmod(flat, r)
    c = int(cs[ci])
    worst = shor.closed_form_probability(params, r, c, k) * 3 * r * r
    violations = int(np.count_nonzero(ratio < 1.0))
    return {"N": N, "m": m, "r": r, "c": c, "k": k}, worst, violations == 0, violations


def verify_peak_bound(
    suite: Optional[Sequence[tuple[int, int]]] = None,
    threads: int = 1,
    cross_check: bool = True,
) -> TheoremReport:
    """``P(c, m^k mod N) >= 1/(3 r^2)`` for every peak outcome ``c`` and every ``k``."""
    suite = full_suite() if suite is None else list(suite)
    report = TheoremReport(
        "peak probability lower bound",
        f"{len(suite)} (N, m) pairs",
        "P(c, m^k mod N) * 3r^2 >= 1 whenever |rc - dq| <= r/2 for some integer d",
    )
    for witness, worst, ok, violations in _map(_peak_bound_instance, suite, threads):
        report.add(witness, worst, 1.0, ok, worst)
        if violations:
            report.notes.append(f"{violations} violating (c, k) for {_fmt_witness(witness)}")
    if cross_check and suite:
        N, m = suite[0]
        params = shor.make_parameters(N, m)
        a = shor.outcome_distribution(params, "simulation")
        b = shor.outcome_distribution(params, "closed-form")
        dev = float(np.max(np.abs(a.probabilities - b.probabilities)))
        report.add({"N": N, "m": m, "check": "simulation-vs-closed-form"}, dev, 1e-9, dev <= 1e-9, _upper_margin(dev, 1e-9))
    return report


def _recovered_order_table(params: shor.ShorParameters) -> np.ndarray:
    """Denominator recovered from every outcome ``c`` (depends on N and q only)."""
    return np.array([candidate_order(c, params)[1] for c in range(params.q)], dtype=np.int64)


def success_mass(params: shor.ShorParameters, dist: Optional[shor.OutcomeDistribution] = None,
                 recovered: Optional[np.ndarray] = None) -> float:
    """Exact probability that one run of the quantum steps yields the true order."""
    m = params.require_base()
    r = order_bruteforce(m, params.N)
    if dist is None:
        dist = shor.outcome_distribution(params, "closed-form")
    if recovered is None:
        recovered = _recovered_order_table(params)
    # recovery returns r exactly when the convergent's denominator is r (and r verifies)
    return float(dist.marginal_c()[recovered == r].sum())


def verify_success_probability(
    suite: Optional[Sequence[tuple[int, int]]] = None,
    threads: int = 1,
) -> TheoremReport:
    """Exact success mass of one run versus ``phi(r) / (3 r)``."""
    suite = full_suite() if suite is None else list(suite)
    report = TheoremReport(
        "single-run success probability",
        f"{len(suite)} (N, m) pairs",
        "sum of P(c, y) over outcomes from which the true order is recovered >= phi(r)/(3r)",
    )
    tables: dict[int, np.ndarray] = {}
    for N in sorted({N for N, _ in suite}):
        tables[N] = _recovered_order_table(shor.choose_parameters(N))

    def one(Nm):
        N, m = Nm
        params = shor.make_parameters(N, m)
        r = order_bruteforce(m, N)
        if r < 2:
            raise DomainError(f"order of {m} mod {N} is 1; excluded from the suite")
        mass = success_mass(params, recovered=tables[N])
        bound = euler_phi_bruteforce(r) / (3 * r)
        return {"N": N, "m": m, "r": r}, mass, bound

    for witness, mass, bound in _map(one, suite, threads):
        report.add(witness, mass, bound, mass >= bound, _lower_margin(mass, bound))
    return report


def verify_distribution_agreement(
    suite: Optional[Sequence[tuple[int, int]]] = None,
    tolerance: float = 1e-9,
    threads: int = 1,
) -> TheoremReport:
    """Simulation path versus closed form, entrywise, plus normalization of both."""
    suite = distribution_suite() if suite is None else list(suite)
    report = TheoremReport(
        "simulation matches closed form",
        f"{len(suite)} (N, m) pairs",
        f"max |P_sim - P_closed| <= {tolerance:g}; both totals within {tolerance:g} of 1; no mass off the orbit of m",
    )

    def one(Nm):
        N, m = Nm
        params = shor.make_parameters(N, m)
        a = shor.outcome_distribution(params, "simulation")
        b = shor.outcome_distribution(params, "closed-form")
        dev = float(np.max(np.abs(a.probabilities - b.probabilities)))
        dev = max(dev, abs(a.total() - 1), abs(b.total() - 1), a.off_support_mass)
        return {"N": N, "m": m}, dev

    for witness, dev in _map(one, suite, threads):
        report.add(witness, dev, tolerance, dev <= tolerance, _upper_margin(dev, tolerance))
    return report


# ----------------------------------------------------------------- factoring


def good_base_fraction(N: int) -> Fraction:
    """Fraction of bases ``m`` in ``[2, N-1]`` coprime to N whose order splits N."""
    bases = valid_bases(N)
    good = 0
    for m in bases:
        r = order_bruteforce(m, N)
        if r % 2 == 0:
            b = pow(m, r // 2, N)
            if b not in (1, N - 1):
                good += 1
    return Fraction(good, len(bases))


def verify_good_base_fraction(Ns: Iterable[int] = GOOD_BASE_SUITE) -> TheoremReport:
    """Good-base fraction versus ``1 - 1/2^(k-1)`` for odd N with k distinct primes."""
    Ns = list(Ns)
    report = TheoremReport(
        "good-base fraction",
        f"N in {Ns}",
        "fraction of m in [2, N-1] coprime to N with r even and m^(r/2) != +-1 is >= 1 - 1/2^(k-1)",
    )
    for N in Ns:
        if N % 2 == 0:
            raise DomainError(f"N must be odd, got {N}")
        k = len(factorize(N))
        if k < 2:
            raise DomainError(f"N = {N} needs at least two distinct prime factors")
        frac = good_base_fraction(N)
        bound = 1 - Fraction(1, 2 ** (k - 1))
        report.add({"N": N, "k": k}, frac, bound, frac >= bound, float(frac / bound))
    return report


# -------------------------------------------------------------- number theory


def verify_convergent_property(cases: int = 10_000, seed: int = 0, max_denominator: int = 1000) -> TheoremReport:
    """If ``|a/b - x| < 1/(2 b^2)`` then ``a/b`` is a convergent of ``x``."""
    report = TheoremReport(
        "convergent criterion",
        f"{cases} random (a/b, x) pairs",
        "a/b appears among the convergents of x",
    )
    rng = generator_for(seed, 0)
    misses = 0
    for i in range(cases):
        b = int(rng.integers(1, max_denominator + 1))
        a = int(rng.integers(1, 10 * max_denominator + 1))
        g = math.gcd(a, b)
        a, b = a // g, b // g
        K = int(rng.integers(1, 1001))
        e = int(rng.integers(-K + 1, K))  # |e| < K, so |x - a/b| = |e| / (2 b^2 K) < 1/(2 b^2)
        numer, denom = a * 2 * b * K + e, 2 * b * b * K
        g = math.gcd(numer, denom)
        found = (a, b) in continued_fraction(numer // g, denom // g).convergents
        if not found:
            misses += 1
            report.add({"a": a, "b": b, "x": f"{numer // g}/{denom // g}"}, False, True, False, 0.0)
    report.add({"cases": cases}, cases - misses, cases, misses == 0, 1.0 if misses == 0 else 0.0)
    return report


def verify_totient_lower_bound(n_min: int = 10, n_max: int = 100_000, C: float = 0.25) -> TheoremReport:
    """``phi(n)/n >= C / ln ln n`` over a range (C is a chosen test constant)."""
    report = TheoremReport(
        "totient lower bound",
        f"n in [{n_min}, {n_max}]",
        f"phi(n)/n >= {C} / ln(ln n)",
    )
    report.notes.append(f"C = {C} is a chosen test constant; only existence of some C > 0 is claimed")
    phi = totient_sieve(n_max)
    n = np.arange(n_min, n_max + 1)
    ratio = phi[n_min:] / n
    bound = C / np.log(np.log(n))
    margins = ratio / bound
    i = int(np.argmin(margins))
    violations = int(np.count_nonzero(margins < 1))
    report.add({"n": int(n[i])}, float(ratio[i]), float(bound[i]), violations == 0, float(margins[i]))
    return report


def verify_lame_bound(pairs: int = 10_000, seed: int = 0, max_value: int = 10**12) -> TheoremReport:
    """Euclid's division count is at most five times the digits of the smaller input."""
    report = TheoremReport(
        "Lame bound",
        f"{pairs} random pairs up to {max_value}",
        "divisions <= 5 * (decimal digits of min(a, b))",
    )
    rng = generator_for(seed, 1)
    worst = None
    ok = True
    for _ in range(pairs):
        a, b = (int(v) for v in rng.integers(1, max_value + 1, size=2))
        big, small = max(a, b), min(a, b)
        steps = euclid(big, small).divisions
        bound = 5 * len(str(small))
        ok &= steps <= bound
        margin = bound / steps
        if worst is None or margin < worst[0]:
            worst = (margin, big, small, steps, bound)
    margin, big, small, steps, bound = worst
    report.add({"a": big, "b": small}, steps, bound, ok, margin)
    return report


# ---------------------------------------------------------------- registry


def run_all(threads: int = 1) -> list[TheoremReport]:
    return [
        verify_qft(),
        gate_count_report(),
        operation_count_report(),
        verify_peak_bound(threads=threads),
        verify_success_probability(threads=threads),
        verify_distribution_agreement(threads=threads),
        verify_good_base_fraction(),
        verify_convergent_property(),
        verify_totient_lower_bound(),
        verify_lame_bound(),
    ]
