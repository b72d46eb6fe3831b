"""Quantum part of order finding: the two-register state and its measurement statistics.

The joint state lives in ``C^q (x) C^N1`` with basis index ``a * N1 + y``.
The arithmetic work register is not simulated: ``m^a mod N`` is computed
classically for each basis index, which gives the same state.

Two independent routes produce the outcome distribution. ``simulation``
prepares the joint state, entangles it, applies the first-register QFT and
squares the amplitudes. ``closed-form`` evaluates the sine-ratio formula for
``P(c, m^k mod N)`` directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Literal, Optional

import numpy as np

from . import statevector
from .errors import CapacityError, DomainError, SharedFactorError
from .numtheory import gcd, mod_pow, order_bruteforce
from .records import Document
from .rng import as_generator, sample_index

DEFAULT_MAX_AMPLITUDES = 1 << 22

Path = Literal["simulation", "closed-form"]
QftMethod = Literal["gates", "direct", "full"]


@dataclass(frozen=True)
class ShorParameters:
    """Register sizes for ``N``: ``q = 2**s`` with ``N^2 <= q < 2N^2``, ``N1 = 2**l >= N``."""

    N: int
    s: int
    l: int
    m: Optional[int] = None

    @property
    def q(self) -> int:
        return 1 << self.s

    @property
    def N1(self) -> int:
        return 1 << self.l

    @property
    def joint_dimension(self) -> int:
        return self.q * self.N1

    def with_base(self, m: int) -> "ShorParameters":
        """Attach the base ``m``; raises :class:`SharedFactorError` if ``gcd(m, N) > 1``."""
        if not 2 <= m <= self.N - 1:
            raise DomainError(f"base must lie in [2, {self.N - 1}], got {m}")
        g = gcd(m, self.N)
        if g != 1:
            raise SharedFactorError(self.N, m, g)
        return replace(self, m=m)

    def require_base(self) -> int:
        if self.m is None:
            raise DomainError("parameters carry no base m; call with_base(m) first")
        return self.m


def choose_parameters(N: int, max_amplitudes: int = DEFAULT_MAX_AMPLITUDES) -> ShorParameters:
    if N < 3:
        raise DomainError(f"N must be >= 3, got {N}")
    s = (N * N - 1).bit_length()  # least s with 2**s >= N**2
    l = (N - 1).bit_length()  # least l with 2**l >= N
    assert N * N <= (1 << s) < 2 * N * N
    required = (1 << s) * (1 << l)
    if s > statevector.MAX_QUBITS:
        raise CapacityError(
            f"N={N} needs a {s}-qubit first register; the simulator caps at {statevector.MAX_QUBITS}",
            s,
            statevector.MAX_QUBITS,
        )
    if required > max_amplitudes:
        raise CapacityError(
            f"N={N} needs q*N1 = {required} amplitudes, above the bound of {max_amplitudes}",
            required,
            max_amplitudes,
        )
    return ShorParameters(N, s, l)


def make_parameters(N: int, m: int, max_amplitudes: int = DEFAULT_MAX_AMPLITUDES) -> ShorParameters:
    return choose_parameters(N, max_amplitudes).with_base(m)


def power_table(m: int, count: int, N: int) -> np.ndarray:
    """``m^a mod N`` for ``a = 0 .. count-1`` by incremental multiplication."""
    out = np.empty(count, dtype=np.int64)
    x = 1
    for a in range(count):
        out[a] = x
        x = x * m % N
    assert int(out[-1]) == mod_pow(m, count - 1, N)
    return out


# ------------------------------------------------------------- joint state


@dataclass
class JointState:
    params: ShorParameters
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape != (self.params.joint_dimension,):
            raise DomainError(
                f"joint state needs {self.params.joint_dimension} amplitudes, got {self.amplitudes.shape}"
            )

    @property
    def grid(self) -> np.ndarray:
        """View with shape ``(q, N1)``: ``grid[a, y]``."""
        return self.amplitudes.reshape(self.params.q, self.params.N1)

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def occupied_columns(self) -> np.ndarray:
        """Second-register values ``y`` carrying any amplitude."""
        return np.flatnonzero(np.any(self.grid != 0, axis=0))


def prepare_superposition(params: ShorParameters) -> JointState:
    """Uniform superposition over the first register, second register in ``|0>``."""
    amps = np.zeros(params.joint_dimension, dtype=np.complex128)
    state = JointState(params, amps)
    state.grid[:, 0] = 1.0 / math.sqrt(params.q)
    return state


def entangle_modular_exponentiation(state: JointState) -> JointState:
    """Map ``|a>|0>`` to ``|a>|m^a mod N>``."""
    params = state.params
    m = params.require_base()
    grid = state.grid
    if np.any(grid[:, 1:] != 0):
        raise DomainError("modular exponentiation expects the second register in |0>")
    ys = power_table(m, params.q, params.N)
    out = JointState(params, np.zeros_like(state.amplitudes))
    out.grid[np.arange(params.q), ys] = grid[:, 0]
    return out


def apply_qft_first_register(state: JointState, method: QftMethod = "gates") -> JointState:
    """Apply ``F_q`` to the first register.

    ``gates`` and ``direct`` transform only the occupied second-register
    slices (the QFT acts on each slice independently). ``full`` runs the gate
    sequence on every slice, occupied or not.
    """
    params = state.params
    out = JointState(params, state.amplitudes.copy())
    grid = out.grid
    if method == "full":
        cols = np.arange(params.N1)
    elif method in ("gates", "direct"):
        cols = state.occupied_columns()
    else:
        raise DomainError(f"unknown QFT method {method!r}")
    if cols.size == 0:
        return out
    block = np.ascontiguousarray(grid[:, cols].T)  # one row per y slice
    if method == "direct":
        block = statevector.qft_direct_batch(block)
    else:
        block = statevector.qft_batch(block)
    grid[:, cols] = block.T
    return out


def simulate_final_state(params: ShorParameters, method: QftMethod = "gates") -> JointState:
    state = prepare_superposition(params)
    state = entangle_modular_exponentiation(state)
    return apply_qft_first_register(state, method)


# ------------------------------------------------------------- closed form


def closed_form_probability(params: ShorParameters, r: int, c: int, k: int) -> float:
    """``P(c, m^k mod N) = sin^2(pi c r (f+1)/q) / (q^2 sin^2(pi c r/q))`` with ``f = (q-1-k) // r``.

    When ``c r = 0 (mod q)`` the limit ``(f+1)^2 / q^2`` is used; the test is
    exact integer arithmetic.
    """
    q = params.q
    if not 0 <= c < q:
        raise DomainError(f"c must lie in [0, {q}), got {c}")
    if not 0 <= k < r:
        raise DomainError(f"k must lie in [0, {r}), got {k}")
    f = (q - 1 - k) // r
    cr = c * r % q
    if cr == 0:
        return (f + 1) ** 2 / q**2
    top = cr * (f + 1) % q
    return math.sin(math.pi * top / q) ** 2 / math.sin(math.pi * cr / q) ** 2 / q**2


def closed_form_table(params: ShorParameters, r: int) -> np.ndarray:
    """Vectorized closed form: array ``P[c, k]`` of shape ``(q, r)``."""
    q = params.q
    c = np.arange(q, dtype=np.int64)[:, None]
    k = np.arange(r, dtype=np.int64)[None, :]
    f1 = (q - 1 - k) // r + 1
    cr = c * r % q
    top = cr * f1 % q  # cr < q and f1 <= q, so the product stays far below 2**63
    singular = cr == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.sin(np.pi * top / q) ** 2 / np.sin(np.pi * cr / q) ** 2
    ratio = np.where(singular, (f1 * f1).astype(np.float64), ratio)
    return ratio / float(q * q)


def theoretical_peaks(q: int, r: int) -> list[int]:
    """``round(d q / r)`` for ``d = 0 .. r-1`` (half-up, exact)."""
    return [(2 * d * q + r) // (2 * r) for d in range(r)]


# ------------------------------------------------------------ distributions


@dataclass
class OutcomeDistribution:
    """Joint measurement statistics ``P[c, k]`` for outcome ``(c, y = m^k mod N)``.

    Only the ``r`` reachable second-register values are stored; any mass the
    simulation put elsewhere is reported in ``off_support_mass``.
    """

    params: ShorParameters
    r: int
    ys: tuple[int, ...]
    probabilities: np.ndarray
    path: str
    off_support_mass: float = 0.0
    _cdf_cache: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    def total(self) -> float:
        return float(self.probabilities.sum()) + self.off_support_mass

    def marginal_c(self) -> np.ndarray:
        return self.probabilities.sum(axis=1)

    def probability(self, c: int, y: int) -> float:
        try:
            k = self.ys.index(y)
        except ValueError:
            return 0.0
        return float(self.probabilities[c, k])

    def top_peaks(self, count: int) -> list[tuple[int, float]]:
        marg = self.marginal_c()
        order = np.argsort(-marg, kind="stable")[:count]
        return [(int(c), float(marg[c])) for c in sorted(order)]

    def sample(self, rng: np.random.Generator) -> tuple[int, int]:
        flat = sample_index(self.probabilities.ravel(), rng)
        c, k = divmod(flat, self.r)
        return c, self.ys[k]

    def to_document(self, threshold: float = 1e-15) -> Document:
        p = self.params
        doc = Document(
            kind="distribution",
            meta={"N": p.N, "m": p.m, "q": p.q, "N1": p.N1, "r": self.r, "path": self.path},
            columns=("c", "y", "probability"),
        )
        cs, ks = np.nonzero(self.probabilities > threshold)
        for c, k in zip(cs.tolist(), ks.tolist()):
            doc.add_row(c, self.ys[k], float(self.probabilities[c, k]))
        return doc


def outcome_distribution(
    params: ShorParameters,
    path: Path = "simulation",
    qft: QftMethod = "gates",
) -> OutcomeDistribution:
    m = params.require_base()
    r = order_bruteforce(m, params.N)
    ys = power_table(m, r, params.N)
    if path == "simulation":
        final = simulate_final_state(params, qft)
        probs = np.abs(final.grid) ** 2
        table = np.ascontiguousarray(probs[:, ys])
        off = float(probs.sum() - table.sum())
    elif path == "closed-form":
        table = closed_form_table(params, r)
        off = 0.0
    else:
        raise DomainError(f"unknown path {path!r}")
    return OutcomeDistribution(params, r, tuple(int(y) for y in ys), table, path, off)


def sample_run(
    params: ShorParameters,
    seed,
    path: Path = "simulation",
    distribution: Optional[OutcomeDistribution] = None,
) -> tuple[int, int]:
    """Measure both registers once; returns ``(c, y)``."""
    if distribution is None:
        distribution = outcome_distribution(params, path)
    return distribution.sample(as_generator(seed))
