"""Dense state-vector simulation of an s-qubit register and the QFT circuit.

Basis index ``a = a_0 + 2 a_1 + ... + 2^(s-1) a_(s-1)``: qubit ``j`` is bit ``j``
of the index (little-endian). The low-level kernels act in place on the last
axis of an array of shape ``(..., 2**s)``, so a batch of registers (e.g. the
second-register slices of Shor's joint state) can be transformed at once.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DomainError, IntegrityError
from .rng import as_generator, sample_index

MAX_QUBITS = 24
NORM_TOLERANCE = 1e-6

_SQRT1_2 = 1.0 / math.sqrt(2.0)


# ---------------------------------------------------------------- registers


@dataclass
class QubitRegister:
    s: int
    amplitudes: np.ndarray

    def __post_init__(self):
        _check_qubits(self.s)
        self.amplitudes = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (1 << self.s,):
            raise DomainError(
                f"amplitude vector has shape {self.amplitudes.shape}, expected ({1 << self.s},)"
            )

    @property
    def dimension(self) -> int:
        return 1 << self.s

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def inner(self, other: "QubitRegister") -> complex:
        """``<self|other>``."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def copy(self) -> "QubitRegister":
        return QubitRegister(self.s, self.amplitudes.copy())


def _check_qubits(s: int) -> None:
    if not 1 <= s <= MAX_QUBITS:
        raise DomainError(f"qubit count must be in [1, {MAX_QUBITS}], got {s}")


def _check_index(s: int, j: int) -> None:
    if not 0 <= j < s:
        raise DomainError(f"qubit index {j} out of range for {s} qubits")


def basis_state(s: int, a: int) -> QubitRegister:
    _check_qubits(s)
    if not 0 <= a < (1 << s):
        raise DomainError(f"basis index {a} out of range for {s} qubits")
    amps = np.zeros(1 << s, dtype=np.complex128)
    amps[a] = 1.0
    return QubitRegister(s, amps)


def random_state(s: int, seed) -> QubitRegister:
    """Normalized state with independent complex Gaussian amplitudes."""
    rng = as_generator(seed)
    amps = rng.normal(size=1 << s) + 1j * rng.normal(size=1 << s)
    amps /= np.linalg.norm(amps)
    return QubitRegister(s, amps)


# ------------------------------------------------------------------ kernels


def _num_qubits(amps: np.ndarray) -> int:
    n = amps.shape[-1]
    s = n.bit_length() - 1
    if n != 1 << s:
        raise DomainError(f"last axis has length {n}, not a power of two")
    return s


def hadamard_kernel(amps: np.ndarray, j: int) -> None:
    """Butterfly on index pairs differing only in bit ``j``."""
    s = _num_qubits(amps)
    view = amps.reshape(-1, 1 << (s - j - 1), 2, 1 << j)
    lo = view[:, :, 0, :].copy()
    hi = view[:, :, 1, :]
    view[:, :, 0, :] = (lo + hi) * _SQRT1_2
    view[:, :, 1, :] = (lo - hi) * _SQRT1_2


def controlled_phase_kernel(amps: np.ndarray, j: int, k: int, angle: float) -> None:
    """Multiply every amplitude whose bits ``j`` and ``k`` are both set by ``e^{i angle}``."""
    s = _num_qubits(amps)
    view = amps.reshape(-1, 1 << (s - k - 1), 2, 1 << (k - j - 1), 2, 1 << j)
    view[:, :, 1, :, 1, :] *= np.exp(1j * angle)


@lru_cache(maxsize=None)
def bit_reversal_permutation(s: int) -> np.ndarray:
    """``perm[a]`` is ``a`` with its ``s`` bits reversed."""
    idx = np.arange(1 << s, dtype=np.int64)
    rev = np.zeros_like(idx)
    for bit in range(s):
        rev |= ((idx >> bit) & 1) << (s - 1 - bit)
    rev.setflags(write=False)
    return rev


def bit_reversal_kernel(amps: np.ndarray) -> None:
    s = _num_qubits(amps)
    perm = bit_reversal_permutation(s)
    # amplitude at a moves to rev(a); rev is an involution so gathering works too
    amps[...] = amps[..., perm]


# -------------------------------------------------------------- gate objects


class GateKind(enum.Enum):
    HADAMARD = "H"
    CONTROLLED_PHASE = "B"
    BIT_REVERSAL = "T"


@dataclass(frozen=True)
class GateOp:
    kind: GateKind
    j: int | None = None
    k: int | None = None
    angle: float = 0.0

    @classmethod
    def hadamard(cls, j: int) -> "GateOp":
        return cls(GateKind.HADAMARD, j)

    @classmethod
    def controlled_phase(cls, j: int, k: int, angle: float) -> "GateOp":
        if not j < k:
            raise DomainError(f"controlled phase needs j < k, got ({j}, {k})")
        return cls(GateKind.CONTROLLED_PHASE, j, k, angle)

    @classmethod
    def bit_reversal(cls) -> "GateOp":
        return cls(GateKind.BIT_REVERSAL)

    def inverse(self) -> "GateOp":
        if self.kind is GateKind.CONTROLLED_PHASE:
            return GateOp(self.kind, self.j, self.k, -self.angle)
        return self

    def validate(self, s: int) -> None:
        if self.kind is GateKind.HADAMARD:
            _check_index(s, self.j)
        elif self.kind is GateKind.CONTROLLED_PHASE:
            _check_index(s, self.j)
            _check_index(s, self.k)
            if not self.j < self.k:
                raise DomainError(f"controlled phase needs j < k, got ({self.j}, {self.k})")

    def apply_to(self, amps: np.ndarray) -> None:
        if self.kind is GateKind.HADAMARD:
            hadamard_kernel(amps, self.j)
        elif self.kind is GateKind.CONTROLLED_PHASE:
            controlled_phase_kernel(amps, self.j, self.k, self.angle)
        else:
            bit_reversal_kernel(amps)

    def label(self) -> str:
        if self.kind is GateKind.HADAMARD:
            return f"H_{self.j}"
        if self.kind is GateKind.CONTROLLED_PHASE:
            return f"B_{{{self.j},{self.k}}}"
        return "T"


@dataclass(frozen=True)
class GateSequence:
    """Gates listed in the order they are applied to the state."""

    s: int
    gates: tuple[GateOp, ...]
    counts: Counter = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        _check_qubits(self.s)
        for g in self.gates:
            g.validate(self.s)
        object.__setattr__(self, "counts", Counter(g.kind for g in self.gates))

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    @property
    def total(self) -> int:
        return len(self.gates)

    @property
    def hadamard_count(self) -> int:
        return self.counts[GateKind.HADAMARD]

    @property
    def phase_count(self) -> int:
        return self.counts[GateKind.CONTROLLED_PHASE]

    @property
    def reversal_count(self) -> int:
        return self.counts[GateKind.BIT_REVERSAL]

    @property
    def elementary_count(self) -> int:
        """Hadamard plus controlled-phase gates (the reversal is not counted)."""
        return self.hadamard_count + self.phase_count

    def inverse(self) -> "GateSequence":
        return GateSequence(self.s, tuple(g.inverse() for g in reversed(self.gates)))

    def operator_product(self) -> str:
        """The non-reversal gates written as an operator product (rightmost acts first)."""
        return " ".join(g.label() for g in reversed(self.gates) if g.kind is not GateKind.BIT_REVERSAL)

    def apply_to(self, amps: np.ndarray) -> None:
        if amps.shape[-1] != 1 << self.s:
            raise DomainError(f"sequence is for {self.s} qubits, array has last axis {amps.shape[-1]}")
        for g in self.gates:
            g.apply_to(amps)


# ------------------------------------------------------ register-level API


def apply_hadamard(state: QubitRegister, j: int) -> QubitRegister:
    """In-place Hadamard on qubit ``j``; returns the same register."""
    _check_index(state.s, j)
    hadamard_kernel(state.amplitudes, j)
    return state


def apply_controlled_phase(state: QubitRegister, j: int, k: int, angle: float) -> QubitRegister:
    """In-place phase ``e^{i angle}`` on basis states with bits ``j`` and ``k`` set."""
    _check_index(state.s, j)
    _check_index(state.s, k)
    if not j < k:
        raise DomainError(f"controlled phase needs j < k, got ({j}, {k})")
    controlled_phase_kernel(state.amplitudes, j, k, angle)
    return state


def apply_bit_reversal(state: QubitRegister) -> QubitRegister:
    bit_reversal_kernel(state.amplitudes)
    return state


def apply_gate(state: QubitRegister, gate: GateOp) -> QubitRegister:
    gate.validate(state.s)
    gate.apply_to(state.amplitudes)
    return state


def apply_sequence(state: QubitRegister, sequence: GateSequence) -> QubitRegister:
    if sequence.s != state.s:
        raise DomainError(f"sequence is for {sequence.s} qubits, register has {state.s}")
    sequence.apply_to(state.amplitudes)
    return state


def phase_angle(j: int, k: int) -> float:
    """Controlled-phase angle between qubits ``j < k``: ``pi / 2**(k - j)``."""
    return math.pi / (1 << (k - j))


@lru_cache(maxsize=64)
def build_qft_gate_sequence(s: int) -> GateSequence:
    """QFT on ``s`` qubits as Hadamards, controlled phases and a final bit reversal.

    As an operator product the reversed transform reads
    ``H_0 B_{0,1} ... B_{0,s-1} H_1 ... H_{s-2} B_{s-2,s-1} H_{s-1}``. Its rightmost
    factor acts first, so the application order starts with ``H_{s-1}``. The
    bit reversal is applied last.
    """
    if s < 1:
        raise DomainError(f"QFT needs at least one qubit, got {s}")
    _check_qubits(s)
    written: list[GateOp] = []
    for j in range(s):
        written.append(GateOp.hadamard(j))
        for k in range(j + 1, s):
            written.append(GateOp.controlled_phase(j, k, phase_angle(j, k)))
    gates = tuple(reversed(written)) + (GateOp.bit_reversal(),)
    return GateSequence(s, gates)


def state_preparation_sequence(s: int) -> GateSequence:
    """One Hadamard per qubit: maps ``|0>`` to the uniform superposition."""
    return GateSequence(s, tuple(GateOp.hadamard(j) for j in range(s)))


def apply_qft(state: QubitRegister) -> QubitRegister:
    """Gate-sequence QFT, in place."""
    return apply_sequence(state, build_qft_gate_sequence(state.s))


def qft_batch(amps: np.ndarray) -> np.ndarray:
    """Gate-sequence QFT along the last axis of ``amps`` (copied, then transformed)."""
    out = np.array(amps, dtype=np.complex128, copy=True, order="C")
    build_qft_gate_sequence(_num_qubits(out)).apply_to(out)
    return out


@lru_cache(maxsize=8)
def dft_matrix(q: int) -> np.ndarray:
    """``q x q`` matrix with entries ``e^{2 pi i xy/q} / sqrt(q)``; ``xy`` reduced mod q exactly."""
    x = np.arange(q, dtype=np.int64)
    exponent = np.outer(x, x) % q
    mat = np.exp(2j * np.pi * exponent / q) / math.sqrt(q)
    mat.setflags(write=False)
    return mat


def qft_direct_batch(amps: np.ndarray) -> np.ndarray:
    """Dense DFT along the last axis (the oracle for the gate path)."""
    q = amps.shape[-1]
    # the matrix is symmetric, so row-vector times matrix equals matrix times column
    return np.asarray(amps, dtype=np.complex128) @ dft_matrix(q)


def qft_direct(state: QubitRegister) -> QubitRegister:
    return QubitRegister(state.s, qft_direct_batch(state.amplitudes))


def qft_factorized(s: int, a: int) -> np.ndarray:
    """``F|a>`` assembled as the tensor product of single-qubit states.

    Qubit ``j`` is ``(|0> + e^{i phi_a 2^j}|1>)/sqrt(2)`` with ``phi_a = 2 pi a / 2^s``.
    """
    q = 1 << s
    vec = np.ones(1, dtype=np.complex128)
    for j in reversed(range(s)):  # kron order: qubit s-1 is the most significant factor
        phase = 2 * np.pi * ((a << j) % q) / q
        factor = np.array([1.0, np.exp(1j * phase)]) * _SQRT1_2
        vec = np.kron(vec, factor)
    return vec


# -------------------------------------------------------------- measurement


def measure_all(state: QubitRegister, seed, shots: int | None = None):
    """Sample basis index ``a`` with probability ``|amplitude(a)|^2``.

    Returns one int, or an array of ``shots`` ints. Deterministic for a given
    seed.
    """
    norm = state.norm_squared()
    if abs(norm - 1.0) > NORM_TOLERANCE:
        raise IntegrityError(f"state norm^2 is {norm:.12g}, expected 1")
    rng = as_generator(seed)
    return sample_index(state.probabilities(), rng, shots)


def unitary_of(sequence: GateSequence) -> np.ndarray:
    """Dense matrix of a gate sequence; column ``a`` is the image of ``|a>``."""
    q = 1 << sequence.s
    cols = np.eye(q, dtype=np.complex128)
    sequence.apply_to(cols)  # rows of the identity are basis vectors
    return cols.T.copy()


def max_deviation(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))
