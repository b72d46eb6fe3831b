import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shorsim import statevector as sv
from shorsim.errors import DomainError, IntegrityError
from shorsim.statevector import GateKind, GateOp

R2 = 1 / math.sqrt(2)


def dense_qft(s):
    """Independent oracle: the DFT matrix built entry by entry with cmath."""
    q = 1 << s
    return np.array(
        [[cmath.exp(2j * math.pi * x * y / q) / math.sqrt(q) for y in range(q)] for x in range(q)]
    )


# ----------------------------------------------------------------- basics


def test_basis_states():
    assert np.array_equal(sv.basis_state(1, 0).amplitudes, [1, 0])
    e5 = sv.basis_state(3, 5).amplitudes
    assert e5[5] == 1 and np.count_nonzero(e5) == 1
    for a in range(8):
        for b in range(8):
            assert sv.basis_state(3, a).inner(sv.basis_state(3, b)) == (a == b)
    with pytest.raises(DomainError):
        sv.basis_state(3, 8)


def test_qubit_cap():
    with pytest.raises(DomainError):
        sv.basis_state(sv.MAX_QUBITS + 1, 0)
    with pytest.raises(DomainError):
        sv.basis_state(0, 0)


def test_hadamard_on_basis():
    np.testing.assert_allclose(sv.apply_hadamard(sv.basis_state(1, 0), 0).amplitudes, [R2, R2], atol=1e-15)
    np.testing.assert_allclose(sv.apply_hadamard(sv.basis_state(1, 1), 0).amplitudes, [R2, -R2], atol=1e-15)


def test_hadamard_squares_to_identity():
    state = sv.random_state(5, 3)
    before = state.amplitudes.copy()
    for j in range(5):
        sv.apply_hadamard(sv.apply_hadamard(state, j), j)
    assert sv.max_deviation(state.amplitudes, before) < 1e-12


def test_hadamard_acts_on_the_named_bit():
    # H on qubit 1 of |a_2 a_1 a_0> = |0 0 1> mixes indices 1 and 3
    out = sv.apply_hadamard(sv.basis_state(3, 1), 1).amplitudes
    expected = np.zeros(8)
    expected[1] = expected[3] = R2
    np.testing.assert_allclose(out, expected, atol=1e-15)


def test_controlled_phase():
    out = sv.apply_controlled_phase(sv.basis_state(2, 3), 0, 1, math.pi / 2).amplitudes
    np.testing.assert_allclose(out, [0, 0, 0, 1j], atol=1e-15)
    for a in range(16):
        state = sv.basis_state(4, a)
        sv.apply_controlled_phase(state, 1, 3, 0.7)
        both = (a >> 1) & 1 and (a >> 3) & 1
        assert state.amplitudes[a] == pytest.approx(cmath.exp(0.7j) if both else 1)
    state = sv.random_state(4, 0)
    before = state.amplitudes.copy()
    sv.apply_controlled_phase(state, 0, 2, 0.0)
    assert np.array_equal(state.amplitudes, before)
    with pytest.raises(DomainError):
        sv.apply_controlled_phase(state, 2, 1, 0.1)
    with pytest.raises(DomainError):
        sv.apply_controlled_phase(state, 1, 4, 0.1)


def test_bit_reversal():
    out = sv.apply_bit_reversal(sv.basis_state(3, 1)).amplitudes
    assert out[4] == 1
    assert sv.apply_bit_reversal(sv.basis_state(3, 5)).amplitudes[5] == 1
    state = sv.random_state(6, 1)
    before = state.amplitudes.copy()
    sv.apply_bit_reversal(sv.apply_bit_reversal(state))
    assert np.array_equal(state.amplitudes, before)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 9), st.integers(0, 2**32 - 1), st.data())
def test_gates_preserve_norm_and_invert(s, seed, data):
    state = sv.random_state(s, seed)
    start = state.amplitudes.copy()
    j = data.draw(st.integers(0, s - 2))
    k = data.draw(st.integers(j + 1, s - 1))
    angle = data.draw(st.floats(-10, 10))
    for gate in (GateOp.hadamard(j), GateOp.controlled_phase(j, k, angle), GateOp.bit_reversal()):
        before = state.norm_squared()
        sv.apply_gate(state, gate)
        assert abs(state.norm_squared() - before) < 1e-12
        sv.apply_gate(state, gate.inverse())
        assert sv.max_deviation(state.amplitudes, start) < 1e-10


# -------------------------------------------------------------- QFT circuit


def test_qft_sequence_small_cases():
    one = sv.build_qft_gate_sequence(1)
    assert [g.kind for g in one] == [GateKind.HADAMARD, GateKind.BIT_REVERSAL]
    two = sv.build_qft_gate_sequence(2)
    assert two.operator_product() == "H_0 B_{0,1} H_1"
    assert [g.label() for g in two] == ["H_1", "B_{0,1}", "H_0", "T"]
    assert two.gates[1].angle == pytest.approx(math.pi / 2)
    five = sv.build_qft_gate_sequence(5)
    assert (five.hadamard_count, five.phase_count, five.reversal_count) == (5, 10, 1)
    with pytest.raises(DomainError):
        sv.build_qft_gate_sequence(0)


def test_phase_angles():
    seq = sv.build_qft_gate_sequence(6)
    for g in seq:
        if g.kind is GateKind.CONTROLLED_PHASE:
            assert g.angle == math.pi / 2 ** (g.k - g.j)


def test_s2_circuit_is_f4():
    # the written product read right-to-left gives the reversed transform; the final T fixes it
    U = sv.unitary_of(sv.build_qft_gate_sequence(2))
    np.testing.assert_allclose(U, dense_qft(2), atol=1e-14)
    np.testing.assert_allclose(U * 2, [[1, 1, 1, 1], [1, 1j, -1, -1j], [1, -1, 1, -1], [1, -1j, -1, 1j]], atol=1e-14)


@pytest.mark.parametrize("s", range(1, 8))
def test_qft_matches_entrywise_oracle(s):
    U = sv.unitary_of(sv.build_qft_gate_sequence(s))
    assert sv.max_deviation(U, dense_qft(s)) < 1e-12
    assert sv.max_deviation(sv.dft_matrix(1 << s), dense_qft(s)) < 1e-12


def test_qft_direct_examples():
    for s in (1, 3, 5):
        out = sv.qft_direct(sv.basis_state(s, 0)).amplitudes
        np.testing.assert_allclose(out, np.full(1 << s, 1 / math.sqrt(1 << s)), atol=1e-15)
    np.testing.assert_allclose(sv.qft_direct(sv.basis_state(1, 1)).amplitudes, [R2, -R2], atol=1e-15)
    np.testing.assert_allclose(sv.qft_direct(sv.basis_state(2, 1)).amplitudes, [0.5, 0.5j, -0.5, -0.5j], atol=1e-15)


@pytest.mark.parametrize("s", range(1, 11))
def test_gate_qft_equals_direct_on_random_states(s):
    rng = np.random.default_rng(100 + s)
    for _ in range(20):
        state = sv.random_state(s, rng)
        direct = sv.qft_direct(state)
        gated = sv.apply_qft(state.copy())
        assert sv.max_deviation(gated.amplitudes, direct.amplitudes) <= 1e-9
        assert abs(gated.norm_squared() - 1) < 1e-10


@pytest.mark.parametrize("s", range(1, 9))
def test_qft_unitary(s):
    U = sv.unitary_of(sv.build_qft_gate_sequence(s))
    assert sv.max_deviation(U.conj().T @ U, np.eye(1 << s)) <= 1e-9


@pytest.mark.parametrize("s", range(1, 7))
def test_qft_factorized_form(s):
    for a in range(1 << s):
        out = sv.apply_qft(sv.basis_state(s, a)).amplitudes
        assert sv.max_deviation(out, sv.qft_factorized(s, a)) <= 1e-10


def test_gate_counts_up_to_20():
    for s in range(1, 21):
        seq = sv.build_qft_gate_sequence(s)
        assert seq.elementary_count == s + s * (s - 1) // 2
        assert seq.total == seq.elementary_count + 1


def test_sequence_inverse_undoes_qft():
    state = sv.random_state(6, 9)
    before = state.amplitudes.copy()
    seq = sv.build_qft_gate_sequence(6)
    sv.apply_sequence(sv.apply_sequence(state, seq), seq.inverse())
    assert sv.max_deviation(state.amplitudes, before) < 1e-12


def test_batched_qft_rows_are_independent():
    rng = np.random.default_rng(4)
    batch = rng.normal(size=(7, 64)) + 1j * rng.normal(size=(7, 64))
    out = sv.qft_batch(batch)
    for i in range(7):
        single = sv.apply_qft(sv.QubitRegister(6, batch[i].copy())).amplitudes
        np.testing.assert_allclose(out[i], single, atol=1e-13)


# -------------------------------------------------------------- measurement


def test_measure_basis_state_is_certain():
    for a in (0, 3, 7):
        assert sv.measure_all(sv.basis_state(3, a), seed=123) == a
        assert set(sv.measure_all(sv.basis_state(3, a), seed=5, shots=100).tolist()) == {a}


def test_measure_uniform_frequencies():
    s = 3
    state = sv.apply_qft(sv.basis_state(s, 0))
    shots = 100_000
    counts = np.bincount(sv.measure_all(state, seed=2024, shots=shots), minlength=8)
    p = 1 / 8
    sigma = math.sqrt(shots * p * (1 - p))
    assert np.all(np.abs(counts - shots * p) <= 5 * sigma)


def test_measure_is_deterministic_under_seed():
    state = sv.random_state(5, 0)
    a = sv.measure_all(state, seed=77, shots=50)
    b = sv.measure_all(state, seed=77, shots=50)
    assert np.array_equal(a, b)


def test_measure_rejects_unnormalized():
    state = sv.basis_state(2, 1)
    state.amplitudes *= 2
    with pytest.raises(IntegrityError):
        sv.measure_all(state, seed=0)
