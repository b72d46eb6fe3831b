"""
Quantum Fourier transform from elementary gates
===============================================

Build the Hadamard / controlled-phase circuit, compare it with the DFT
matrix and count its gates.
"""

import numpy as np

from shorsim import statevector as sv

# the s=2 circuit, in the order the gates are applied
seq = sv.build_qft_gate_sequence(2)
print("applied:", " -> ".join(g.label() for g in seq))
print("as an operator product:", seq.operator_product(), "then T")

# its matrix is the 4-point DFT
U = sv.unitary_of(seq)
print(np.round(U * 2, 12))
print("deviation from F_4:", sv.max_deviation(U, sv.dft_matrix(4)))

# larger registers, checked on a random state
for s in (4, 8, 12):
    state = sv.random_state(s, seed=s)
    gated = sv.apply_qft(state.copy())
    direct = sv.qft_direct(state)
    seq = sv.build_qft_gate_sequence(s)
    print(f"s={s:2d}  gates={seq.elementary_count:3d}  max deviation={sv.max_deviation(gated.amplitudes, direct.amplitudes):.1e}")

# a basis state comes out as an unentangled product of single-qubit states
s, a = 3, 5
print("product form matches:", sv.max_deviation(sv.apply_qft(sv.basis_state(s, a)).amplitudes, sv.qft_factorized(s, a)) < 1e-12)
