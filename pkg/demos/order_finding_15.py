"""
Order finding for N = 15, m = 7
===============================

Walk through the quantum steps on the state vector, look at the
measurement statistics and recover the order from a sample.
"""

import numpy as np

from shorsim import shor
from shorsim.numtheory import continued_fraction
from shorsim.postprocess import find_order, recover_order

params = shor.make_parameters(15, 7)
print(f"q = {params.q} (s = {params.s}),  N1 = {params.N1} (l = {params.l})")

# uniform superposition, then |a>|7^a mod 15>
state = shor.prepare_superposition(params)
state = shor.entangle_modular_exponentiation(state)
print("occupied second-register values:", state.occupied_columns().tolist())

# Fourier transform of the first register; the outcome mass sits on four peaks
state = shor.apply_qft_first_register(state)
marginal = (np.abs(state.grid) ** 2).sum(axis=1)
peaks = np.flatnonzero(marginal > 1e-9)
print("peaks:", peaks.tolist(), "each with probability", marginal[peaks].round(12).tolist())

# the closed form gives the same numbers without building the state
closed = shor.outcome_distribution(params, "closed-form").marginal_c()
print("closed form agrees:", np.max(np.abs(closed - marginal)) < 1e-12)

# each peak c gives a continued fraction for c/q
for c in peaks.tolist():
    conv = continued_fraction(c, params.q).convergents
    print(f"c={c:3d}  convergents {conv}  -> order {recover_order(c, params)}")

# repeating until a candidate verifies
search = find_order(15, 7, seed=1)
print(f"found r = {search.order} after {search.repetitions} run(s):", [run.sample for run in search.runs])
