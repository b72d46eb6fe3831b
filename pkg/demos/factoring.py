"""
Factoring small numbers
=======================

Draw random bases, find their orders and turn a square root of one into
a divisor.
"""

from shorsim import factor
from shorsim.numtheory import order_bruteforce
from shorsim.postprocess import nontrivial_sqrt_to_factor

# by hand for 21 with m = 2
r = order_bruteforce(2, 21)
b = pow(2, r // 2, 21)
print(f"order of 2 mod 21 is {r}; 2^{r // 2} = {b}; divisors {nontrivial_sqrt_to_factor(b, 21)}")

# the full driver, with its attempt log
for N in (15, 21, 33, 35, 39, 51, 55):
    outcome = factor(N, seed=3)
    steps = ", ".join(f"m={a.m}:{a.result}" for a in outcome.attempts)
    print(f"{N} = {outcome.factors[0]} x {outcome.factors[1]}  [{outcome.method}]  {steps}")

# inputs handled before any order finding
for N in (14, 27, 49):
    outcome = factor(N)
    print(f"{N} = {outcome.factors[0]} x {outcome.factors[1]}  [{outcome.method}]")
