"""
Checking the probability and counting bounds
============================================

Run the verification harness and print each report.
"""

from shorsim import analysis

reports = [
    analysis.gate_count_report(range(1, 11)),
    analysis.verify_peak_bound(),
    analysis.verify_success_probability(),
    analysis.verify_good_base_fraction(),
    analysis.verify_convergent_property(cases=2000),
]
for rep in reports:
    print(rep.render_text())
    print()

# the good-base fractions behind the factoring success rate
for N in analysis.GOOD_BASE_SUITE:
    print(N, analysis.good_base_fraction(N))
