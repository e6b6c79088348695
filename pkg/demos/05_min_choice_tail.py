"""
Doubly-exponential tails for min-choice
=======================================

The cutoff k0 marks where q_k has become small enough for the squaring to
take over. Past it, the ratio log q_{k+1} / log q_k settles near s.
"""

import numpy as np

from choice_attach import ModelParams, cutoff_k0, pk_sequence
from choice_attach.verification import recurrence_bound_check, tail_ratio_diagnostic

for r in (2, 3, 4, 5):
    res = cutoff_k0(ModelParams(r, 2))
    print(f"(r={r}, s=2): k0={res.k0}  p_k0={res.p_k0:.12f}")

for r, k0 in ((2, 4), (3, 18)):
    table = pk_sequence(ModelParams(r, 2), 45)
    ratios = tail_ratio_diagnostic(table)
    print(f"(r={r}, s=2) ratios for k=18..26:", np.round(ratios.ratio[17:26], 3))
    print(f"  stays within 2 +/- 0.1 from k={ratios.entry_k}")
    check = recurrence_bound_check(table, k0)
    print(f"  bound after k0: {len(check.strict)} strict, {len(check.ties)} equal to rounding, "
          f"{len(check.violations)} violated")
