"""
The limit sequence p_k
======================

p_k is the limiting chance that one preferential draw lands on a vertex of
degree at most k. Here it is for plain preferential attachment, greedy
max-of-two and min-of-two, side by side.
"""

import numpy as np

from choice_attach import ModelParams, Repr, pk_sequence

cases = {"plain (1,1)": ModelParams(1, 1), "max-of-2 (2,1)": ModelParams(2, 1),
         "min-of-2 (2,2)": ModelParams(2, 2)}
tables = {name: pk_sequence(p, 12) for name, p in cases.items()}

print(f"{'k':>3} " + " ".join(f"{name:>16}" for name in tables))
for k in range(13):
    print(f"{k:>3} " + " ".join(f"{t.q[k]:16.3e}" for t in tables.values()))

# plain PA has p_k = k/(k+2), so 1 - p_k decays like 2/k
assert np.allclose(tables["plain (1,1)"].p, np.arange(13) / (np.arange(13) + 2))

# min-of-2 collapses fast: log q_k roughly doubles each step once it is small
deep = pk_sequence(ModelParams(2, 2), 30)
for k in (10, 20, 30):
    print(f"(2,2) k={k}: log q_k = {deep.log_q[k]:.1f} ({Repr(int(deep.repr[k])).label})")
