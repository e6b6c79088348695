"""
How slowly (6,2) climbs
=======================

(r=6, s=2) has p_* = 1 but creeps towards it. Interval bounds locate where
p_k passes 0.7 without running the solver; a direct run confirms both ends.
"""

from choice_attach import ModelParams, pk_values
from choice_attach.verification import quadratic_threshold, sandwich_bounds

params = ModelParams(6, 2)
bounds = sandwich_bounds(params, 0.7, kmax=30_000_000, ks=[1])
print(f"upper bound certifies p_k < 0.7 up to k = {bounds.last_upper_below}")
print(f"lower bound certifies p_k > 0.7 from k = {bounds.first_lower_above}")

table = pk_values(params, [213_778, 291_000, 292_000, 24_864_713])
for k in table.k:
    print(f"p_{k} = {table.p_at(int(k)):.6f}")

print(f"quadratic decay is guaranteed once q_k < 1/{1 / quadratic_threshold(params):.0f}")
