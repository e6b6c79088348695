"""
When does a hub form?
=====================

p_* is the smallest root of B(p) - 2p + 1 on (0, 1], found with exact
integer arithmetic and Sturm sequences. If p_* < 1 a single vertex ends up
holding a positive share of all edges. r(s) is the smallest r for which this
happens at rank s.
"""

from choice_attach import ModelParams, classify_tail, pstar, threshold_r

for r, s in [(2, 1), (3, 1), (6, 2), (7, 2), (9, 3), (10, 3)]:
    res = pstar(ModelParams(r, s))
    lo, hi = res.bracket if res.bracket else (None, None)
    where = f"in [{float(lo):.12f}, {float(hi):.12f}]" if lo is not None else ""
    print(f"(r={r}, s={s}): p_* {res.kind.value} {where}  -> {classify_tail(ModelParams(r, s)).value}")

print()
print("s  r(s)  r(s)/s")
for s in range(1, 11):
    r = threshold_r(s)
    print(f"{s:<2} {r:<5} {r / s:.2f}")
