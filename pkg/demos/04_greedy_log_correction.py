"""
Max-of-two: a logarithmic correction
====================================

For r=2, s=1 the step has a closed form, and (1 - p_k) log(k+1) creeps
slowly upward. It stays between 1 and 2 on the whole computed range.
"""

from choice_attach.verification import greedy_asymptotic_series

series = greedy_asymptotic_series(10**6)
for k in (2, 10, 100, 10**3, 10**4, 10**5, 10**6):
    print(f"k={k:>8}  p_k={series.p[k]:.8f}  (1-p_k) log(k+1) = {series.a[k]:.5f}")
print("lower band violations:", series.lower_band_violations)
print("band violations past k=100:", series.band_violations)
