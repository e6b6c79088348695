"""Acceptance criteria, one test each, at the stated tolerances.

Every test records a PASS/FAIL line that is printed in the terminal summary.
"""

import math
import time
from fractions import Fraction

import numpy as np

from choice_attach import (
    ModelParams,
    PStarKind,
    Sampling,
    cutoff_k0,
    new_tree,
    pk_sequence,
    pk_values,
    pstar,
    run_sim,
    threshold_r,
    transition_frequency_test,
)
from choice_attach import recurrence
from choice_attach.simulator import advance
from choice_attach.verification import (
    convergence_report,
    greedy_asymptotic_series,
    recurrence_bound_check,
    tail_ratio_diagnostic,
)

from ._verdicts import record


def test_criterion_01_cutoff_table():
    published = {(2, 2): (4, 0.7761155642), (3, 2): (18, 0.9793382628),
                 (4, 2): (98, 0.9977982955), (5, 2): (2416, 0.9999471884)}
    t0 = time.perf_counter()
    got = {rs: cutoff_k0(ModelParams(*rs)) for rs in published}
    elapsed = time.perf_counter() - t0
    bad = []
    for rs, (k0, p) in published.items():
        res = got[rs]
        if res.k0 != k0 or abs(res.p_k0 - p) > 1e-8:
            bad.append(f"{rs}: k0={res.k0} p={res.p_k0:.13f} vs {p} (diff {res.p_k0 - p:.2e})")
    ok = not bad and elapsed < 10
    record(1, ok, f"cutoff table, {elapsed:.2f}s" + ("; " + "; ".join(bad) if bad else ""))
    assert ok, bad


def test_criterion_02_thresholds():
    recurrence._pstar.cache_clear()
    t0 = time.perf_counter()
    values = [threshold_r(s) for s in range(1, 11)]
    elapsed = time.perf_counter() - t0
    ok = values[:3] == [3, 7, 10] and all(r >= 2 * s for s, r in enumerate(values, 1)) and elapsed < 60
    record(2, ok, f"r(1..10) = {values}, {elapsed:.2f}s")
    assert ok


def test_criterion_03_six_two_crossing():
    t0 = time.perf_counter()
    table = pk_values(ModelParams(6, 2), [213778, 24864713])
    elapsed = time.perf_counter() - t0
    lo, hi = table.p_at(213778), table.p_at(24864713)
    ok = lo < 0.7 < hi and elapsed < 300
    record(3, ok, f"p_213778={lo:.6f} < 0.7 < p_24864713={hi:.6f}, {elapsed:.1f}s")
    assert ok


def _bisect_golden():
    # independent oracle: exact rational bisection of p^2 + p - 1 on (0, 1)
    lo, hi = Fraction(0), Fraction(1)
    while hi - lo > Fraction(1, 10**15):
        mid = (lo + hi) / 2
        if mid * mid + mid - 1 < 0:
            lo = mid
        else:
            hi = mid
    return float(lo)


def test_criterion_04_pstar():
    a = pstar(ModelParams(2, 1))
    b = pstar(ModelParams(3, 1))
    c = pstar(ModelParams(7, 2))
    oracle = _bisect_golden()
    ok = (a.kind is PStarKind.ONE and b.kind is PStarKind.ROOT and abs(b.value - oracle) < 1e-9
          and abs(b.value - 0.6180339887) < 1e-9 and c.kind is PStarKind.ROOT and 0.55 < c.value < 0.56)
    record(4, ok, f"(2,1) {a.kind.value}; (3,1) {b.value:.12f} (oracle {oracle:.12f}); (7,2) {c.value:.6f}")
    assert ok


def test_criterion_05_greedy_band():
    t0 = time.perf_counter()
    series = greedy_asymptotic_series(10**6)
    fast = pk_sequence(ModelParams(2, 1), 10**4)
    slow = pk_sequence(ModelParams(2, 1), 10**4, greedy_fast_path=False)
    agree = float(np.max(np.abs(fast.p - slow.p)))
    elapsed = time.perf_counter() - t0
    ok = (not series.lower_band_violations and not series.band_violations
          and agree < 1e-10 and elapsed < 30)
    record(5, ok, f"band violations {len(series.lower_band_violations)}/{len(series.band_violations)}, "
                  f"a_1e6={series.a[-1]:.4f}, route gap {agree:.1e}, {elapsed:.1f}s")
    assert ok


def test_criterion_06_doubly_exponential():
    details, ok = [], True
    for r, k0 in ((2, 4), (3, 18)):
        table = pk_sequence(ModelParams(r, 2), 41)
        ratios = tail_ratio_diagnostic(table)
        sel = (ratios.k >= 20) & (ratios.k <= 40)
        outside = ratios.k[sel][np.abs(ratios.ratio[sel] - 2.0) > 0.1]
        bound = recurrence_bound_check(table, k0)
        ok &= outside.size == 0 and bound.passed
        worst = ratios.ratio[sel][np.argmax(np.abs(ratios.ratio[sel] - 2))]
        details.append(f"({r},2) ratios outside [1.9,2.1] at k={outside.tolist()} (worst {worst:.3f}), "
                       f"bound violations {bound.violations}")
    record(6, ok, "; ".join(details))
    assert ok, details


def test_criterion_07_transition_law():
    state = new_tree(ModelParams(2, 2), seed=2024)
    advance(state, 998)
    assert state.n_vertices == 1000
    report = transition_frequency_test(state, 3, 10**6, seed=7)
    start = transition_frequency_test(new_tree(ModelParams(2, 2), seed=0), 1, 10**4)
    zero = next(row for row in start.rows if row.delta == 0)
    ok = report.passed and zero.observed == 1.0
    worst = max(abs(r.observed - r.expected) / r.sigma for r in report.rows if r.sigma > 0)
    record(7, ok, f"1e6 trials, worst deviation {worst:.2f} sigma; m=1 dF(1)=0 freq {zero.observed}")
    assert ok


def test_criterion_08_convergence():
    t0 = time.perf_counter()
    a = convergence_report(ModelParams(2, 2), 200_000, 32, 6)
    b = convergence_report(ModelParams(1, 1), 200_000, 32, 6)
    elapsed = time.perf_counter() - t0
    gap_a = max(row.gap for row in a.rows)
    gap_b = max(abs(row.p_empirical - row.k / (row.k + 2)) for row in b.rows)
    ok = gap_a < 0.005 and gap_b < 0.01 and elapsed < 300
    record(8, ok, f"(2,2) max gap {gap_a:.1e}, (1,1) max gap {gap_b:.1e}, {elapsed:.1f}s")
    assert ok


def test_criterion_09_condensation():
    params = ModelParams(3, 1)
    tails, hubs = [], []
    for seed in range(16):
        sim = run_sim(params, 100_000, seed, checkpoints=[100_001], kmax=20)
        c = sim.checkpoints[-1]
        tails.append(1 - c.fraction(20))
        hubs.append(c.max_degree / (2 * c.m))
    theory = 1 - pk_sequence(params, 20).p[20]
    gap = abs(np.mean(tails) - theory)
    ok = gap < 0.03 and np.mean(hubs) > 0.1
    record(9, ok, f"1-F(20)/2m={np.mean(tails):.4f} vs 1-p_20={theory:.4f}, hub fraction {np.mean(hubs):.3f}")
    assert ok


def test_criterion_10_without_replacement():
    rep = convergence_report(ModelParams(2, 2, Sampling.ALL_DISTINCT), 100_000, 16, 4)
    gap = max(row.gap for row in rep.rows)
    ok = rep.pm_estimate > 0.99 and gap < 0.01
    record(10, ok, f"pm_estimate {rep.pm_estimate:.5f}, max gap {gap:.1e}")
    assert ok


def test_criterion_11_max_degree_ordering():
    medians = {}
    for rs in ((2, 2), (1, 1), (2, 1)):
        maxima = [run_sim(ModelParams(*rs), 198, seed, checkpoints=[199]).checkpoints[-1].max_degree
                  for seed in range(50)]
        medians[rs] = float(np.median(maxima))
    ok = medians[(2, 2)] < medians[(1, 1)] < medians[(2, 1)]
    record(11, ok, "median max degree at 200 vertices: " +
           ", ".join(f"{rs}={v:g}" for rs, v in medians.items()))
    assert ok
