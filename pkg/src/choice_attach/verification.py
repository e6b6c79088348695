"""Checks of the simulator against the recurrence, and numeric tail diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _numeric
from .kernel import ModelParams, Sampling, brs_eval, comb_row, deriv_coef, tail_polynomial
from .recurrence import DEFAULT_TOL, PkTable, TailClass, classify_tail, pk_sequence
from .simulator import TreeState, _frozen_trials, census, run_sim

SIGMAS = 4.0


def within_sigmas(observed: float, expected: float, n: int, sigmas: float = SIGMAS) -> bool:
    """|observed - expected| < sigmas * binomial standard error (exact match if the error is 0)."""
    sd = math.sqrt(expected * (1.0 - expected) / n)
    if sd == 0.0:
        return observed == expected
    return abs(observed - expected) < sigmas * sd


# ---------------------------------------------------------------------------
# one-step transition law of F_m(k)


@dataclass
class TransitionRow:
    delta: int
    expected: float
    observed: float
    sigma: float
    passed: bool


@dataclass
class TransitionReport:
    m: int
    k: int
    trials: int
    rows: list[TransitionRow]

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)


def transition_probabilities(state: TreeState, k: int) -> tuple[float, float, float]:
    """P(ΔF(k) = 1), P(ΔF(k) = 1-k), P(ΔF(k) = 2) at the current state."""
    c = census(state, max(k, 1))
    two_m = 2.0 * state.m
    b_k = brs_eval(state.params, c.F[k] / two_m)
    b_km1 = brs_eval(state.params, c.F[k - 1] / two_m) if k >= 1 else 0.0
    return 1.0 - b_k, b_k - b_km1, b_km1


def transition_frequency_test(state: TreeState, k: int, trials: int, seed: int = 0) -> TransitionReport:
    """Replay one step from a frozen copy of ``state`` many times and tally ΔF(k).

    The tree is restored from a snapshot before every trial; the trials draw
    from their own generator seeded with ``seed`` so they are independent.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if trials < 1:
        raise ValueError("trials must be positive")
    if int(state.degrees.sum(dtype=np.int64)) != 2 * state.m:
        raise ValueError("state is inconsistent (degree sum != 2m); was it mutated?")
    deg = state.degrees.copy()
    ends = state.endpoints.copy()
    rng = np.random.default_rng(seed)
    p = state.params
    counts = _frozen_trials(deg, ends, state.m, trials, p.r, p.s,
                            p.sampling is Sampling.ALL_DISTINCT, rng, k)
    expected = transition_probabilities(state, k)
    rows = []
    for delta, e, c in zip((1, 1 - k, 2), expected, counts):
        obs = c / trials
        rows.append(TransitionRow(delta, e, obs, math.sqrt(e * (1 - e) / trials),
                                  within_sigmas(obs, e, trials)))
    return TransitionReport(state.m, k, trials, rows)


# ---------------------------------------------------------------------------
# F_m(k)/2m -> p_k


@dataclass
class ConvergenceRow:
    k: int
    p_theory: float
    p_empirical: float
    stderr: float
    gap: float


@dataclass
class ConvergenceReport:
    params: ModelParams
    steps: int
    seeds: list[int]
    rows: list[ConvergenceRow]
    max_degree_fraction: float
    """Seed mean of max_degree / 2m at the final time."""
    pm_estimate: float
    """Seed mean of the all-distinct first-tuple fraction."""

    def gap(self, k: int) -> float:
        return self.rows[k - 1].gap


def convergence_report(params: ModelParams, steps: int, n_seeds: int, kmax: int,
                       tol: float = DEFAULT_TOL, base_seed: int = 0) -> ConvergenceReport:
    """Seed-averaged F_m(k)/2m at m = 1 + steps against p_k, k = 1..kmax."""
    if n_seeds < 1:
        raise ValueError("n_seeds must be >= 1")
    seeds = [base_seed + i for i in range(n_seeds)]
    final = 1 + steps
    fracs = np.empty((n_seeds, kmax + 1))
    maxfrac = np.empty(n_seeds)
    pm = np.empty(n_seeds)
    for i, seed in enumerate(seeds):
        sim = run_sim(params, steps, seed, checkpoints=[final], kmax=kmax)
        c = sim.checkpoints[-1]
        fracs[i] = c.F / (2.0 * c.m)
        maxfrac[i] = c.max_degree / (2.0 * c.m)
        pm[i] = sim.pm_estimate
    table = pk_sequence(params, kmax, tol)
    mean = fracs.mean(axis=0)
    se = fracs.std(axis=0, ddof=1) / math.sqrt(n_seeds) if n_seeds > 1 else np.full(kmax + 1, np.nan)
    rows = [ConvergenceRow(k, float(table.p[k]), float(mean[k]), float(se[k]),
                           abs(float(mean[k]) - float(table.p[k])))
            for k in range(1, kmax + 1)]
    return ConvergenceReport(params, steps, seeds, rows, float(maxfrac.mean()), float(pm.mean()))


# ---------------------------------------------------------------------------
# doubly-exponential tail


@dataclass
class TailRatios:
    k: np.ndarray
    ratio: np.ndarray
    """log q_{k+1} / log q_k."""
    s: int
    band: float = 0.1

    @property
    def in_band(self) -> np.ndarray:
        return np.abs(self.ratio - self.s) <= self.band

    @property
    def entry_k(self) -> int | None:
        """First k after which every ratio stays within s ± band."""
        ok = self.in_band
        if not ok.size or not ok[-1]:
            return None
        bad = np.flatnonzero(~ok)
        return int(self.k[0] if bad.size == 0 else self.k[bad[-1] + 1])


def tail_ratio_diagnostic(table: PkTable, s: int | None = None, band: float = 0.1) -> TailRatios:
    s = table.params.s if s is None else s
    if classify_tail(table.params) is not TailClass.DOUBLY_EXPONENTIAL:
        raise ValueError(f"{table.params} does not have a doubly-exponential tail")
    if len(table) < 3:
        raise ValueError("table too short for tail ratios")
    if not np.all(np.diff(table.k) == 1):
        raise ValueError("tail ratios need consecutive k")
    logq = table.log_q
    # q_0 = 1 has log 0; start at k = 1
    ks = table.k[1:-1]
    ratio = logq[2:] / logq[1:-1]
    return TailRatios(ks, ratio, s, band)


@dataclass
class RecurrenceBoundCheck:
    """q_k < ((k+1)/2) C(r,s) q_{k-1}^s over the tabulated k > k0, compared in logs.

    The true margin is a relative O(q_k) effect, so once q_k is far below
    machine epsilon the two sides round to the same double (and LogSpace rows
    are equal by construction). Those rows are counted as ``ties``; only a
    left side above the bound by more than rounding is a violation.
    """

    k0: int
    checked: np.ndarray
    strict: list[int]
    ties: list[int]
    violations: list[int]

    @property
    def passed(self) -> bool:
        return not self.violations


def recurrence_bound_check(table: PkTable, k0: int, rel_slack: float = 1e-13) -> RecurrenceBoundCheck:
    params = table.params
    c = math.log(math.comb(params.r, params.s) / 2.0)
    k = table.k[1:]
    lhs = table.log_q[1:]
    rhs = np.log(k + 1.0) + c + params.s * table.log_q[:-1]
    slack = rel_slack * np.maximum(np.abs(rhs), 1.0)
    after = k > k0
    strict = after & (lhs < rhs - slack)
    bad = after & (lhs > rhs + slack)
    tie = after & ~strict & ~bad
    return RecurrenceBoundCheck(k0, k[after], [int(x) for x in k[strict]],
                                [int(x) for x in k[tie]], [int(x) for x in k[bad]])


# ---------------------------------------------------------------------------
# greedy r=2, s=1


@dataclass
class GreedySeries:
    k: np.ndarray
    p: np.ndarray
    a: np.ndarray
    """a_k = (1 - p_k) log(k+1)."""
    lower_band_violations: list[int] = field(default_factory=list)
    """k >= 2 with p_k <= 1 - 2/log(k+1)."""
    band_violations: list[int] = field(default_factory=list)
    """k > 100 with a_k outside (1, 2)."""


def greedy_asymptotic_series(kmax: int) -> GreedySeries:
    params = ModelParams(2, 1)
    table = pk_sequence(params, kmax)
    k = table.k
    a = table.q * np.log(k + 1.0)
    with np.errstate(divide="ignore"):
        low = (k >= 2) & ~(table.p > 1.0 - 2.0 / np.log(k + 1.0))
    band = (k > 100) & ~((a > 1.0) & (a < 2.0))
    return GreedySeries(k, table.p, a, [int(x) for x in k[low]], [int(x) for x in k[band]])


# ---------------------------------------------------------------------------
# q_{k+1} < ((k-1)/k)^2 q_k below a threshold


@dataclass
class QuadraticDecayReport:
    threshold: float
    checked: list[int]
    violations: list[int]

    @property
    def passed(self) -> bool:
        return not self.violations


def quadratic_threshold(params: ModelParams) -> float:
    """(sum_{i=s}^r (2i+1) max(a_i, 0))^(-1/(s-1)), a_i the tail coefficients."""
    if params.s < 2:
        raise ValueError("defined for s >= 2")
    a = tail_polynomial(params)
    total = sum((2 * i + 1) * max(a[i], 0) for i in range(params.s, params.r + 1))
    return total ** (-1.0 / (params.s - 1))


def quadratic_decay_check(table: PkTable, params: ModelParams | None = None,
                          threshold: float | None = None) -> QuadraticDecayReport:
    params = table.params if params is None else params
    thr = quadratic_threshold(params) if threshold is None else threshold
    checked, bad = [], []
    for i in range(len(table) - 1):
        k = int(table.k[i])
        if k < 4 or table.k[i + 1] != k + 1:
            continue
        if table.q[i] < thr:
            checked.append(k)
            # compare in logs so LogSpace rows are handled too
            if not table.log_q[i + 1] < 2.0 * math.log((k - 1) / k) + table.log_q[i]:
                bad.append(k)
    return QuadraticDecayReport(thr, checked, bad)


# ---------------------------------------------------------------------------
# interval enclosure of p_k below a cap


@dataclass
class SandwichBounds:
    k: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    """NaN once the upper bound has reached the cap."""
    cap: float
    last_upper_below: int
    """Largest k whose upper bound is still below the cap: p_k < cap is certified."""
    first_lower_above: int
    """First k whose lower bound exceeds the cap: p_k > cap is certified (-1 if not reached)."""


def monotone_limit(params: ModelParams) -> float:
    """Right end of the interval where h_k(x) = k B'(x) + 2 is increasing."""
    if params.s == 1:
        return 1.0
    return (params.r - params.s) / (params.r - 1)


def sandwich_bounds(params: ModelParams, p_cap: float = 0.7, kmax: int = 10**5, ks=None) -> SandwichBounds:
    """Lower and upper sequences around p_k built from f(p)/h_k(cap) < p_k - p_{k-1} < f(p)/h_k(p).

    The lower sequence runs until it passes the cap; the upper one stops once
    it reaches it. ``ks`` selects which indices to keep (default: all).
    """
    if not 0.0 < p_cap <= monotone_limit(params):
        raise ValueError(f"p_cap must lie in (0, {monotone_limit(params)}] where h_k is increasing")
    record = np.arange(kmax + 1) if ks is None else np.unique(np.asarray(ks, dtype=np.int64))
    record = record[record <= kmax]
    lo = np.full(record.size, np.nan)
    hi = np.full(record.size, np.nan)
    last_hi, first_lo = _numeric.sandwich(params.r, params.s, comb_row(params), deriv_coef(params),
                                          kmax, p_cap, record, lo, hi)
    return SandwichBounds(record, lo, hi, p_cap, int(last_hi), int(first_lo))
