"""The limit sequence p_k, its limit p_*, the threshold r(s) and the k_0 cutoff.

``p_k`` is the limiting probability that one preferential draw lands on a
vertex of degree at most k. It solves ``f_k(p_k, p_{k-1}) = 0`` with
``p_0 = 0`` where

    f_k(x, p) = (k+1) B(p) - k B(x) - 2x + 1.

Near 1 the sequence is tracked through ``q_k = 1 - p_k`` instead, and once
``q_k`` drops below 1e-150 only ``log q_k`` is kept.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from . import _numeric
from .errors import ConvergenceError, NotFoundError
from .kernel import (
    ModelParams,
    _check_unit,
    binom_exact,
    brs_eval,
    brs_polynomial,
    comb_row,
    deriv_coef,
    tail_eval,
)
from .polynomial import IntegerPolynomial, count_roots, sign_changes, squarefree_part, sturm_sequence

DEFAULT_TOL = 1e-13
MAX_ITER = 200
PSTAR_WIDTH = Fraction(1, 10**12)


class Repr(enum.IntEnum):
    DIRECT = _numeric.DIRECT
    LOGSPACE = _numeric.LOGSPACE

    @property
    def label(self) -> str:
        return "Direct" if self is Repr.DIRECT else "LogSpace"


# ---------------------------------------------------------------------------
# single steps


def f_k_eval(params: ModelParams, k: int, x: float, p: float) -> float:
    x = _check_unit(x, "x")
    p = _check_unit(p, "p")
    return (k + 1) * brs_eval(params, p) - k * brs_eval(params, x) - 2.0 * x + 1.0


def g_k_eval(params: ModelParams, k: int, y: float, q: float) -> float:
    """f_k(1-y, 1-q) written with tail probabilities."""
    return k * tail_eval(params, y) - (k + 1) * tail_eval(params, q) + 2.0 * y


def next_pk(params: ModelParams, k: int, p_prev: float, tol: float = DEFAULT_TOL) -> float:
    """The unique x in (0, 1) with f_k(x, p_prev) = 0."""
    if k < 1:
        raise ValueError("next_pk needs k >= 1")
    p_prev = _check_unit(p_prev, "p_prev")
    if p_prev >= 1.0:
        raise ValueError("p_prev must lie in [0, 1)")
    x, it = _numeric.solve_p(params.r, params.s, comb_row(params), deriv_coef(params),
                             k, p_prev, tol, MAX_ITER)
    if it < 0 or abs(f_k_eval(params, k, x, p_prev)) > tol * (k + 2):
        raise ConvergenceError(f"p-space solve failed for {params} at k={k}", k=k)
    return float(x)


def next_qk(params: ModelParams, k: int, q_prev: float, tol: float = DEFAULT_TOL) -> float:
    """The y in (0, 1) with g_k(y, q_prev) = 0, i.e. 1 - next_pk(1 - q_prev)."""
    if k < 1:
        raise ValueError("next_qk needs k >= 1")
    q_prev = _check_unit(q_prev, "q_prev")
    if q_prev <= 0.0:
        raise ValueError("q_prev must lie in (0, 1]")
    lead = math.log(binom_exact(params.r, params.s) / 2.0)
    if params.s >= 2 and _numeric.next_step_underflows(params.s, lead, k - 1, math.log(q_prev)):
        raise ConvergenceError(f"q_k underflows at k={k}; switch to log space", k=k)
    y, it = _numeric.solve_q(params.r, params.s, comb_row(params), deriv_coef(params),
                             k, q_prev, tol, MAX_ITER)
    if it < 0:
        raise ConvergenceError(f"q-space solve failed for {params} at k={k}", k=k)
    if y < np.finfo(float).tiny:
        raise ConvergenceError(f"q_k underflows at k={k}; switch to log space", k=k)
    return float(y)


def greedy_pk_step(k: int, p_prev: float) -> float:
    """Closed-form step for r=2, s=1: (p_k + 1/k)^2 = (k+1)(k p_{k-1}^2 + 1)/k^2."""
    if k < 1:
        raise ValueError("greedy_pk_step needs k >= 1")
    return math.sqrt((k + 1) * (k * p_prev * p_prev + 1)) / k - 1.0 / k


# ---------------------------------------------------------------------------
# whole sequences


@dataclass
class PkTable:
    """Rows k -> (p_k, q_k, representation, log q_k, residual).

    Rows are stored column-wise as numpy arrays. ``k`` is usually 0..kmax but
    :func:`pk_values` returns only selected indices.
    """

    params: ModelParams
    tol: float
    k: np.ndarray
    p: np.ndarray
    q: np.ndarray
    log_q: np.ndarray
    repr: np.ndarray
    residual: np.ndarray

    def __len__(self):
        return len(self.k)

    def rows(self) -> Iterator[tuple[int, float, float, Repr, float, float]]:
        for i in range(len(self.k)):
            yield (int(self.k[i]), float(self.p[i]), float(self.q[i]), Repr(int(self.repr[i])),
                   float(self.log_q[i]), float(self.residual[i]))

    def index_of(self, k: int) -> int:
        i = int(np.searchsorted(self.k, k))
        if i >= len(self.k) or self.k[i] != k:
            raise KeyError(k)
        return i

    def p_at(self, k: int) -> float:
        return float(self.p[self.index_of(k)])

    def q_at(self, k: int) -> float:
        return float(self.q[self.index_of(k)])

    def log_q_at(self, k: int) -> float:
        return float(self.log_q[self.index_of(k)])

    @property
    def direct(self) -> np.ndarray:
        return self.repr == Repr.DIRECT


def _use_greedy(params: ModelParams, greedy_fast_path: bool) -> bool:
    return greedy_fast_path and params.r == 2 and params.s == 1


def pk_values(params: ModelParams, ks: Sequence[int], tol: float = DEFAULT_TOL,
              greedy_fast_path: bool = True) -> PkTable:
    """Iterate the recurrence to max(ks) and keep only the rows in ``ks``.

    This is what to use for very deep k (tens of millions) where holding the
    full table would be wasteful.
    """
    record = np.unique(np.asarray(ks, dtype=np.int64))
    if record.size == 0:
        raise ValueError("no indices requested")
    if record[0] < 0:
        raise ValueError("indices must be non-negative")
    kmax = int(record[-1])
    n = record.size
    out_p = np.empty(n)
    out_q = np.empty(n)
    out_logq = np.empty(n)
    out_repr = np.empty(n, dtype=np.int8)
    out_res = np.empty(n)
    status = _numeric.iterate(
        params.r, params.s, comb_row(params), deriv_coef(params), float(binom_exact(params.r, params.s)),
        kmax, tol, MAX_ITER, _use_greedy(params, greedy_fast_path), record,
        out_p, out_q, out_logq, out_repr, out_res,
    )
    if status:
        raise ConvergenceError(f"recurrence solve failed for {params} at k={status}", k=status)
    return PkTable(params, tol, record, out_p, out_q, out_logq, out_repr, out_res)


def pk_sequence(params: ModelParams, kmax: int, tol: float = DEFAULT_TOL,
                greedy_fast_path: bool = True) -> PkTable:
    """p_0 .. p_kmax."""
    if kmax < 0:
        raise ValueError("kmax must be >= 0")
    return pk_values(params, np.arange(kmax + 1), tol, greedy_fast_path)


# ---------------------------------------------------------------------------
# the limit p_*


class PStarKind(enum.Enum):
    ONE = "One"
    ROOT = "Root"


@dataclass(frozen=True)
class PStarResult:
    kind: PStarKind
    value: float
    bracket: tuple[Fraction, Fraction] | None
    certificate: tuple[int, int]
    """Sturm sign changes of the reduced polynomial at 0 and at 1."""
    reduced: IntegerPolynomial

    @property
    def n_roots(self) -> int:
        """Distinct roots of B(p) - 2p + 1 in (0, 1)."""
        return self.certificate[0] - self.certificate[1]


def fixed_point_polynomial(params: ModelParams) -> IntegerPolynomial:
    """B_{r,s}(p) - 2p + 1 as an exact polynomial."""
    return brs_polynomial(params) + IntegerPolynomial([1, -2])


def _reduce(f: IntegerPolynomial) -> IntegerPolynomial:
    one = IntegerPolynomial([-1, 1])
    while f.degree > 0 and f(1) == 0:
        f = f.exact_div(one)
    return squarefree_part(f)


@lru_cache(maxsize=None)
def _pstar(r: int, s: int) -> PStarResult:
    f = fixed_point_polynomial(ModelParams(r, s))
    g = _reduce(f)
    if g.degree <= 0:
        return PStarResult(PStarKind.ONE, 1.0, None, (0, 0), g)
    chain = sturm_sequence(g)
    v0 = sign_changes(chain, 0)
    v1 = sign_changes(chain, 1)
    if v0 == v1:
        return PStarResult(PStarKind.ONE, 1.0, None, (v0, v1), g)
    # g(0) = 1, so 0 is never a root and the left end stays a non-root
    lo, hi = Fraction(0), Fraction(1)
    while hi - lo >= PSTAR_WIDTH:
        mid = (lo + hi) / 2
        if g.sign_at(mid) == 0 and count_roots(chain, lo, mid) == 1:
            lo = hi = mid
            break
        if count_roots(chain, lo, mid) >= 1:
            hi = mid
        else:
            lo = mid
    value = float((lo + hi) / 2)
    return PStarResult(PStarKind.ROOT, value, (lo, hi), (v0, v1), g)


def pstar(params: ModelParams) -> PStarResult:
    """Smallest root of B(p) - 2p + 1 in (0, 1), or ONE if there is none."""
    return _pstar(params.r, params.s)


def threshold_r(s: int, r_cap: int | None = None) -> int:
    """Smallest r with p_* < 1 for this s."""
    if s < 1:
        raise ValueError("s must be >= 1")
    if r_cap is None:
        r_cap = 4 * s + 64
    if r_cap < 2 * s:
        raise ValueError("r_cap must be at least 2s")
    for r in range(s, min(r_cap, 64) + 1):
        if pstar(ModelParams(r, s)).kind is PStarKind.ROOT:
            return r
    raise NotFoundError(f"no r <= {r_cap} gives p_* < 1 for s={s}")


# ---------------------------------------------------------------------------
# tail classes and the doubly-exponential cutoff


class TailClass(enum.Enum):
    STANDARD_PA = "StandardPA"
    GREEDY_LOG_CORRECTED = "GreedyLogCorrected"
    DOUBLY_EXPONENTIAL = "DoublyExponential"
    CONDENSATION = "Condensation"


def classify_tail(params: ModelParams) -> TailClass:
    r, s = params.r, params.s
    if r == 1:
        return TailClass.STANDARD_PA
    if s == 1:
        return TailClass.GREEDY_LOG_CORRECTED if r == 2 else TailClass.CONDENSATION
    if pstar(params).kind is PStarKind.ONE:
        return TailClass.DOUBLY_EXPONENTIAL
    return TailClass.CONDENSATION


@dataclass(frozen=True)
class CutoffResult:
    k0: int
    p_k0: float
    q_k0: float
    bound_rhs: float


def cutoff_bound(params: ModelParams, k: int) -> float:
    """(2 / (C(r,s) (k+3)))^(1/(s-1))."""
    return (2.0 / (binom_exact(params.r, params.s) * (k + 3))) ** (1.0 / (params.s - 1))


def _first_cutoff(table: PkTable) -> int | None:
    params = table.params
    c = math.log(2.0 / binom_exact(params.r, params.s))
    log_bound = (c - np.log(table.k + 3.0)) / (params.s - 1)
    hits = np.flatnonzero(table.log_q < log_bound)
    return int(hits[0]) if hits.size else None


def cutoff_k0(params: ModelParams, k_search_max: int = 10**6, tol: float = DEFAULT_TOL) -> CutoffResult:
    """First k whose q_k is below the doubly-exponential cutoff bound."""
    if params.s < 2:
        raise ValueError("the cutoff is defined for s >= 2 only")
    if classify_tail(params) is TailClass.CONDENSATION:
        raise NotFoundError(f"{params} condenses (p_* < 1); q_k never reaches the cutoff")
    kmax = min(1024, k_search_max)
    while True:
        table = pk_sequence(params, kmax, tol)
        i = _first_cutoff(table)
        if i is not None:
            k = int(table.k[i])
            return CutoffResult(k, float(table.p[i]), float(table.q[i]), cutoff_bound(params, k))
        if kmax >= k_search_max:
            raise NotFoundError(f"cutoff not reached by k={k_search_max} for {params}")
        kmax = min(2 * kmax, k_search_max)
