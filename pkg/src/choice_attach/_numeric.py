"""Compiled scalar kernels shared by the solver, the simulator and the checks.

All Bernstein-type sums here have positive terms only, so the low class
probability and its complement are both computed without cancellation.
``comb`` is the float row C(r, 0..r) and ``dcoef`` is r*C(r-1, s-1).
"""

import math

import numba
import numpy as np

jit = numba.njit(cache=True, nogil=True)


@jit
def low_prob(r, s, comb, x):
    # P(Bin(r, x) > r - s) = sum_{i<s} C(r,i) x^(r-i) (1-x)^i
    y = 1.0 - x
    acc = 0.0
    for i in range(s):
        acc += comb[i] * x ** (r - i) * y**i
    return acc


@jit
def tail_prob(r, s, comb, y):
    # P(Bin(r, y) >= s) = 1 - low_prob(1 - y)
    x = 1.0 - y
    acc = 0.0
    for i in range(s, r + 1):
        acc += comb[i] * y**i * x ** (r - i)
    return acc


@jit
def low_deriv(r, s, dcoef, x):
    return dcoef * x ** (r - s) * (1.0 - x) ** (s - 1)


@jit
def tail_deriv(r, s, dcoef, y):
    return dcoef * (1.0 - y) ** (r - s) * y ** (s - 1)


@jit
def solve_p(r, s, comb, dcoef, k, p, tol, maxiter):
    """Root of (k+1)B(p) - kB(x) - 2x + 1 in x; returns (x, iterations or -1)."""
    target = (k + 1) * low_prob(r, s, comb, p) + 1.0
    lo = 0.0
    hi = 1.0
    x = p
    fx = target - k * low_prob(r, s, comb, x) - 2.0 * x
    if fx > 0.0:
        lo = x
    elif fx < 0.0:
        hi = x
    else:
        return x, 0
    for it in range(maxiter):
        d = -(k * low_deriv(r, s, dcoef, x) + 2.0)
        xn = x - fx / d
        if lo <= xn <= hi and abs(xn - x) <= tol:
            return xn, it + 1
        if not (lo < xn < hi):
            xn = 0.5 * (lo + hi)
        step = abs(xn - x)
        x = xn
        fx = target - k * low_prob(r, s, comb, x) - 2.0 * x
        if fx > 0.0:
            lo = x
        elif fx < 0.0:
            hi = x
        else:
            return x, it + 1
        if step <= tol or hi - lo <= tol:
            return x, it + 1
    return x, -1


@jit
def solve_q(r, s, comb, dcoef, k, q, tol, maxiter):
    """Root of kT(y) - (k+1)T(q) + 2y in y, relative step tolerance."""
    rhs = (k + 1) * tail_prob(r, s, comb, q)
    lo = 0.0
    hi = 1.0
    y = 0.5 * rhs
    if not (0.0 < y < 1.0):
        y = 0.5
    gy = k * tail_prob(r, s, comb, y) + 2.0 * y - rhs
    if gy > 0.0:
        hi = y
    elif gy < 0.0:
        lo = y
    else:
        return y, 0
    for it in range(maxiter):
        d = k * tail_deriv(r, s, dcoef, y) + 2.0
        yn = y - gy / d
        if lo <= yn <= hi and abs(yn - y) <= tol * y:
            return yn, it + 1
        if not (lo < yn < hi):
            yn = 0.5 * (lo + hi)
        step = abs(yn - y)
        y = yn
        gy = k * tail_prob(r, s, comb, y) + 2.0 * y - rhs
        if gy > 0.0:
            hi = y
        elif gy < 0.0:
            lo = y
        else:
            return y, it + 1
        if step <= tol * y or hi - lo <= tol * lo:
            return y, it + 1
    return y, -1


@jit
def greedy_step(k, p):
    return math.sqrt((k + 1.0) * (k * p * p + 1.0)) / k - 1.0 / k


DIRECT = 0
LOGSPACE = 1

Q_SWITCH = 1e-3
LOG_SWITCH = 1e-150
# log of the smallest value the next q-space solve may produce before the
# leading term q^s underflows (matters for s >= 3 well above LOG_SWITCH)
UNDERFLOW_LOG = math.log(1e-290)


@jit
def next_step_underflows(s, log_lead, k, logq):
    return math.log(k + 2.0) + log_lead + s * logq < UNDERFLOW_LOG


@jit
def iterate(r, s, comb, dcoef, rs_binom, kmax, tol, maxiter, greedy, record,
            out_p, out_q, out_logq, out_repr, out_res):
    """Advance p_0 = 0 to p_kmax, writing the entries whose k is in ``record``.

    Returns 0 on success or the first k at which a solve failed.
    """
    p = 0.0
    q = 1.0
    logq = 0.0
    mode = 0  # 0: p-space, 1: q-space, 2: log-space
    j = 0
    nrec = record.shape[0]
    log_lead = math.log(rs_binom / 2.0)
    if nrec > 0 and record[0] == 0:
        out_p[0] = 0.0
        out_q[0] = 1.0
        out_logq[0] = 0.0
        out_repr[0] = DIRECT
        out_res[0] = 0.0
        j = 1
    for k in range(1, kmax + 1):
        rep = DIRECT
        if mode == 0:
            if greedy:
                x = greedy_step(k, p)
            else:
                x, it = solve_p(r, s, comb, dcoef, k, p, tol, maxiter)
                if it < 0:
                    return k
            res = abs((k + 1) * low_prob(r, s, comb, p) - k * low_prob(r, s, comb, x) - 2.0 * x + 1.0)
            p = x
            q = 1.0 - x
            logq = math.log(q)
            if q < Q_SWITCH:
                mode = 1
        elif mode == 1:
            y, it = solve_q(r, s, comb, dcoef, k, q, tol, maxiter)
            if it < 0:
                return k
            res = abs(k * tail_prob(r, s, comb, y) - (k + 1) * tail_prob(r, s, comb, q) + 2.0 * y)
            q = y
            p = 1.0 - y
            logq = math.log(y)
            if s >= 2 and (y < LOG_SWITCH or next_step_underflows(s, log_lead, k, logq)):
                mode = 2
        else:
            logq = math.log(k + 1.0) + log_lead + s * logq
            q = math.exp(logq)
            p = 1.0
            res = np.nan
            rep = LOGSPACE
        if j < nrec and record[j] == k:
            out_p[j] = p
            out_q[j] = q
            out_logq[j] = logq
            out_repr[j] = rep
            out_res[j] = res
            j += 1
    return 0


@jit
def sandwich(r, s, comb, dcoef, kmax, cap, record, out_lo, out_hi):
    """Interval enclosure of p_k below ``cap``; returns (last k with upper < cap, first k with lower > cap)."""
    lo = 0.0
    hi = 0.0
    hcap = low_deriv(r, s, dcoef, cap)
    hi_live = True
    last_hi = -1
    first_lo = -1
    j = 0
    nrec = record.shape[0]
    if nrec > 0 and record[0] == 0:
        out_lo[0] = 0.0
        out_hi[0] = 0.0
        j = 1
    for k in range(1, kmax + 1):
        flo = low_prob(r, s, comb, lo) - 2.0 * lo + 1.0
        lo = lo + flo / (k * hcap + 2.0)
        if hi_live:
            fhi = low_prob(r, s, comb, hi) - 2.0 * hi + 1.0
            hi = hi + fhi / (k * low_deriv(r, s, dcoef, hi) + 2.0)
            if hi < cap:
                last_hi = k
            else:
                hi_live = False
        if j < nrec and record[j] == k:
            out_lo[j] = lo
            out_hi[j] = hi if hi_live else np.nan
            j += 1
        if lo > cap:
            first_lo = k
            # fill the remaining recorded slots: nothing further is tracked
            while j < nrec:
                out_lo[j] = np.nan
                out_hi[j] = np.nan
                j += 1
            break
    return last_hi, first_lo
