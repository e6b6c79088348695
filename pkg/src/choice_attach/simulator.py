"""Monte Carlo growth of the preferential-attachment-with-choice tree.

The tree starts as a single edge (time m = 1). Each step draws an r-tuple of
vertices, each with probability proportional to degree, and attaches a new
leaf to the tuple entry of rank s by degree (highest first), ties broken
uniformly at random.

Preferential draws read a uniform slot of ``endpoints``, the flat list of
edge endpoints: every vertex appears there exactly ``degree`` times, so one
draw is O(1).

Randomness comes from ``numpy.random.default_rng(seed)`` (PCG64). The
compiled kernels advance the very same generator object, so a seed fixes the
whole trajectory. Per step the stream is consumed as: r calls to
``integers(0, 2m)`` for the tuple (repeated while resampling in the
all-distinct mode), then r calls to ``random()`` for the tie-break keys.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import MemoryCapError
from .kernel import ModelParams, Sampling

jit = numba.njit(cache=True, nogil=True)

DEFAULT_KMAX = 64
DEFAULT_MEMORY_CAP = 2 * 1024**3
INDEX_DTYPE = np.int32
_BYTES_PER_STEP = 3 * np.dtype(INDEX_DTYPE).itemsize


# ---------------------------------------------------------------------------
# compiled kernels


@jit
def _draw_tuple(endpoints, m, r, rng, tup):
    for i in range(r):
        tup[i] = endpoints[rng.integers(0, 2 * m)]


@jit
def _is_distinct(tup, r):
    for i in range(r):
        for j in range(i):
            if tup[i] == tup[j]:
                return False
    return True


@jit
def _rank_index(tdeg, r, s, rng, keys):
    # position s-1 in the order (degree descending, key ascending)
    for i in range(r):
        keys[i] = rng.random()
    for i in range(r):
        rank = 0
        for j in range(r):
            if tdeg[j] > tdeg[i]:
                rank += 1
            elif tdeg[j] == tdeg[i] and j != i:
                if keys[j] < keys[i] or (keys[j] == keys[i] and j < i):
                    rank += 1
        if rank == s - 1:
            return i
    return -1


@jit
def _step(degrees, endpoints, m, r, s, distinct, rng, tup, tdeg, keys):
    """One attachment at time m; returns (target, first tuple distinct, rejections)."""
    _draw_tuple(endpoints, m, r, rng, tup)
    first_ok = _is_distinct(tup, r)
    rejected = 0
    # with fewer than r vertices no tuple can be all-distinct
    if distinct and m + 1 >= r:
        while not _is_distinct(tup, r):
            rejected += 1
            _draw_tuple(endpoints, m, r, rng, tup)
    for i in range(r):
        tdeg[i] = degrees[tup[i]]
    target = tup[_rank_index(tdeg, r, s, rng, keys)]
    new = m + 1
    degrees[target] += 1
    degrees[new] = 1
    endpoints[2 * m] = target
    endpoints[2 * m + 1] = new
    return target, first_ok, rejected


@jit
def _run(degrees, endpoints, m, nsteps, r, s, distinct, rng, max_degree):
    tup = np.empty(r, np.int64)
    tdeg = np.empty(r, np.int64)
    keys = np.empty(r)
    n_distinct = 0
    n_rejected = 0
    for _ in range(nsteps):
        target, ok, rej = _step(degrees, endpoints, m, r, s, distinct, rng, tup, tdeg, keys)
        if ok:
            n_distinct += 1
        n_rejected += rej
        if degrees[target] > max_degree:
            max_degree = degrees[target]
        m += 1
    return n_distinct, n_rejected, max_degree


@jit
def _frozen_trials(deg_snap, end_snap, m, trials, r, s, distinct, rng, k):
    """Counts of (ΔF(k) = 1, 1-k, 2) over repeated single steps from one snapshot."""
    nv = m + 1
    degrees = np.empty(nv + 1, deg_snap.dtype)
    endpoints = np.empty(2 * m + 2, end_snap.dtype)
    tup = np.empty(r, np.int64)
    tdeg = np.empty(r, np.int64)
    keys = np.empty(r)
    counts = np.zeros(3, np.int64)
    for _ in range(trials):
        for i in range(nv):
            degrees[i] = deg_snap[i]
        degrees[nv] = 0
        for i in range(2 * m):
            endpoints[i] = end_snap[i]
        target, ok, rej = _step(degrees, endpoints, m, r, s, distinct, rng, tup, tdeg, keys)
        d = degrees[target] - 1
        if d > k:
            counts[0] += 1
        elif d == k:
            counts[1] += 1
        else:
            counts[2] += 1
    return counts


# ---------------------------------------------------------------------------
# state and records


@dataclass
class TreeState:
    params: ModelParams
    m: int
    rng: np.random.Generator
    seed: int | None
    max_degree: int
    kmax: int
    _degrees: np.ndarray = field(repr=False)
    _endpoints: np.ndarray = field(repr=False)

    @property
    def degrees(self) -> np.ndarray:
        """Degree of each vertex 0..m (a view)."""
        return self._degrees[: self.m + 1]

    @property
    def endpoints(self) -> np.ndarray:
        """Edge endpoints, 2m entries (a view)."""
        return self._endpoints[: 2 * self.m]

    @property
    def n_vertices(self) -> int:
        return self.m + 1

    def _reserve(self, extra_steps: int):
        need_v = self.m + 1 + extra_steps
        if need_v <= len(self._degrees):
            return
        cap = max(need_v, 2 * len(self._degrees))
        deg = np.zeros(cap, INDEX_DTYPE)
        deg[: self.m + 1] = self.degrees
        end = np.zeros(2 * cap, INDEX_DTYPE)
        end[: 2 * self.m] = self.endpoints
        self._degrees, self._endpoints = deg, end

    def copy(self) -> "TreeState":
        """Deep copy including the generator state."""
        rng = np.random.Generator(type(self.rng.bit_generator)())
        rng.bit_generator.state = self.rng.bit_generator.state
        return TreeState(self.params, self.m, rng, self.seed, self.max_degree, self.kmax,
                         self._degrees.copy(), self._endpoints.copy())


def new_tree(params: ModelParams, seed: int | None = 0, capacity: int = 16,
             kmax: int = DEFAULT_KMAX) -> TreeState:
    """The two-vertex tree at time 1."""
    capacity = max(capacity, 2)
    degrees = np.zeros(capacity, INDEX_DTYPE)
    degrees[:2] = 1
    endpoints = np.zeros(2 * capacity, INDEX_DTYPE)
    endpoints[:2] = (0, 1)
    return TreeState(params, 1, np.random.default_rng(seed), seed, 1, kmax, degrees, endpoints)


@dataclass
class StepRecord:
    tuple_vertices: np.ndarray
    tuple_degrees: np.ndarray
    """Degrees of the final (accepted) tuple, in draw order, before attaching."""
    chosen_vertex: int
    chosen_degree: int
    delta_F: dict[int, int]
    rejected_tuples: int
    first_tuple_distinct: bool


def delta_F(chosen_degree: int, k: int) -> int:
    """Change of F(k) when the new leaf hangs off a vertex of this degree."""
    if chosen_degree > k:
        return 1
    if chosen_degree == k:
        return 1 - k
    return 2


def sample_preferential(state: TreeState) -> int:
    """A vertex drawn with probability degree / 2m."""
    return int(state.endpoints[state.rng.integers(0, 2 * state.m)])


def select_rank_s(vertices, degrees, s: int, rng: np.random.Generator) -> int:
    """The tuple entry of rank s by degree, ties (and repeats) ordered by random keys."""
    vertices = np.asarray(vertices)
    degrees = np.asarray(degrees)
    if not 1 <= s <= len(vertices):
        raise ValueError("s must be between 1 and the tuple length")
    keys = rng.random(len(vertices))
    order = np.lexsort((keys, -degrees))
    return int(vertices[order[s - 1]])


def grow_step(state: TreeState) -> StepRecord:
    p = state.params
    state._reserve(1)
    tup = np.empty(p.r, np.int64)
    tdeg = np.empty(p.r, np.int64)
    keys = np.empty(p.r)
    target, ok, rej = _step(state._degrees, state._endpoints, state.m, p.r, p.s,
                            p.sampling is Sampling.ALL_DISTINCT, state.rng, tup, tdeg, keys)
    state.m += 1
    target = int(target)
    d = int(state._degrees[target]) - 1
    state.max_degree = max(state.max_degree, d + 1)
    return StepRecord(tup, tdeg, target, d, {k: delta_F(d, k) for k in range(1, state.kmax + 1)},
                      int(rej), bool(ok))


def advance(state: TreeState, nsteps: int) -> tuple[int, int]:
    """Run nsteps attachments in compiled code; returns (distinct first tuples, rejections)."""
    if nsteps <= 0:
        return 0, 0
    state._reserve(nsteps)
    p = state.params
    nd, nr, mx = _run(state._degrees, state._endpoints, state.m, nsteps, p.r, p.s,
                      p.sampling is Sampling.ALL_DISTINCT, state.rng, state.max_degree)
    state.m += nsteps
    state.max_degree = int(mx)
    return int(nd), int(nr)


# ---------------------------------------------------------------------------
# census


@dataclass(frozen=True)
class DegreeCensus:
    """Degree census at time m.

    ``N[k]`` counts vertices of degree exactly k and ``F[k]`` is the total
    degree held by vertices of degree at most k, for k = 0..kmax.
    """

    m: int
    F: np.ndarray
    N: np.ndarray
    max_degree: int
    degree_sum: int

    @property
    def kmax(self) -> int:
        return len(self.F) - 1

    def fraction(self, k: int) -> float:
        """F_m(k) / 2m, the chance one preferential draw has degree <= k."""
        return self.F[k] / (2.0 * self.m)


def census(state: TreeState, kmax: int | None = None) -> DegreeCensus:
    kmax = state.kmax if kmax is None else kmax
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    counts = np.bincount(state.degrees, minlength=kmax + 1)
    N = counts[: kmax + 1].astype(np.int64)
    F = np.cumsum(N * np.arange(kmax + 1, dtype=np.int64))
    return DegreeCensus(state.m, F, N, int(state.degrees.max()), int(state.degrees.sum(dtype=np.int64)))


# ---------------------------------------------------------------------------
# driver


@dataclass
class SimCensus:
    params: ModelParams
    seed: int
    checkpoints: list[DegreeCensus]
    pm_history: list[float]
    """Running fraction of all-distinct first tuples at each checkpoint."""
    pm_estimate: float
    total_steps: int
    rejected_tuples: int


def default_checkpoints(final_m: int) -> list[int]:
    marks = []
    t = 10
    while t < final_m:
        marks.append(t)
        t *= 10
    marks.append(final_m)
    return marks


def memory_needed(steps: int) -> int:
    return (steps + 2) * _BYTES_PER_STEP


def run_sim(params: ModelParams, steps: int, seed: int, checkpoints=None,
            kmax: int = DEFAULT_KMAX, memory_cap: int = DEFAULT_MEMORY_CAP) -> SimCensus:
    """Grow to m = 1 + steps, taking a census at each checkpoint time."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if memory_needed(steps) > memory_cap:
        raise MemoryCapError(f"{steps} steps need {memory_needed(steps)} bytes, cap is {memory_cap}")
    final_m = 1 + steps
    marks = default_checkpoints(final_m) if checkpoints is None else sorted(set(int(c) for c in checkpoints))
    if marks and (marks[0] < 1 or marks[-1] > final_m):
        raise ValueError(f"checkpoints must lie in [1, {final_m}]")
    state = new_tree(params, seed, capacity=final_m + 1, kmax=kmax)
    out, pm_hist = [], []
    n_distinct = n_rejected = done = 0
    for mark in marks:
        nd, nr = advance(state, mark - state.m)
        n_distinct += nd
        n_rejected += nr
        done = state.m - 1
        out.append(census(state, kmax))
        pm_hist.append(n_distinct / done if done else 1.0)
    if state.m < final_m:
        nd, nr = advance(state, final_m - state.m)
        n_distinct += nd
        n_rejected += nr
    return SimCensus(params, seed, out, pm_hist, n_distinct / steps, steps, n_rejected)
