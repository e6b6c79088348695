"""Preferential attachment with choice.

A new vertex samples r existing vertices with probability proportional to
degree and attaches to the one of rank s by degree. This package computes the
limiting degree-class probabilities p_k, decides between doubly-exponential
tails and condensation, and simulates the growth process to check both.
"""

from .errors import ConvergenceError, MemoryCapError, NotFoundError
from .kernel import (
    ModelParams,
    Sampling,
    binom_exact,
    brs_derivative,
    brs_eval,
    brs_polynomial,
    tail_eval,
    tail_polynomial,
)
from .polynomial import IntegerPolynomial
from .recurrence import (
    CutoffResult,
    PkTable,
    PStarKind,
    PStarResult,
    Repr,
    TailClass,
    classify_tail,
    cutoff_k0,
    f_k_eval,
    greedy_pk_step,
    next_pk,
    next_qk,
    pk_sequence,
    pk_values,
    pstar,
    threshold_r,
)
from .simulator import (
    DegreeCensus,
    SimCensus,
    StepRecord,
    TreeState,
    census,
    grow_step,
    new_tree,
    run_sim,
    sample_preferential,
    select_rank_s,
)
from .verification import (
    convergence_report,
    greedy_asymptotic_series,
    quadratic_decay_check,
    recurrence_bound_check,
    sandwich_bounds,
    tail_ratio_diagnostic,
    transition_frequency_test,
)

__version__ = "0.1.0"
