"""The order-statistic kernel B_{r,s} and its exact polynomial forms.

``B_{r,s}(p)`` is the probability that a Binomial(r, p) variable exceeds
``r - s``: if each of the r preferential samples independently lands in a
"low degree" class with probability p, it is the chance that the sample of
rank s (by degree, highest first) is also low.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _numeric
from .polynomial import IntegerPolynomial

MAX_R = 64
BOUNDARY_SLACK = 1e-15


class Sampling(enum.Enum):
    WITH_REPLACEMENT = "with-replacement"
    ALL_DISTINCT = "without-replacement"


@dataclass(frozen=True)
class ModelParams:
    """Sample ``r`` vertices preferentially and attach to the one of rank ``s``."""

    r: int
    s: int
    sampling: Sampling = Sampling.WITH_REPLACEMENT

    def __post_init__(self):
        if not (isinstance(self.r, (int, np.integer)) and isinstance(self.s, (int, np.integer))):
            raise TypeError("r and s must be integers")
        if not 1 <= self.s <= self.r:
            raise ValueError(f"need 1 <= s <= r, got r={self.r}, s={self.s}")
        if self.r > MAX_R:
            raise ValueError(f"r={self.r} exceeds the supported range r <= {MAX_R}")
        object.__setattr__(self, "r", int(self.r))
        object.__setattr__(self, "s", int(self.s))
        object.__setattr__(self, "sampling", Sampling(self.sampling))

    def __str__(self):
        return f"(r={self.r}, s={self.s})"


def binom_exact(n: int, k: int) -> int:
    """C(n, k) as an exact integer (0 when k > n)."""
    if n < 0 or k < 0:
        raise ValueError("binom_exact takes non-negative arguments")
    return math.comb(n, k)


@lru_cache(maxsize=None)
def _float_row(r: int) -> np.ndarray:
    row = np.array([float(math.comb(r, i)) for i in range(r + 1)])
    row.setflags(write=False)
    return row


def comb_row(params: ModelParams) -> np.ndarray:
    return _float_row(params.r)


def deriv_coef(params: ModelParams) -> float:
    """r * C(r-1, s-1), the constant in dB/dx."""
    return float(params.r * math.comb(params.r - 1, params.s - 1))


def _check_unit(x: float, name: str = "p") -> float:
    x = float(x)
    if math.isnan(x):
        raise ValueError(f"{name} is NaN")
    if x < 0.0:
        if x < -BOUNDARY_SLACK:
            raise ValueError(f"{name}={x!r} outside [0, 1]")
        return 0.0
    if x > 1.0:
        if x > 1.0 + BOUNDARY_SLACK:
            raise ValueError(f"{name}={x!r} outside [0, 1]")
        return 1.0
    return x


def brs_eval(params: ModelParams, p: float) -> float:
    """B_{r,s}(p) = P(Bin(r, p) > r - s)."""
    p = _check_unit(p)
    return float(_numeric.low_prob(params.r, params.s, comb_row(params), p))


def tail_eval(params: ModelParams, q: float) -> float:
    """P(Bin(r, q) >= s) = 1 - B_{r,s}(1 - q), accurate for tiny q."""
    q = _check_unit(q, "q")
    return float(_numeric.tail_prob(params.r, params.s, comb_row(params), q))


def brs_derivative(params: ModelParams, x: float) -> float:
    """dB/dx = r C(r-1, s-1) x^(r-s) (1-x)^(s-1)."""
    x = _check_unit(x, "x")
    return float(_numeric.low_deriv(params.r, params.s, deriv_coef(params), x))


@lru_cache(maxsize=None)
def _brs_poly(r: int, s: int) -> IntegerPolynomial:
    x = IntegerPolynomial.x()
    one_minus = IntegerPolynomial([1, -1])
    total = IntegerPolynomial()
    for i in range(s):
        total = total + (x ** (r - i)) * (one_minus**i) * math.comb(r, i)
    return total


def brs_polynomial(params: ModelParams) -> IntegerPolynomial:
    """Exact expansion of B_{r,s} in powers of p."""
    return _brs_poly(params.r, params.s)


@lru_cache(maxsize=None)
def _tail_poly(r: int, s: int) -> IntegerPolynomial:
    x = IntegerPolynomial.x()
    one_minus = IntegerPolynomial([1, -1])
    total = IntegerPolynomial()
    for i in range(s, r + 1):
        total = total + (x**i) * (one_minus ** (r - i)) * math.comb(r, i)
    return total


def tail_polynomial(params: ModelParams) -> IntegerPolynomial:
    """Exact expansion of P(Bin(r, q) >= s) in powers of q; only q^s..q^r appear."""
    return _tail_poly(params.r, params.s)
