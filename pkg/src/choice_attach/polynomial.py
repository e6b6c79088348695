"""Exact univariate polynomials over the integers, with Sturm root counting.

Coefficients are Python ints (arbitrary precision), stored constant term
first. Everything that needs rationals (remainders, evaluation at bisection
points) is done with integer pseudo-division and homogeneous evaluation, so
no rounding ever happens.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _igcd
from typing import Iterable, Sequence


class IntegerPolynomial:
    """Polynomial with exact integer coefficients, constant term first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[int, ...] = tuple(cs)

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "IntegerPolynomial":
        return cls([0] * degree + [coeff])

    @classmethod
    def x(cls) -> "IntegerPolynomial":
        return cls([0, 1])

    # -- basic structure -------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, i: int) -> int:
        """Coefficient of x^i (0 beyond the degree)."""
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntegerPolynomial([other])
        if not isinstance(other, IntegerPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"IntegerPolynomial({list(self.coeffs)})"

    def __str__(self):
        return self.format("p")

    def format(self, var: str = "p") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = str(a)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if a == 1 else f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    # -- arithmetic ------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "IntegerPolynomial":
        if isinstance(other, IntegerPolynomial):
            return other
        if isinstance(other, int):
            return IntegerPolynomial([other])
        raise TypeError(f"cannot combine IntegerPolynomial with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return IntegerPolynomial(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return IntegerPolynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return IntegerPolynomial(c * other for c in self.coeffs)
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return IntegerPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntegerPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = IntegerPolynomial([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def derivative(self) -> "IntegerPolynomial":
        return IntegerPolynomial(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def compose(self, inner: "IntegerPolynomial") -> "IntegerPolynomial":
        """Return self(inner(x))."""
        acc = IntegerPolynomial()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = _igcd(g, c)
        return g

    def primitive(self) -> "IntegerPolynomial":
        """Divide by the (positive) content; sign of the leading term is kept."""
        g = self.content()
        if g <= 1:
            return self
        return IntegerPolynomial(c // g for c in self.coeffs)

    def divmod(self, divisor: "IntegerPolynomial") -> tuple["IntegerPolynomial", "IntegerPolynomial"]:
        """Exact integer division with remainder.

        Raises ValueError when the quotient would need non-integer
        coefficients (use :func:`pseudo_remainder` for those cases).
        """
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dd = divisor.degree
        lc = divisor.leading
        quot = [0] * max(len(rem) - dd, 0)
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            if c % lc:
                raise ValueError("division is not exact over the integers")
            t = c // lc
            quot[i - dd] = t
            for j, b in enumerate(divisor.coeffs):
                rem[i - dd + j] -= t * b
        return IntegerPolynomial(quot), IntegerPolynomial(rem)

    def exact_div(self, divisor: "IntegerPolynomial") -> "IntegerPolynomial":
        q, r = self.divmod(divisor)
        if not r.is_zero():
            raise ValueError(f"{divisor} does not divide {self}")
        return q

    # -- evaluation ------------------------------------------------------

    def __call__(self, x):
        """Horner evaluation; exact for int/Fraction, floating for float."""
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def sign_at(self, x) -> int:
        """Exact sign of the polynomial at a rational point."""
        x = Fraction(x)
        num, den = x.numerator, x.denominator
        acc = 0
        dpow = 1
        for c in reversed(self.coeffs):
            acc = acc * num + c * dpow
            dpow *= den
        # acc == den**degree * value with den > 0
        return (acc > 0) - (acc < 0)


def pseudo_remainder(a: IntegerPolynomial, b: IntegerPolynomial) -> IntegerPolynomial:
    """Remainder of |lc(b)|^(deg a - deg b + 1) * a by b.

    Using the absolute value of the leading coefficient makes the result a
    positive multiple of the true remainder, which keeps Sturm signs intact.
    """
    if b.is_zero():
        raise ZeroDivisionError("pseudo-remainder by zero polynomial")
    delta = a.degree - b.degree + 1
    if delta <= 0:
        return a
    scaled = a * (abs(b.leading) ** delta)
    return scaled.divmod(b)[1]


def poly_gcd(a: IntegerPolynomial, b: IntegerPolynomial) -> IntegerPolynomial:
    """Primitive gcd with positive leading coefficient (primitive PRS)."""
    a, b = a.primitive(), b.primitive()
    while not b.is_zero():
        a, b = b, pseudo_remainder(a, b).primitive()
    if a.is_zero():
        return a
    return a if a.leading > 0 else -a


def squarefree_part(f: IntegerPolynomial) -> IntegerPolynomial:
    """f / gcd(f, f'): same distinct roots, all simple."""
    if f.degree <= 0:
        return f
    g = poly_gcd(f, f.derivative())
    if g.degree == 0:
        return f.primitive()
    return pseudo_exact_div(f, g).primitive()


def pseudo_exact_div(f: IntegerPolynomial, g: IntegerPolynomial) -> IntegerPolynomial:
    """Quotient of a division known to be exact over Q, scaled to be integral."""
    scale = abs(g.leading) ** (f.degree - g.degree + 1)
    q, r = (f * scale).divmod(g)
    if not r.is_zero():
        raise ValueError("division is not exact")
    return q


def sturm_sequence(f: IntegerPolynomial) -> list[IntegerPolynomial]:
    """Sturm chain f, f', -rem, ... with every member scaled by a positive factor."""
    if f.is_zero():
        raise ValueError("Sturm sequence of the zero polynomial")
    seq = [f, f.derivative()]
    if seq[-1].is_zero():
        return seq[:1]
    while seq[-1].degree > 0:
        rem = pseudo_remainder(seq[-2], seq[-1])
        if rem.is_zero():
            break
        g = rem.content()
        seq.append(IntegerPolynomial(-c // g for c in rem.coeffs))
    return seq


def sign_changes(seq: Sequence[IntegerPolynomial], x) -> int:
    """Number of sign changes in the chain evaluated at rational x (zeros skipped)."""
    signs = [p.sign_at(x) for p in seq]
    signs = [v for v in signs if v != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def count_roots(seq: Sequence[IntegerPolynomial], a, b) -> int:
    """Distinct real roots in the half-open interval (a, b]; a must not be a root."""
    return sign_changes(seq, a) - sign_changes(seq, b)
