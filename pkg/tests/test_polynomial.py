from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from choice_attach.polynomial import (
    IntegerPolynomial,
    count_roots,
    poly_gcd,
    pseudo_remainder,
    sign_changes,
    squarefree_part,
    sturm_sequence,
)

P = IntegerPolynomial
coeff_lists = st.lists(st.integers(-20, 20), min_size=1, max_size=7)


def to_sympy(f, x):
    return sum(c * x**i for i, c in enumerate(f))


def test_structure():
    f = P([1, 2, 0, 0])
    assert f.degree == 1 and f.leading == 2
    assert P([]).is_zero() and P([]).degree == -1
    assert list(P([3, 0, 5])) == [3, 0, 5]
    assert f[7] == 0
    assert P.monomial(3, 2) == P([0, 0, 0, 2])


def test_arithmetic():
    x = P.x()
    assert (x + 1) * (x - 1) == x**2 - 1
    assert (x - 1) ** 3 == P([-1, 3, -3, 1])
    assert P([1, 2, 3]).derivative() == P([2, 6])
    assert P([0, 0, 1]).compose(P([1, -1])) == P([1, -2, 1])


def test_divmod_exact_and_inexact():
    x = P.x()
    q, r = (x**3 - 1).divmod(x - 1)
    assert q == x**2 + x + 1 and r.is_zero()
    with pytest.raises(ValueError):
        (x**2).exact_div(x + 2)


def test_evaluation_and_sign():
    f = P([-1, 0, 1])
    assert f(Fraction(1, 2)) == Fraction(-3, 4)
    assert f.sign_at(Fraction(1, 2)) == -1
    assert f.sign_at(1) == 0
    assert f.sign_at(Fraction(3, 2)) == 1


def test_content_and_primitive():
    f = P([4, -6, 8])
    assert f.content() == 2
    assert f.primitive() == P([2, -3, 4])


@settings(max_examples=100, deadline=None)
@given(coeff_lists, coeff_lists)
def test_pseudo_remainder_sign(a, b):
    a, b = P(a), P(b)
    if b.is_zero() or b.degree < 1:
        return
    x = sympy.symbols("x")
    prem = pseudo_remainder(a, b)
    _, rem = sympy.div(to_sympy(a, x), to_sympy(b, x), x)
    rem = sympy.Poly(rem, x)
    if rem.is_zero:
        assert prem.is_zero()
    else:
        # same polynomial up to a positive factor
        ratio = sympy.Rational(prem.leading) / rem.LC()
        assert ratio > 0
        assert sympy.expand(to_sympy(prem, x) - rem.as_expr() * ratio) == 0


@settings(max_examples=100, deadline=None)
@given(coeff_lists, coeff_lists)
def test_gcd_against_sympy(a, b):
    a, b = P(a), P(b)
    if a.is_zero() or b.is_zero():
        return
    x = sympy.symbols("x")
    g = sympy.Poly(sympy.gcd(to_sympy(a, x), to_sympy(b, x)), x)
    ours = poly_gcd(a, b)
    assert ours.degree == g.degree()
    assert ours.leading > 0


def test_squarefree():
    x = P.x()
    f = (x - 1) ** 3 * (x + 2) ** 2 * (2 * x - 1)
    sf = squarefree_part(f)
    assert sf.degree == 3
    for root in (1, -2, Fraction(1, 2)):
        assert sf(root) == 0


@settings(max_examples=100, deadline=None)
@given(coeff_lists, st.fractions(-3, 3, max_denominator=20), st.fractions(-3, 3, max_denominator=20))
def test_root_count_against_sympy(c, a, b):
    f = P(c)
    if f.degree < 1 or a == b:
        return
    a, b = min(a, b), max(a, b)
    x = sympy.symbols("x")
    roots = sympy.Poly(to_sympy(f, x), x).real_roots()
    expected = len({r for r in roots if a < r <= b})
    seq = sturm_sequence(squarefree_part(f))
    assert count_roots(seq, a, b) == expected


def test_sign_changes_simple():
    f = P([-1, 0, 1])  # roots -1, 1
    seq = sturm_sequence(f)
    assert sign_changes(seq, -2) - sign_changes(seq, 2) == 2
