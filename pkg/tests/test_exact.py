import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from pfaffkit.errors import BadPrimeError, DimensionError, DomainError
from pfaffkit.exact import (
    MAX_DEGREE,
    RationalFunction,
    evaluate_at,
    exact_divide,
    gcd,
    is_prime,
    reduce_mod_p,
    variables,
)

from helpers import from_sympy, random_poly, symbols, to_sympy

x, y = variables(2)
x5, y5 = variables(2, 5)


def test_exact_divide_examples():
    assert exact_divide(x**2 * y - x * y**2, x * y) == x - y
    assert exact_divide(x**2 + 1, x) is None
    assert exact_divide(2 * x5 * y5, x5) == 2 * y5


def test_exact_divide_errors():
    with pytest.raises(ZeroDivisionError):
        exact_divide(x, x.zero())
    with pytest.raises(DomainError):
        exact_divide(x, x5)
    with pytest.raises(DimensionError):
        exact_divide(x, variables(3)[0])


def test_evaluate_examples():
    assert evaluate_at(x**2 + y, (2, 3)) == 7
    assert evaluate_at(x.zero(), (5, -1)) == 0
    assert evaluate_at(x * y, (Fraction(1, 2), 4)) == 2
    with pytest.raises(DimensionError):
        evaluate_at(x, (1,))


def test_reduce_mod_p_examples():
    x7, _ = variables(2, 7)
    assert reduce_mod_p(3 * x + 7, 7) == 3 * x7
    assert reduce_mod_p(x * Fraction(1, 2), 5) == 3 * x5
    with pytest.raises(BadPrimeError) as exc:
        reduce_mod_p(x * Fraction(1, 5), 5)
    assert exc.value.code == "bad_prime"


def test_homogeneity_and_degree():
    assert (x**2 + x * y).is_homogeneous()
    assert not (x**2 + y).is_homogeneous()


def test_exponent_overflow_is_checked():
    with pytest.raises(OverflowError):
        x ** (MAX_DEGREE + 1)
    with pytest.raises(OverflowError):
        (x**MAX_DEGREE) * x


def test_to_string_is_grlex_canonical():
    f = y**2 + x**2 - 3 * x * y + Fraction(3, 2)
    assert f.to_string(["x", "y"]) == "x^2 - 3*x*y + y^2 + 3/2"


def test_rational_function_canonical_form():
    r = RationalFunction(x * y, x * x)
    assert r.num == y and r.den == x
    s = RationalFunction(x, -2 * y)
    assert s.den.leading_coefficient == 1
    with pytest.raises(ZeroDivisionError):
        RationalFunction(x, x.zero())


def test_gcd_basic():
    assert gcd(x * x - y * y, x * x + 2 * x * y + y * y) == x + y
    assert gcd(x + 1, y + 1) == x.one()
    assert gcd(x.zero(), 3 * x) == x


polys = st.builds(
    lambda seed, deg: random_poly(random.Random(seed), 3, deg, nterms=4, rational=True),
    st.integers(0, 10**6),
    st.integers(0, 3),
)


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(f, g, h):
    assert (f + g) * h == f * h + g * h
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f - f == f.zero()


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_exact_divide_inverts_multiplication(f, g):
    if g.is_zero:
        return
    assert exact_divide(f * g, g) == f


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 3), st.integers(0, 3))
def test_homogeneous_product_degree(seed, a, b):
    rng = random.Random(seed)
    f = random_poly(rng, 3, a, homogeneous=True)
    g = random_poly(rng, 3, b, homogeneous=True)
    if f.is_zero or g.is_zero:
        return
    assert (f * g).is_homogeneous()
    assert (f * g).degree == f.degree + g.degree


@settings(max_examples=40, deadline=None)
@given(polys, polys, st.sampled_from([5, 7, 11, 13, 10007]))
def test_mod_p_is_a_ring_homomorphism(f, g, p):
    try:
        fp, gp = reduce_mod_p(f, p), reduce_mod_p(g, p)
    except BadPrimeError:
        return
    assert reduce_mod_p(f * g, p) == fp * gp
    assert reduce_mod_p(f + g, p) == fp + gp


@settings(max_examples=40, deadline=None)
@given(polys, polys, polys, polys, polys)
def test_rational_function_equality_is_cross_multiplication(p1, q1, p2, q2, h):
    if q1.is_zero or q2.is_zero or h.is_zero:
        return
    a, b = RationalFunction(p1, q1), RationalFunction(p2, q2)
    assert (a == b) == (p1 * q2 == p2 * q1)
    scaled = RationalFunction(p1 * h, q1 * h)
    assert scaled == a
    assert (scaled.num, scaled.den) == (a.num, a.den)
    again = RationalFunction(a.num, a.den)
    assert (again.num, again.den) == (a.num, a.den)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_gcd_matches_sympy(seed):
    rng = random.Random(seed)
    common = random_poly(rng, 3, rng.randint(0, 2), nterms=3)
    f = random_poly(rng, 3, 2, nterms=3) * common
    g = random_poly(rng, 3, 2, nterms=3) * common
    if f.is_zero or g.is_zero:
        return
    s = symbols(3)
    oracle = from_sympy(sympy.gcd(to_sympy(f, s), to_sympy(g, s)), 3, s)
    ours = gcd(f, g)
    # same up to a nonzero scalar
    assert exact_divide(ours, oracle) is not None and exact_divide(ours, oracle).is_constant
    assert exact_divide(f, ours) is not None and exact_divide(g, ours) is not None


def test_is_prime():
    assert [p for p in range(30) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert is_prime(2**61 - 1)
