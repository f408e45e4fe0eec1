"""Seeded generators and independent oracles shared by the test modules."""

from __future__ import annotations

import itertools
from fractions import Fraction

import sympy

from pfaffkit.diffcalc import PolyDifferentialForm, PolyVectorField
from pfaffkit.exact import Polynomial, variables
from pfaffkit.extactic import _exponents


def monomials_upto(n, d):
    return [e for k in range(d + 1) for e in _exponents(n, k)]


def random_poly(rng, n, deg, *, nterms=3, homogeneous=False, modulus=None, rational=False, lo=-5, hi=5):
    pool = list(_exponents(n, deg)) if homogeneous else monomials_upto(n, deg)
    terms = {}
    for _ in range(nterms):
        c = rng.randint(lo, hi)
        if rational:
            c = Fraction(c, rng.choice([1, 1, 2, 3]))
        terms[rng.choice(pool)] = c
    return Polynomial(n, terms, modulus)


def random_field(rng, n, deg, *, homogeneous=False, nterms=3, modulus=None, dense=False):
    while True:
        if dense:
            pool = list(_exponents(n, deg)) if homogeneous else monomials_upto(n, deg)
            comps = [Polynomial(n, {e: rng.randint(-4, 4) for e in pool}, modulus) for _ in range(n)]
        else:
            comps = [random_poly(rng, n, deg, nterms=nterms, homogeneous=homogeneous, modulus=modulus) for _ in range(n)]
        X = PolyVectorField(comps)
        if not X.is_zero and (not homogeneous or X.homogeneous_degree == deg):
            return X


def random_form(rng, n, r, deg, *, homogeneous=False, nterms=2):
    import itertools

    coeffs = {}
    for I in itertools.combinations(range(n), r):
        coeffs[I] = random_poly(rng, n, deg, nterms=nterms, homogeneous=homogeneous)
    return PolyDifferentialForm(n, r, coeffs)


def log_form(n, lam):
    """sum_i lam_i (prod_{j != i} x_j) dx_i on C^{n+1}."""
    xs = variables(n + 1)
    comps = []
    for i in range(n + 1):
        p = xs[0].one()
        for j in range(n + 1):
            if j != i:
                p = p * xs[j]
        comps.append(p * lam[i])
    return PolyDifferentialForm.one_form(comps), xs


# -- sympy bridges (oracles) -------------------------------------------------------


def symbols(n):
    return sympy.symbols(f"x0:{n}")


def to_sympy(f: Polynomial, syms=None):
    syms = syms or symbols(f.nvars)
    out = sympy.Integer(0)
    for e, c in f.items():
        c = Fraction(int(c)) if f.modulus is not None else Fraction(c)
        term = sympy.Rational(c.numerator, c.denominator)
        for s, k in zip(syms, e):
            term *= s**k
        out += term
    return out


def from_sympy(expr, n, syms=None) -> Polynomial:
    syms = syms or symbols(n)
    P = sympy.Poly(sympy.expand(expr), *syms)
    terms = {}
    for mon, c in P.terms():
        c = sympy.Rational(c)
        terms[tuple(mon)] = Fraction(int(c.p), int(c.q))
    return Polynomial(n, terms)


def monic_linear_candidates(p, homogeneous=False):
    """Every monic degree-1 polynomial in two variables over F_p, built directly."""
    out = []
    for lead in [(1, 0), (0, 1)]:
        rest = [(0, 1), (0, 0)] if lead == (1, 0) else [(0, 0)]
        if homogeneous:
            rest = [m for m in rest if sum(m) == 1]
        for coeffs in itertools.product(range(p), repeat=len(rest)):
            terms = {lead: 1}
            terms.update({m: c for m, c in zip(rest, coeffs) if c})
            out.append(Polynomial(2, terms, p))
    return out
