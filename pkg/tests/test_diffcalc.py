import itertools
import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from pfaffkit.diffcalc import (
    FoliationSpec,
    PolyDifferentialForm,
    PolyVectorField,
    apply_derivation,
    contract,
    derivation_word,
    differential,
    dx,
    euler_field,
    exterior_derivative,
    involutivity_check,
    lie_bracket,
    pfaff_degree,
    tangency_degree,
    wedge,
)
from pfaffkit.errors import DimensionError, NotProjectiveError
from pfaffkit.exact import variables

from helpers import log_form, random_field, random_form, random_poly, symbols, to_sympy

x, y = variables(2)
x3, y3, z3 = variables(3)
ZERO2 = x.zero()
ZERO3 = x3.zero()

seeds = st.integers(0, 10**6)


def test_apply_derivation_examples():
    assert apply_derivation(PolyVectorField([x, 2 * y]), x * y) == 3 * x * y
    f = x3**2 * y3 - 4 * z3**3 + x3 * y3 * z3
    assert apply_derivation(euler_field(3), f) == 3 * f
    dz = PolyVectorField([ZERO3, ZERO3, x3.one()])
    assert apply_derivation(dz, x3 * y3).is_zero
    with pytest.raises(DimensionError):
        apply_derivation(euler_field(2), x3)


def test_derivation_word_examples():
    X = PolyVectorField([x, ZERO2])
    Y = PolyVectorField([ZERO2, y])
    assert derivation_word([X], (2,), x) == x
    assert derivation_word([X, Y], (1, 1), x * y) == x * y
    f = x**3 - y
    assert derivation_word([X, Y], (0, 0), f) == f


def test_derivation_word_applies_last_field_first():
    # X1 = d/dx, X2 = x d/dy: X1(X2(y)) = 1 but X2(X1(y)) = 0
    X1 = PolyVectorField([x.one(), ZERO2])
    X2 = PolyVectorField([ZERO2, x])
    assert derivation_word([X1, X2], (1, 1), y) == x.one()


def test_wedge_examples():
    assert wedge(dx(0, 2), dx(1, 2)) == PolyDifferentialForm(2, 2, {(0, 1): x.one()})
    assert wedge(dx(0, 2), dx(0, 2)).is_zero
    a = PolyDifferentialForm.one_form([y, x])
    b = PolyDifferentialForm.one_form([y, -x])
    assert wedge(a, b) == PolyDifferentialForm(2, 2, {(0, 1): -2 * x * y})
    with pytest.raises(DimensionError):
        wedge(dx(0, 2), PolyDifferentialForm(2, 2, {(0, 1): x}))


def test_contract_examples():
    area = wedge(dx(0, 2), dx(1, 2))
    assert contract(euler_field(2), area) == PolyDifferentialForm.one_form([-y, x])
    for lam in [(1, 1, -2), (3, -1, -2)]:
        w, _ = log_form(2, lam)
        assert contract(euler_field(3), w).is_zero
    ddx = PolyVectorField([x.one(), ZERO2])
    assert contract(ddx, PolyDifferentialForm.one_form([ZERO2, x * y])).is_zero
    with pytest.raises(DimensionError):
        contract(euler_field(2), x)


def test_exterior_derivative_examples():
    assert exterior_derivative(PolyDifferentialForm.one_form([ZERO2, y])).is_zero
    assert exterior_derivative(PolyDifferentialForm.one_form([ZERO2, x])) == wedge(dx(0, 2), dx(1, 2))
    assert exterior_derivative(PolyDifferentialForm.one_form([y, x])).is_zero
    with pytest.raises(DimensionError):
        exterior_derivative(wedge(dx(0, 2), dx(1, 2)))


def test_pfaff_degree_examples():
    for n in (2, 3, 4):
        lam = [1] * n + [-n]
        w, _ = log_form(n, lam)
        assert pfaff_degree(w) == n - 1
    w = PolyDifferentialForm.one_form([y3, -x3, ZERO3])
    assert pfaff_degree(w) == 0


def test_pfaff_degree_rejects_non_projective():
    with pytest.raises(NotProjectiveError):
        pfaff_degree(PolyDifferentialForm.one_form([x3 * x3, y3, z3]))
    with pytest.raises(NotProjectiveError) as exc:
        pfaff_degree(PolyDifferentialForm.one_form([x3, y3, z3]))
    assert "not a projective Pfaff form" in str(exc.value)


def test_involutivity_examples():
    assert involutivity_check([PolyVectorField([x, ZERO2]), PolyVectorField([ZERO2, y])])
    assert involutivity_check([PolyVectorField([x.one(), ZERO2]), PolyVectorField([ZERO2, x])])
    # {y d/dx, x d/dy} on C^3: the bracket x d/dx - y d/dy lies in their span, so involutive
    A = PolyVectorField([y3, ZERO3, ZERO3])
    B = PolyVectorField([ZERO3, x3, ZERO3])
    assert involutivity_check([A, B])
    # {d/dx, d/dy + x d/dz}: bracket d/dz is transverse
    P = PolyVectorField([x3.one(), ZERO3, ZERO3])
    Q = PolyVectorField([ZERO3, x3.one(), x3])
    res = involutivity_check([P, Q])
    assert not res
    i, j, idx, coeff = res.witness
    assert (i, j) == (0, 1) and idx == (0, 1, 2) and not coeff.is_zero


def test_non_involutive_foliation_warns():
    P = PolyVectorField([x3.one(), ZERO3, ZERO3])
    Q = PolyVectorField([ZERO3, x3.one(), x3])
    with pytest.warns(UserWarning, match="not involutive"):
        F = FoliationSpec([P, Q])
    assert F.rank == 2


def test_lie_bracket_matches_hand_computation():
    A = PolyVectorField([y3, ZERO3, ZERO3])
    B = PolyVectorField([ZERO3, x3, ZERO3])
    assert lie_bracket(A, B) == PolyVectorField([-x3, y3, ZERO3])


def test_foliation_projective_rank_limit():
    with pytest.raises(DimensionError):
        FoliationSpec([euler_field(3)] * 3, mode="projective")


# -- properties --------------------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_leibniz(seed):
    rng = random.Random(seed)
    X = random_field(rng, 3, rng.randint(0, 2))
    f, g = random_poly(rng, 3, 2), random_poly(rng, 3, 2)
    assert apply_derivation(X, f * g) == f * apply_derivation(X, g) + g * apply_derivation(X, f)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_derivation_matches_sympy(seed):
    rng = random.Random(seed)
    X = random_field(rng, 3, 2)
    f = random_poly(rng, 3, 3, nterms=4)
    s = symbols(3)
    oracle = sum(to_sympy(c, s) * sympy.diff(to_sympy(f, s), v) for c, v in zip(X.components, s))
    assert sympy.expand(to_sympy(apply_derivation(X, f), s) - oracle) == 0


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(0, 4))
def test_euler_identity(seed, m):
    f = random_poly(random.Random(seed), 3, m, homogeneous=True, nterms=4)
    assert apply_derivation(euler_field(3), f) == f * m


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 3), st.integers(1, 3))
def test_contraction_identities(seed, p, q):
    rng = random.Random(seed)
    n = 4
    if p + q > n:
        q = n - p
    X = random_field(rng, n, 1)
    w = random_form(rng, n, p, 1)
    e = random_form(rng, n, q, 1)
    if p >= 2:
        assert contract(X, contract(X, w)).is_zero
    lhs = contract(X, wedge(w, e))
    rhs = wedge(contract(X, w), e) + wedge(w, contract(X, e)) * (-1) ** p
    assert lhs == rhs


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 2))
def test_d_squared_and_graded_antisymmetry(seed, p):
    rng = random.Random(seed)
    f = random_poly(rng, 3, 3, nterms=4)
    assert exterior_derivative(differential(f)).is_zero
    w = random_form(rng, 4, p, 2)
    assert exterior_derivative(exterior_derivative(w)).is_zero
    a = random_form(rng, 4, p, 1)
    b = random_form(rng, 4, 2, 1)
    assert wedge(a, b) == wedge(b, a)
    c = random_form(rng, 4, 1, 1)
    assert wedge(a, c) == wedge(c, a) * (-1) ** p


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 3))
def test_differential_matches_sympy(seed, deg):
    f = random_poly(random.Random(seed), 3, deg, nterms=4)
    s = symbols(3)
    df = differential(f)
    for i, v in enumerate(s):
        assert sympy.expand(to_sympy(df.coefficient((i,)), s) - sympy.diff(to_sympy(f, s), v)) == 0


def _random_projective_form(rng, nvars, r, coeff_degree):
    # i_R(eta) for a homogeneous (r+1)-form eta is projective: i_R i_R = 0
    while True:
        eta = random_form(rng, nvars, r + 1, coeff_degree - 1, homogeneous=True, nterms=2)
        w = contract(euler_field(nvars), eta)
        if not w.is_zero:
            return w


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(1, 3))
def test_pfaff_degree_two_computations_agree(seed, cdeg):
    rng = random.Random(seed)
    w = _random_projective_form(rng, 3, 1, cdeg)
    assert contract(euler_field(3), w).is_zero
    assert tangency_degree(w, seed=seed) == cdeg - 1
    assert pfaff_degree(w, cross_check=True, seed=seed) == cdeg - 1


@settings(max_examples=10, deadline=None)
@given(seeds, st.integers(1, 2))
def test_pfaff_degree_two_computations_agree_codim_two(seed, cdeg):
    rng = random.Random(seed)
    w = _random_projective_form(rng, 4, 2, cdeg)
    assert pfaff_degree(w, cross_check=True, seed=seed) == cdeg - 1


def test_commuting_diagonal_fields_are_involutive():
    for a, b in itertools.combinations([(1, 0, -1), (0, 1, -1), (2, -1, -1)], 2):
        A = PolyVectorField([x3 * a[0], y3 * a[1], z3 * a[2]])
        B = PolyVectorField([x3 * b[0], y3 * b[1], z3 * b[2]])
        assert involutivity_check(FoliationSpec([A, B], mode="projective"))
