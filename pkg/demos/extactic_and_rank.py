"""
Extactic curves and the rank test
=================================

For a vector field X and a linear system V = <s_1, ..., s_k>, the extactic
is the determinant of the jets X^j(s_i), j < k.  Invariant curves taken from
V divide it, and it vanishes identically exactly when V carries a first
integral.
"""

from pfaffkit import (
    LinearSystem,
    PolyVectorField,
    euler_field,
    extactic_single,
    rank_first_integral,
    sieve_divisibility,
    variables,
)

x, y = variables(2)
V = LinearSystem.monomials(2, 1, homogeneous=False)  # 1, x, y

X = PolyVectorField([x, 2 * y])
E = extactic_single(X, V)
print("extactic of x d/dx + 2y d/dy:", E)

# the axes are invariant, so they survive the sieve
for f in (x, y, x + y):
    print(f, sieve_divisibility(f, E))

# nonzero extactic: V has no first integral
print(rank_first_integral(X, V).status)

# the radial field has a first integral of degree one
R = euler_field(2)
print("extactic of the radial field:", extactic_single(R, V))
res = rank_first_integral(R, [x, y])
for cand in res.candidates:
    print("first integral:", cand.value, "verified:", cand.verified)
