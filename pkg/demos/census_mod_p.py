"""
Counting invariant lines over a finite field
============================================

Over F_p every candidate can be tried.  The census lists the monic
polynomials of a given degree that are invariant for a field, which makes a
handy cross-check for the rational machinery.
"""

from pfaffkit import FoliationSpec, PolyVectorField, enumerate_invariants_modp, variables

NAMES = ["x", "y"]
x, y = variables(2)

# x + y - 1 is invariant: X(L) = (x - y) L
L = x + y - 1
X = PolyVectorField([x * L + (x - y), -y * L - (x - y)])
print("X =", X.components[0].to_string(NAMES), ",", X.components[1].to_string(NAMES))

for p in (5, 7, 11):
    res = enumerate_invariants_modp(FoliationSpec([X]), 1, p)
    print(f"p = {p}: {res.candidates} candidates")
    for f, cofactors in res.members:
        print("   ", f.to_string(NAMES), "  cofactor", cofactors[0].to_string(NAMES))
