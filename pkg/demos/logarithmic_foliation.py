"""
A logarithmic foliation of the projective plane
===============================================

The form  w = yz dx + xz dy - 2xy dz  on C^3 is the logarithmic form with
residues (1, 1, -2).  It descends to a degree-1 foliation of P^2 that leaves
the three coordinate lines invariant.
"""

from pfaffkit import (
    PolyDifferentialForm,
    certify_invariant,
    contract,
    darboux_log_certificate,
    euler_field,
    pfaff_degree,
    variables,
)
from pfaffkit.bounds import compute_bound, verdict

x, y, z = variables(3)
w = PolyDifferentialForm.one_form([y * z, x * z, -2 * x * y])
print("w =", w)

# contraction with the radial field vanishes, so w is projective
print("i_R w =", contract(euler_field(3), w))
print("degree on P^2:", pfaff_degree(w))

# each coordinate hyperplane is a solution; the certificate is a divisibility
certs = [certify_invariant(w, h) for h in (x, y, z)]
for c in certs:
    print(c.f, "invariant:", bool(c))

# the residues come back from the logarithmic certificate
report = darboux_log_certificate(w, certs)
print("lambda space:", [[str(v) for v in c.lam] for c in report.certificates])
for fi in report.first_integrals:
    print("first integral:", fi.value.to_string(["x", "y", "z"]), "verified:", fi.verified)

# three invariant lines against the linear-generator bound
bound = compute_bound("prop11", n=2, nu=1, degrees=[1])
print("bound:", bound.value, "->", verdict(len(certs), bound).value)
