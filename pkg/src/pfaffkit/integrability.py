"""Invariance certificates, first integrals and Darboux logarithmic certificates.

A hypersurface f = 0 is invariant under a foliation when every generator
satisfies X_i(f) = K_i f, and a solution of a Pfaff form when f divides every
coefficient of w ^ df. First integrals come either from a minimal linear
dependence among jets (the rank test) or from rational combinations
sum l_i df_i / f_i that are annihilated by w.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .diffcalc import (
    FoliationSpec,
    PolyDifferentialForm,
    contract,
    differential,
    euler_field,
    wedge,
)
from .errors import InternalConsistencyError, NotProjectiveError, PfaffkitError
from .exact import Polynomial, RationalFunction, exact_divide, gcd
from .extactic import LinearSystem, build_jet_matrix
from .ratlinalg import KernelResult, field_nullspace, field_rref, kernel_min_support, rank_ratfunc

__all__ = [
    "Refusal",
    "InvariantCertificate",
    "FirstIntegralCandidate",
    "RankTestResult",
    "LogCertificate",
    "DarbouxReport",
    "certify_invariant",
    "verify_first_integral",
    "rank_first_integral",
    "darboux_log_certificate",
    "ratio_extraction",
    "extract_first_integral",
]


@dataclass(frozen=True)
class Refusal:
    """A negative answer with a reason; falsy so callers can branch on it."""

    reason: str
    detail: str = ""

    def __bool__(self):
        return False

    def __str__(self):
        return self.reason + (f": {self.detail}" if self.detail else "")


@dataclass
class InvariantCertificate:
    f: Polynomial
    mode: str  # "foliation" or "pfaff_form"
    cofactors: list[Polynomial] = field(default_factory=list)
    quotient: PolyDifferentialForm | None = None
    verified: bool = False

    def __bool__(self):
        return True

    def recheck(self, source) -> bool:
        """Re-verify the defining identity against the field list or form."""
        if self.mode == "foliation":
            F = FoliationSpec.coerce(source)
            return all((X(self.f) - K * self.f).is_zero for X, K in zip(F.generators, self.cofactors))
        w = _wedge_df(source, self.f)
        if w is None:
            return True
        return w == self.quotient * self.f


@dataclass
class FirstIntegralCandidate:
    value: RationalFunction
    source: str  # "rank_test", "log_certificate" or "user"
    verified: bool = False

    def to_string(self, names=None) -> str:
        return self.value.to_string(names)


def _is_form(obj) -> bool:
    return isinstance(obj, PolyDifferentialForm)


def _is_projective_form(omega: PolyDifferentialForm) -> bool:
    if omega.coefficient_degree is None:
        return False
    return contract(euler_field(omega.nvars, omega.modulus), omega).is_zero


def _wedge_df(omega: PolyDifferentialForm, f: Polynomial):
    # None when w ^ df would exceed the top degree (it then vanishes trivially)
    if omega.degree + 1 > omega.nvars:
        return None
    return wedge(omega, differential(f))


def certify_invariant(source, f: Polynomial):
    """Certificate that {f = 0} is invariant, or a Refusal naming the failure.

    ``source`` is a FoliationSpec (or vector field, or list of them) or a
    PolyDifferentialForm.
    """
    if f.is_zero or f.is_constant:
        raise ValueError("invariance is only defined for nonconstant f")
    if _is_form(source):
        if _is_projective_form(source) and not f.is_homogeneous():
            raise NotProjectiveError("projective forms need homogeneous candidates")
        w = _wedge_df(source, f)
        if w is None:
            return InvariantCertificate(f, "pfaff_form", [], None, True)
        quot = {}
        for I, a in w.items():
            q = exact_divide(a, f)
            if q is None:
                return Refusal("not invariant", f"coefficient at index {I} of w ^ df is not divisible by f")
            quot[I] = q
        Q = PolyDifferentialForm(w.nvars, w.degree, quot, w.modulus)
        return InvariantCertificate(f, "pfaff_form", [], Q, True)
    F = FoliationSpec.coerce(source)
    if F.mode == "projective" and not f.is_homogeneous():
        raise NotProjectiveError("projective foliations need homogeneous candidates")
    cofs = []
    for i, X in enumerate(F.generators):
        K = exact_divide(X(f), f)
        if K is None:
            return Refusal("not invariant", f"generator {i} does not map f into (f)")
        if F.mode == "projective" and K and (not K.is_homogeneous() or K.degree != F.degrees[i] - 1):
            raise InternalConsistencyError(
                f"cofactor of generator {i} has degree {K.degree}, expected {F.degrees[i] - 1}"
            )
        cofs.append(K)
    return InvariantCertificate(f, "foliation", cofs, None, True)


def _as_ratfunc(g) -> RationalFunction:
    return g if isinstance(g, RationalFunction) else RationalFunction(g)


def verify_first_integral(source, g) -> bool:
    """Exact check that g = P/Q is annihilated by the foliation or form."""
    g = _as_ratfunc(g)
    if g.is_constant:
        raise ValueError("constant functions are not first integrals")
    P, Q = g.num, g.den
    if _is_form(source):
        if source.degree + 1 > source.nvars:
            return True
        dg = differential(P) * Q - differential(Q) * P
        return wedge(dg, source).is_zero
    F = FoliationSpec.coerce(source)
    return all((X(P) * Q - P * X(Q)).is_zero for X in F.generators)


# -- rank test -----------------------------------------------------------------


@dataclass
class RankTestResult:
    rank: int
    k: int
    order: int
    candidates: list[FirstIntegralCandidate] = field(default_factory=list)
    kernel: KernelResult | None = None

    @property
    def full_rank(self) -> bool:
        return self.rank == self.k

    @property
    def status(self) -> str:
        return "full rank" if self.full_rank else "ok"

    def __iter__(self):
        return iter(self.candidates)


def _candidates_from(kernel: KernelResult, F: FoliationSpec):
    out, failed = [], 0
    for theta in kernel.vector:
        if theta.is_zero or theta.is_constant:
            continue
        if verify_first_integral(F, theta):
            out.append(FirstIntegralCandidate(theta, "rank_test", True))
        else:
            failed += 1
    return out, failed


def rank_first_integral(F, V: LinearSystem | Sequence[Polynomial], *, order: int | None = None) -> RankTestResult:
    """Rank test on the order-k jet matrix, k = dim V.

    Rank below k yields a kernel vector (theta_1, ..., 1) of minimal support;
    its nonconstant entries are first integrals. Every candidate returned is
    verified. The default order is k; ``order`` overrides it.
    """
    F = FoliationSpec.coerce(F)
    V = V if isinstance(V, LinearSystem) else LinearSystem(V)
    k = V.k
    order = k if order is None else order
    jm = build_jet_matrix(F, V, order)
    rank = rank_ratfunc(jm.matrix)
    if rank == k:
        return RankTestResult(rank, k, order)
    kernel = kernel_min_support(jm.matrix)
    cands, failed = _candidates_from(kernel, F)
    if failed or not cands:
        # the greedy support may not be minimal; search exhaustively
        kernel = kernel_min_support(jm.matrix, exact=True)
        cands, failed = _candidates_from(kernel, F)
    if not cands:
        raise InternalConsistencyError(
            "minimal dependence produced no nonconstant first integral; "
            "the basis of V may be dependent or the order too low"
        )
    return RankTestResult(rank, k, order, cands, kernel)


# -- Darboux logarithmic certificates ------------------------------------------------


@dataclass
class LogCertificate:
    """Rationals l_i with sum_i l_i (prod_{j != i} f_j) (w ^ df_i) = 0."""

    invariants: list[Polynomial]
    lam: list[Fraction]
    residual: PolyDifferentialForm | None

    def integer_exponents(self) -> list[int]:
        den = lcm(*(Fraction(c).denominator for c in self.lam))
        ints = [int(Fraction(c) * den) for c in self.lam]
        from math import gcd as igcd

        g = 0
        for c in ints:
            g = igcd(g, c)
        return [c // g for c in ints] if g else ints

    def candidate(self) -> RationalFunction:
        """prod f_i^{l_i}, with the exponents scaled to coprime integers."""
        one = self.invariants[0].one()
        num, den = one, one
        for f, e in zip(self.invariants, self.integer_exponents()):
            if e > 0:
                num = num * f**e
            elif e < 0:
                den = den * f ** (-e)
        return RationalFunction(num, den)


@dataclass
class DarbouxReport:
    certificates: list[LogCertificate]
    invariants: list[Polynomial]
    dimension: int
    first_integral_regime: bool
    first_integrals: list[FirstIntegralCandidate] = field(default_factory=list)

    def __iter__(self):
        return iter(self.certificates)

    def __len__(self):
        return len(self.certificates)


def _scalar_rows(terms: list[PolyDifferentialForm | None], modulus):
    keys = sorted({(I, e) for w in terms if w is not None for I, a in w.items() for e, _ in a.items()})
    rows = []
    for I, e in keys:
        row = []
        for w in terms:
            c = w.coefficient(I).coeff(e) if w is not None else 0
            row.append(int(c) if modulus is not None else Fraction(c))
        rows.append(row)
    return rows


def _log_terms(omega, fs):
    terms = []
    for i, f in enumerate(fs):
        w = _wedge_df(omega, f)
        if w is None:
            terms.append(None)
            continue
        other = f.one()
        for j, g in enumerate(fs):
            if j != i:
                other = other * g
        terms.append(w * other)
    return terms


def darboux_log_certificate(omega: PolyDifferentialForm, certs: Sequence[InvariantCertificate]) -> DarbouxReport:
    """Basis of all l with w ^ sum l_i df_i / f_i = 0, cleared of denominators.

    The invariants must be certified against ``omega`` and pairwise coprime.
    Each basis vector has first nonzero entry 1. A solution space of
    dimension at least r + 1 is flagged as the first-integral regime.
    """
    if not certs:
        raise ValueError("need at least one certified invariant")
    fs = []
    for c in certs:
        if not isinstance(c, InvariantCertificate) or c.mode != "pfaff_form" or not c.verified:
            raise ValueError("darboux certificates need invariants certified against the form")
        if not c.recheck(omega):
            raise ValueError(f"{c.f} is not certified against this form")
        fs.append(c.f)
    for i in range(len(fs)):
        for j in range(i + 1, len(fs)):
            if not gcd(fs[i], fs[j]).is_constant:
                raise ValueError(f"invariants {i} and {j} share a common factor")
    terms = _log_terms(omega, fs)
    p = omega.modulus
    rows = _scalar_rows(terms, p)
    basis = field_nullspace(rows, len(fs), p)
    if basis:
        basis, _ = field_rref(basis, len(fs), p)
    certs_out = []
    for lam in basis:
        lam = [Fraction(c) if p is None else c for c in lam]
        residual = _combine(terms, lam)
        if residual is not None and not residual.is_zero:
            raise InternalConsistencyError("logarithmic residual does not vanish")
        certs_out.append(LogCertificate(fs, lam, residual))
    fis = []
    if p is None:
        for c in certs_out:
            R = c.candidate()
            if not R.is_constant and verify_first_integral(omega, R):
                fis.append(FirstIntegralCandidate(R, "log_certificate", True))
    dim = len(certs_out)
    return DarbouxReport(certs_out, fs, dim, dim >= omega.degree + 1, fis)


def _combine(terms, lam):
    acc = None
    for w, c in zip(terms, lam):
        if w is None or not c:
            continue
        t = w * c
        acc = t if acc is None else acc + t
    return acc


def _cleared_log_form(cert: LogCertificate) -> tuple[PolyDifferentialForm, Polynomial]:
    # (sum l_i (prod_{j != i} f_j) df_i, prod f_j)
    fs = cert.invariants
    n = fs[0].nvars
    eta = PolyDifferentialForm(n, 1, {}, fs[0].modulus)
    P = fs[0].one()
    for f in fs:
        P = P * f
    for i, (f, c) in enumerate(zip(fs, cert.lam)):
        if not c:
            continue
        other = f.one()
        for j, g in enumerate(fs):
            if j != i:
                other = other * g
        eta = eta + differential(f) * (other * c)
    return eta, P


def _proportionality_factor(omega, eta, P):
    # R with omega = R * eta / P, or None if not proportional
    I = next((I for I, _ in eta.items()), None)
    if I is None:
        return None
    R = RationalFunction(omega.coefficient(I) * P, eta.coefficient(I))
    for J, _ in list(omega.items()) + list(eta.items()):
        if omega.coefficient(J) * eta.coefficient(I) != omega.coefficient(I) * eta.coefficient(J):
            return None
    return R


def ratio_extraction(cert_a: LogCertificate, cert_b: LogCertificate | None, omega: PolyDifferentialForm):
    """First integral R_A / R_B from two independent logarithmic certificates.

    Writing w = R_A * eta_A = R_B * eta_B with eta = sum l_i df_i / f_i, the
    ratio of the two factors is constant along the leaves.
    """
    if omega.degree != 1:
        raise PfaffkitError("ratio extraction is not implemented for r > 1; use rank_first_integral")
    if cert_b is None:
        return Refusal("need two independent certificates")
    if [f for f in cert_a.invariants] != [f for f in cert_b.invariants]:
        raise ValueError("certificates must share the same invariant list")
    pairs = [(Fraction(a), Fraction(b)) for a, b in zip(cert_a.lam, cert_b.lam)]
    if all(a * pairs[j][1] == b * pairs[j][0] for a, b in pairs for j in range(len(pairs))):
        raise ValueError("certificate exponent vectors are linearly dependent")
    eta_a, P = _cleared_log_form(cert_a)
    eta_b, _ = _cleared_log_form(cert_b)
    R_a = _proportionality_factor(omega, eta_a, P)
    R_b = _proportionality_factor(omega, eta_b, P)
    if R_a is None or R_b is None or R_b.is_zero or R_a.is_zero:
        return Refusal("division failed", "w is not proportional to the logarithmic form")
    R = R_a / R_b
    if R.is_constant:
        return Refusal("constant ratio", "certificates give proportional logarithmic forms")
    if not verify_first_integral(omega, R):
        raise InternalConsistencyError("extracted ratio fails verification")
    return FirstIntegralCandidate(R, "log_certificate", True)


def extract_first_integral(report: DarbouxReport, omega: PolyDifferentialForm):
    """A first integral from a Darboux report, or a Refusal with a hint.

    Verified products of integer powers are returned first; otherwise the
    ratio of the first two certificates is tried.
    """
    if report.first_integrals:
        return report.first_integrals[0]
    if len(report.certificates) < 2:
        return Refusal(
            "need two independent certificates",
            "run rank_first_integral on a monomial linear system instead",
        )
    out = ratio_extraction(report.certificates[0], report.certificates[1], omega)
    if not out:
        return Refusal(out.reason, "run rank_first_integral on a monomial linear system instead")
    return out
