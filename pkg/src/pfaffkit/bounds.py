"""Upper bounds on the number of invariant hypersurfaces.

Global twisted forms on P^n are computed as polynomial p-forms on C^{n+1}
with homogeneous coefficients of degree m - p killed by the radial field.
Manifold-dependent inputs (Picard number, h^1 of closed 1-forms) default to
their P^n values and every report records which defaults were used.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, floor
from typing import Sequence

from .ratlinalg import field_rank

__all__ = [
    "FORMULAS",
    "BoundReport",
    "Verdict",
    "TwistedFormCount",
    "h0_twisted_forms",
    "twisted_form_count",
    "bott_formula",
    "compute_bound",
    "verdict",
    "verdict_text",
    "hyperplane_bound",
]

FORMULAS = ("jouanolou", "ghys", "correa", "jpaa", "prop11", "thm11")


@dataclass(frozen=True)
class TwistedFormCount:
    """Kernel, rank and domain size of contraction by the radial field."""

    kernel: int
    rank: int
    total: int


def _exponents(n: int, d: int):
    if n == 0:
        if d == 0:
            yield ()
        return
    for a in range(d, -1, -1):
        for rest in _exponents(n - 1, d - a):
            yield (a,) + rest


def twisted_form_count(n: int, p: int, m: int) -> TwistedFormCount:
    """Linear-algebra data for H^0(P^n, Omega^p(m)).

    Domain: p-forms on C^{n+1} with monomial coefficients of degree m - p.
    Map: contraction by the radial field into (p-1)-forms of coefficient
    degree m - p + 1.
    """
    if n < 1 or not 1 <= p:
        raise ValueError("need n >= 1 and p >= 1")
    N = n + 1
    c = m - p
    if c < 0 or p > N:
        return TwistedFormCount(0, 0, 0)
    monos = list(_exponents(N, c))
    cols = [(I, e) for I in itertools.combinations(range(N), p) for e in monos]
    index = {}
    entries = []
    for col, (I, e) in enumerate(cols):
        # i_R(x^e dx_I) = sum_k (-1)^k x_{I_k} x^e dx_{I without I_k}
        for k, i in enumerate(I):
            J = I[:k] + I[k + 1 :]
            f = e[:i] + (e[i] + 1,) + e[i + 1 :]
            row = index.setdefault((J, f), len(index))
            entries.append((row, col, -1 if k % 2 else 1))
    dense = [[0] * len(cols) for _ in range(len(index))]
    for r, col, s in entries:
        dense[r][col] += s
    rank = field_rank(dense, len(cols)) if dense else 0
    return TwistedFormCount(len(cols) - rank, rank, len(cols))


def h0_twisted_forms(n: int, p: int, m: int) -> int:
    """dim H^0(P^n, Omega^p(m)) via the kernel of contraction by the radial field."""
    if not 1 <= p <= n:
        raise ValueError("need 1 <= p <= n")
    return twisted_form_count(n, p, m).kernel


def bott_formula(n: int, p: int, m: int) -> int:
    """Closed-form dim H^0(P^n, Omega^p(m)) for 1 <= p <= n."""
    if m <= p:
        return 0
    return comb(m + n - p, m) * comb(m - 1, p)


@dataclass
class BoundReport:
    formula: str
    params: dict
    value: int
    exact: Fraction | None = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {
            "formula": self.formula,
            "params": {k: _jsonable(v) for k, v in sorted(self.params.items())},
            "value": str(self.value),
            "notes": list(self.notes),
        }
        if self.exact is not None:
            out["exact"] = str(self.exact)
        return out


def _jsonable(v):
    if isinstance(v, (list, tuple)):
        return [str(x) for x in v]
    return str(v)


def _require(name, value):
    if value is None:
        raise ValueError(f"parameter {name!r} is required for this formula")
    return value


def _quotient(h0, omega, closed_forms, notes):
    # dim [H^0(Omega^{r+1} L) / omega ^ H^0(closed 1-forms)]
    if not closed_forms:
        notes.append("no closed 1-forms supplied: quotient term equals h0")
        return h0
    if omega is None:
        raise ValueError("closed_forms requires the form omega")
    prods = [omega * a for a in closed_forms]
    keys = sorted({(I, e) for w in prods for I, c in w.items() for e, _ in c.items()})
    rows = [[w.coefficient(I).coeff(e) for (I, e) in keys] for w in prods]
    rk = field_rank(rows, len(keys)) if keys else 0
    notes.append(f"quotient by omega ^ closed forms: rank {rk}")
    return h0 - rk


def compute_bound(
    formula: str,
    *,
    n: int | None = None,
    r: int | None = None,
    d: int | None = None,
    nu: int | None = None,
    degrees: Sequence[int] | None = None,
    h1cl: int | None = None,
    h0cl: int | None = None,
    picard: int | None = None,
    omega=None,
    closed_forms: Sequence = (),
) -> BoundReport:
    """Evaluate one of the bounds in ``FORMULAS`` on P^n (or C^n for jpaa)."""
    if formula not in FORMULAS:
        raise ValueError(f"unknown formula {formula!r}; choose from {', '.join(FORMULAS)}")
    notes: list[str] = []
    n = _require("n", n)
    if n < 1:
        raise ValueError("n must be positive")
    if formula in ("ghys", "thm11", "correa") and h1cl is None:
        h1cl = 1
        notes.append("h1cl = 1 (default for P^n)")
    if formula in ("ghys", "thm11", "correa") and h0cl is None:
        h0cl = len(closed_forms)
        if not closed_forms:
            notes.append("h0cl = 0 (default for P^n)")

    if formula == "jpaa":
        r, d = _require("r", r), _require("d", d)
        if d < 1 or r < 1:
            raise ValueError("jpaa needs d >= 1 and r >= 1")
        value = comb(d - 1 + n, n) * comb(n, r + 1) + r + 1
        return BoundReport(formula, {"n": n, "r": r, "d": d}, value, None, notes)

    if formula == "prop11":
        nu, degrees = _require("nu", nu), _require("degrees", degrees)
        degrees = [int(x) for x in degrees]
        r = len(degrees) if r is None else r
        if nu == 0 or r == 0:
            raise ValueError("prop11 needs nu >= 1 and r >= 1")
        if len(degrees) != r:
            raise ValueError("prop11 needs one degree per generator")
        total = sum(degrees)
        if d is not None and d != total:
            raise ValueError(f"split tangent sheaf requires sum of degrees {total} to equal d = {d}")
        K = comb(nu + n, n)
        exact = K + Fraction(total, nu * r) * comb(K, 2) - Fraction(1, nu) * comb(K, 2)
        value = max(0, floor(exact))
        params = {"n": n, "r": r, "nu": nu, "degrees": degrees, "d": total}
        return BoundReport(formula, params, value, exact, notes)

    if formula == "jouanolou":
        d = _require("d", d)
        if picard is None:
            picard = 1
            notes.append("picard = 1 (default for P^n)")
        h0 = h0_twisted_forms(n, 2, d + 2) if n >= 2 else 0
        value = h0 + picard + 1
        return BoundReport(formula, {"n": n, "r": 1, "d": d, "picard": picard}, value, None, notes)

    if formula == "correa":
        d = _require("d", d)
        value = comb(d - 1 + n, n) + h1cl + n
        params = {"n": n, "r": 1, "d": d, "h1cl": h1cl, "h0cl": h0cl}
        return BoundReport(formula, params, value, None, notes)

    # ghys is thm11 with r = 1
    if formula == "ghys":
        r = 1 if r is None else r
        if r != 1:
            raise ValueError("ghys is the codimension-one case")
    r, d = _require("r", r), _require("d", d)
    if r < 1:
        raise ValueError("r must be positive")
    h0 = h0_twisted_forms(n, r + 1, d + r + 1) if r + 1 <= n else 0
    quot = _quotient(h0, omega, closed_forms, notes)
    value = quot + h1cl + r + 1
    params = {"n": n, "r": r, "d": d, "h1cl": h1cl, "h0cl": h0cl}
    return BoundReport(formula, params, value, None, notes)


class Verdict(str, enum.Enum):
    BELOW = "below_bound"
    AT_OR_ABOVE = "at_or_above_bound_first_integral_predicted"


def verdict(count: int, report: BoundReport) -> Verdict:
    """Compare a count of invariant hypersurfaces with a bound.

    prop11 bounds the count when no first integral exists, so only exceeding
    it predicts one; the other formulas are thresholds reached at equality.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    if report.formula == "prop11":
        return Verdict.AT_OR_ABOVE if count > report.value else Verdict.BELOW
    return Verdict.AT_OR_ABOVE if count >= report.value else Verdict.BELOW


def verdict_text(v: Verdict, report: BoundReport) -> str:
    if v is Verdict.BELOW:
        return f"count is compatible with the {report.formula} bound {report.value}"
    return (
        f"count reaches the {report.formula} bound {report.value}: "
        "a meromorphic first integral is predicted"
    )


def hyperplane_bound(n: int, degree: int) -> Fraction:
    """(n+1)/(n-1) * deg: invariant-hyperplane cap for codimension-one foliations."""
    if n < 2:
        raise ValueError("need n >= 2")
    return Fraction(n + 1, n - 1) * degree
