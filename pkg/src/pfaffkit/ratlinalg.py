"""Exact linear algebra over polynomial rings and their fraction fields.

The reference determinant is single-step Bareiss elimination. The modular
path clears denominators, computes determinant images over several large
primes by evaluation on a grid and interpolation, and lifts with the Chinese
remainder theorem until a Hadamard-type coefficient bound is exceeded.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm, prod
from typing import Sequence

from .errors import DimensionError, InternalConsistencyError, TrivialKernelError
from .exact import Polynomial, RationalFunction, _grlex, exact_divide, is_prime

__all__ = [
    "PolyMatrix",
    "KernelResult",
    "det_fraction_free",
    "rank_ratfunc",
    "kernel_min_support",
    "fraction_free_echelon",
    "field_rref",
    "field_rank",
    "field_nullspace",
    "random_prime",
    "MODULAR_THRESHOLD",
]

MODULAR_THRESHOLD = 10**4


class PolyMatrix:
    """Dense matrix of polynomials sharing one ring."""

    __slots__ = ("entries", "rows", "cols", "degree_bounds")

    def __init__(self, entries: Sequence[Sequence[Polynomial]], degree_bounds: Sequence[int] | None = None):
        rows = tuple(tuple(r) for r in entries)
        if not rows or not rows[0]:
            raise DimensionError("empty matrix")
        cols = len(rows[0])
        ref = rows[0][0]
        for r in rows:
            if len(r) != cols:
                raise DimensionError("ragged matrix")
            for e in r:
                ref._lift(e)
        actual = [max(e.degree for e in r) for r in rows]
        if degree_bounds is None:
            degree_bounds = actual
        elif any(b < a for a, b in zip(actual, degree_bounds)):
            raise ValueError("degree bounds do not dominate entry degrees")
        self.entries = rows
        self.rows = len(rows)
        self.cols = cols
        self.degree_bounds = tuple(degree_bounds)

    @classmethod
    def identity_like(cls, diag: Sequence[Polynomial]) -> "PolyMatrix":
        z = diag[0].zero()
        return cls([[d if i == j else z for j in range(len(diag))] for i, d in enumerate(diag)])

    @property
    def nvars(self):
        return self.entries[0][0].nvars

    @property
    def modulus(self):
        return self.entries[0][0].modulus

    @property
    def is_square(self):
        return self.rows == self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int] | None = None) -> "PolyMatrix":
        cols = range(self.cols) if cols is None else cols
        return PolyMatrix([[self.entries[i][j] for j in cols] for i in rows])

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix([[fn(e) for e in r] for r in self.entries])

    def reduce_mod(self, p: int) -> "PolyMatrix":
        return self.map(lambda e: e.reduce_mod(p))

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.entries == other.entries

    def to_lists(self, names=None) -> list[list[str]]:
        return [[e.to_string(names) for e in r] for r in self.entries]

    def __repr__(self):
        return f"PolyMatrix({self.to_lists()})"


def _pivot_key(f: Polynomial):
    lm = max(f._terms, key=_grlex)
    return (f.degree, _grlex(lm))


def _divide(num: Polynomial, den: Polynomial) -> Polynomial:
    if den.is_constant:
        return num.scale_inverse(den._terms[(0,) * den.nvars]) if den != 1 else num
    q = exact_divide(num, den)
    if q is None:
        raise InternalConsistencyError("Bareiss division was not exact")
    return q


def _bareiss(A: list[list[Polynomial]]) -> Polynomial:
    n = len(A)
    A = [list(r) for r in A]
    zero = A[0][0].zero()
    sign = 1
    prev = A[0][0].one()
    for k in range(n - 1):
        cand = [i for i in range(k, n) if A[i][k]]
        if not cand:
            return zero
        piv = min(cand, key=lambda i: _pivot_key(A[i][k]))
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                t = akk * row_i[j]
                if aik and row_k[j]:
                    t = t - aik * row_k[j]
                row_i[j] = _divide(t, prev)
            row_i[k] = zero
        prev = akk
    d = A[n - 1][n - 1]
    return d if sign > 0 else -d


def fraction_free_echelon(M: PolyMatrix) -> tuple[list[list[Polynomial]], list[int]]:
    """Fraction-free row echelon form and its pivot columns."""
    A = [list(r) for r in M.entries]
    m, n = M.rows, M.cols
    zero = A[0][0].zero()
    prev = A[0][0].one()
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        cand = [i for i in range(r, m) if A[i][c]]
        if not cand:
            continue
        piv = min(cand, key=lambda i: _pivot_key(A[i][c]))
        if piv != r:
            A[r], A[piv] = A[piv], A[r]
        arc = A[r][c]
        for i in range(r + 1, m):
            aic = A[i][c]
            row_i, row_r = A[i], A[r]
            for j in range(c + 1, n):
                t = arc * row_i[j]
                if aic and row_r[j]:
                    t = t - aic * row_r[j]
                row_i[j] = _divide(t, prev)
            row_i[c] = zero
        prev = arc
        pivots.append(c)
        r += 1
    return A, pivots


def rank_ratfunc(M: PolyMatrix) -> int:
    """Rank over the field of rational functions."""
    return len(fraction_free_echelon(M)[1])


# -- modular determinant ---------------------------------------------------------


def random_prime(rng: random.Random, bits: int = 62) -> int:
    n = rng.getrandbits(bits) | (1 << (bits - 1)) | 1
    while not is_prime(n):
        n += 2
    return n


def _det_scalar_mod(A: list[list[int]], p: int) -> int:
    A = [r[:] for r in A]
    n = len(A)
    det = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            det = -det
        akk = A[k][k]
        det = det * akk % p
        inv = pow(akk, -1, p)
        for i in range(k + 1, n):
            if A[i][k]:
                f = A[i][k] * inv % p
                ri, rk = A[i], A[k]
                for j in range(k + 1, n):
                    ri[j] = (ri[j] - f * rk[j]) % p
    return det % p


def _interp_coeffs(vals: list[int], p: int) -> list[int]:
    """Monomial coefficients of the polynomial through (j, vals[j]), j = 0..D."""
    D = len(vals) - 1
    c = list(vals)
    for k in range(1, D + 1):
        for j in range(D, k - 1, -1):
            c[j] = (c[j] - c[j - 1]) * pow(k, -1, p) % p
    # Newton basis prod_{i<j}(x - i) -> monomial basis
    out = [0] * (D + 1)
    for j in range(D, -1, -1):
        # out = out * (x - j) + c[j]
        nxt = [0] * (D + 1)
        for i in range(D):
            if out[i]:
                nxt[i + 1] = (nxt[i + 1] + out[i]) % p
                nxt[i] = (nxt[i] - j * out[i]) % p
        nxt[0] = (nxt[0] + c[j]) % p
        out = nxt
    return out


def _det_image(entries: list[list[list[tuple]]], nvars: int, D: int, p: int) -> dict:
    """Determinant mod p of a polynomial matrix by grid evaluation + interpolation."""
    size = D + 1
    powtab = [[pow(a, k, p) for k in range(size)] for a in range(size)]
    vals = []
    for point in itertools.product(range(size), repeat=nvars):
        mat = []
        for row in entries:
            mrow = []
            for terms in row:
                s = 0
                for e, c in terms:
                    t = c
                    for a, k in zip(point, e):
                        if k:
                            t = t * powtab[a][k]
                    s += t
                mrow.append(s % p)
            mat.append(mrow)
        vals.append(_det_scalar_mod(mat, p))
    # itertools.product varies the last variable fastest
    stride = 1
    for v in range(nvars - 1, -1, -1):
        block = stride * size
        for base in range(0, len(vals), block):
            for off in range(stride):
                idx = [base + off + j * stride for j in range(size)]
                coeffs = _interp_coeffs([vals[i] for i in idx], p)
                for i, c in zip(idx, coeffs):
                    vals[i] = c
        stride = block
    out = {}
    for flat, c in enumerate(vals):
        if c:
            e = []
            rem = flat
            for _ in range(nvars):
                rem, k = divmod(rem, size)
                e.append(k)
            e.reverse()
            if sum(e) <= D:
                out[tuple(e)] = c
    return out


def _det_modular(M: PolyMatrix, seed: int) -> Polynomial:
    nvars = M.nvars
    zero = M.entries[0][0].zero()
    if any(not any(r) for r in M.entries):
        return zero
    D = sum(M.degree_bounds)
    if M.modulus is not None:
        p = M.modulus
        if D + 1 > p:
            return _bareiss([list(r) for r in M.entries])
        entries = [[list(e._terms.items()) for e in r] for r in M.entries]
        return Polynomial._make(nvars, p, _det_image(entries, nvars, D, p))
    scales = []
    int_rows = []
    for r in M.entries:
        s = lcm(*(Fraction(c).denominator for e in r for c in e._terms.values()))
        scales.append(s)
        int_rows.append([[(k, int(c * s)) for k, c in e._terms.items()] for e in r])
    bound = prod(sum(abs(c) for e in r for _, c in e) for r in int_rows)
    rng = random.Random(seed)
    primes: list[int] = []
    modulus = 1
    while modulus <= 2 * bound:
        p = random_prime(rng)
        if p not in primes:
            primes.append(p)
            modulus *= p
    primes.sort()
    acc: dict = {}
    m = 1
    for p in primes:
        img = _det_image([[[(k, c % p) for k, c in e] for e in r] for r in int_rows], nvars, D, p)
        inv = pow(m, -1, p)
        for k in set(acc) | set(img):
            a = acc.get(k, 0)
            t = (img.get(k, 0) - a) * inv % p
            acc[k] = a + m * t
        m *= p
    out = {}
    total_scale = prod(scales)
    for k, c in acc.items():
        c %= m
        if c > m // 2:
            c -= m
        if c:
            out[k] = Fraction(c, total_scale)
    return Polynomial(nvars, out)


def det_fraction_free(M: PolyMatrix, strategy: str | None = None, *, seed: int = 0) -> Polynomial:
    """Exact determinant.

    ``strategy`` is ``"bareiss"``, ``"modular_crt"`` or None (automatic: the
    modular path once the product of row degree bounds exceeds
    ``MODULAR_THRESHOLD``).
    """
    if not M.is_square:
        raise DimensionError("determinant of a non-square matrix")
    if strategy is None:
        strategy = "modular_crt" if prod(max(b, 1) for b in M.degree_bounds) > MODULAR_THRESHOLD else "bareiss"
    if M.rows == 1:
        return M.entries[0][0]
    if strategy == "bareiss":
        return _bareiss([list(r) for r in M.entries])
    if strategy == "modular_crt":
        return _det_modular(M, seed)
    raise ValueError(f"unknown strategy {strategy!r}")


# -- kernels over the rational function field ----------------------------------------


@dataclass
class KernelResult:
    """Kernel basis in reduced echelon form plus one support-minimal vector."""

    basis: list[list[RationalFunction]]
    vector: list[RationalFunction]
    support: tuple[int, ...]
    cap: int
    exhaustive: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def guaranteed_minimal(self) -> bool:
        return self.exhaustive or len(self.support) == 1


def _kernel_basis(M: PolyMatrix) -> list[list[RationalFunction]]:
    E, pivots = fraction_free_echelon(M)
    n = M.cols
    if len(pivots) == n:
        raise TrivialKernelError("trivial kernel: matrix has full column rank")
    zero = RationalFunction(E[0][0].zero())
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * n
        v[f] = RationalFunction(E[0][0].one())
        for t in range(len(pivots) - 1, -1, -1):
            c = pivots[t]
            acc = zero
            for j in range(c + 1, n):
                if E[t][j] and not v[j].is_zero:
                    acc = acc + v[j] * E[t][j]
            v[c] = -acc / E[t][c]
        basis.append(v)
    return basis


def _support(v) -> tuple[int, ...]:
    return tuple(i for i, x in enumerate(v) if not x.is_zero)


def _normalize_last(v):
    last = v[_support(v)[-1]]
    return [x / last for x in v]


def _exact_min_support(M: PolyMatrix):
    n = M.cols
    for s in range(1, n + 1):
        for S in itertools.combinations(range(n), s):
            sub = M.submatrix(range(M.rows), S)
            if rank_ratfunc(sub) < s:
                w = _kernel_basis(sub)[0]
                v = [RationalFunction(M.entries[0][0].zero())] * n
                for i, x in zip(S, w):
                    v[i] = x
                return v
    raise TrivialKernelError("trivial kernel: matrix has full column rank")


def kernel_min_support(M: PolyMatrix, cap: int = 2, *, exact: bool = False) -> KernelResult:
    """Right kernel over the rational functions and a vector of small support.

    The greedy search tries single basis vectors and, when ``cap >= 2``,
    pairwise eliminations between them. ``exact=True`` instead searches
    column subsets by increasing size, which proves minimality.
    """
    basis = _kernel_basis(M)
    if exact:
        best = _exact_min_support(M)
    else:
        cands = list(basis)
        if cap >= 2:
            for u, w in itertools.combinations(basis, 2):
                for c in range(M.cols):
                    if not u[c].is_zero and not w[c].is_zero:
                        t = u[c] / w[c]
                        cands.append([a - t * b for a, b in zip(u, w)])
        best = min(cands, key=lambda v: len(_support(v)))
    vec = _normalize_last(best)
    return KernelResult(basis, vec, _support(vec), cap, exhaustive=exact)


# -- scalar linear algebra over Q or F_p ---------------------------------------------


def field_rref(rows: Sequence[Sequence], ncols: int, modulus: int | None = None):
    """Reduced row echelon form over Q (Fractions) or F_p; returns (rows, pivots)."""
    p = modulus
    if p is None:
        A = [[Fraction(x) for x in r] for r in rows]
    else:
        A = [[int(x) % p for x in r] for r in rows]
    pivots = []
    r = 0
    m = len(A)
    for c in range(ncols):
        piv = next((i for i in range(r, m) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        if p is None:
            inv = 1 / A[r][c]
            A[r] = [x * inv for x in A[r]]
        else:
            inv = pow(A[r][c], -1, p)
            A[r] = [x * inv % p for x in A[r]]
        for i in range(m):
            if i != r and A[i][c]:
                f = A[i][c]
                if p is None:
                    A[i] = [a - f * b for a, b in zip(A[i], A[r])]
                else:
                    A[i] = [(a - f * b) % p for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A[:r], pivots


def field_rank(rows: Sequence[Sequence], ncols: int, modulus: int | None = None) -> int:
    return len(field_rref(rows, ncols, modulus)[1])


def field_nullspace(rows: Sequence[Sequence], ncols: int, modulus: int | None = None) -> list[list]:
    """Basis of {v : rows . v = 0}, one vector per free column, rows in RREF."""
    R, pivots = field_rref(rows, ncols, modulus) if rows else ([], [])
    zero, one = (Fraction(0), Fraction(1)) if modulus is None else (0, 1)
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        v = [zero] * ncols
        v[f] = one
        for row, c in zip(R, pivots):
            v[c] = -row[f] if modulus is None else (-row[f]) % modulus
        basis.append(v)
    return basis
