"""Jet matrices, extactic minors and the invariant-hypersurface sieve.

For generators X_1..X_r and a linear system V = <s_1..s_k>, the jet matrix
of order m has one row per multi-index J with |J| <= m and entries
X^J(s_j). Its k x k minors at order k - 1 cut out the extactic locus, which
contains every invariant hypersurface whose equation lies in V.
"""

from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from ._parallel import pmap
from .diffcalc import FoliationSpec, PolyVectorField
from .errors import DimensionError, DomainError
from .exact import Polynomial, _grlex, exact_divide
from .ratlinalg import PolyMatrix, det_fraction_free, field_rank

__all__ = [
    "LinearSystem",
    "JetMatrix",
    "ExtacticSystem",
    "SieveResult",
    "multi_indices",
    "build_jet_matrix",
    "extactic_single",
    "extactic_minors",
    "sieve_divisibility",
    "degree_formula_check",
    "MINOR_THRESHOLD",
]

MINOR_THRESHOLD = 200
SAMPLE_SIZE = 100


class LinearSystem:
    """A finite-dimensional space of polynomials with a fixed ordered basis."""

    def __init__(self, basis: Sequence[Polynomial], provenance: str = "explicit"):
        basis = tuple(basis)
        if not basis:
            raise ValueError("a linear system needs at least one basis element")
        n, p = basis[0].nvars, basis[0].modulus
        for s in basis:
            if s.nvars != n:
                raise DimensionError("basis elements live in different polynomial rings")
            if s.modulus != p:
                raise DomainError("basis elements over different coefficient domains")
        monos = sorted({e for s in basis for e, _ in s.items()}, key=_grlex, reverse=True)
        rows = [[s.coeff(e) for e in monos] for s in basis]
        if p is not None:
            rows = [[int(c) for c in r] for r in rows]
        if field_rank(rows, len(monos), p) < len(basis):
            raise ValueError("basis of a linear system must be linearly independent")
        self.basis = basis
        self.provenance = provenance
        degs = {s.degree for s in basis}
        homog = all(s.is_homogeneous() for s in basis)
        self.degree = degs.pop() if homog and len(degs) == 1 else None

    @classmethod
    def monomials(
        cls, nvars: int, degree: int, *, homogeneous: bool = True, modulus: int | None = None
    ) -> "LinearSystem":
        """All monomials of the given degree, or of degree <= it when affine.

        Lower degrees come first; inside one degree the order is graded-lex
        descending, so the affine system of degree 1 in x, y is {1, x, y}.
        """
        if degree < 0:
            raise ValueError("degree must be non-negative")
        degs = [degree] if homogeneous else range(degree + 1)
        basis = []
        for d in degs:
            exps = sorted(_exponents(nvars, d), reverse=True)
            basis.extend(Polynomial.monomial(e, 1, modulus) for e in exps)
        tag = f"all monomials of degree {degree}" if homogeneous else f"all monomials of degree <= {degree}"
        return cls(basis, tag)

    @property
    def k(self) -> int:
        return len(self.basis)

    @property
    def nvars(self) -> int:
        return self.basis[0].nvars

    @property
    def modulus(self):
        return self.basis[0].modulus

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def reduce_mod(self, p: int) -> "LinearSystem":
        return LinearSystem([s.reduce_mod(p) for s in self.basis], self.provenance)

    def __repr__(self):
        return "LinearSystem({" + ", ".join(str(s) for s in self.basis) + "})"


def _exponents(n: int, d: int):
    if n == 0:
        if d == 0:
            yield ()
        return
    for a in range(d, -1, -1):
        for rest in _exponents(n - 1, d - a):
            yield (a,) + rest


def multi_indices(r: int, order: int) -> list[tuple[int, ...]]:
    """Multi-indices J with |J| <= order: graded, then lex descending."""
    out = []
    for s in range(order + 1):
        out.extend(sorted(_exponents(r, s), reverse=True))
    return out


@dataclass
class JetMatrix:
    matrix: PolyMatrix
    labels: list[tuple[int, ...]]
    basis: tuple[Polynomial, ...]
    foliation: FoliationSpec
    order: int

    @property
    def rows(self) -> int:
        return self.matrix.rows

    @property
    def cols(self) -> int:
        return self.matrix.cols


def _jets(gens, order, s):
    # X^J = X_m o X^(J - e_m) with m the first nonzero slot of J
    cache = {}
    for J in multi_indices(len(gens), order):
        m = next((i for i, j in enumerate(J) if j), None)
        if m is None:
            cache[J] = s
        else:
            prev = J[:m] + (J[m] - 1,) + J[m + 1 :]
            cache[J] = gens[m](cache[prev])
    return cache


def build_jet_matrix(F, V: LinearSystem | Sequence[Polynomial], order: int) -> JetMatrix:
    """Matrix of iterated derivations X^J(s_j), rows in graded J order."""
    F = FoliationSpec.coerce(F)
    V = V if isinstance(V, LinearSystem) else LinearSystem(V)
    if order < 0:
        raise ValueError("order must be non-negative")
    if V.nvars != F.nvars:
        raise DimensionError(f"linear system has {V.nvars} variables, foliation {F.nvars}")
    if V.modulus != F.modulus:
        raise DomainError("linear system and foliation over different coefficient domains")
    labels = multi_indices(F.rank, order)
    cols = [_jets(F.generators, order, s) for s in V.basis]
    entries = [[c[J] for c in cols] for J in labels]
    return JetMatrix(PolyMatrix(entries), labels, V.basis, F, order)


def extactic_single(
    X: PolyVectorField, V: LinearSystem | Sequence[Polynomial], *, strategy: str | None = None, seed: int = 0
) -> Polynomial:
    """det[X^i(s_j)], 0 <= i < k: the extactic polynomial of one vector field."""
    V = V if isinstance(V, LinearSystem) else LinearSystem(V)
    jm = build_jet_matrix(FoliationSpec([X]), V, V.k - 1)
    return det_fraction_free(jm.matrix, strategy, seed=seed)


@dataclass
class ExtacticSystem:
    """Extactic minors keyed by sorted row-index sets of the order k-1 jet matrix."""

    minors: list[tuple[tuple[int, ...], Polynomial]]
    row_labels: list[tuple[int, ...]]
    total: int
    truncated: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def polynomials(self) -> list[Polynomial]:
        return [m for _, m in self.minors]

    @property
    def all_zero(self) -> bool:
        return all(m.is_zero for _, m in self.minors)

    def reduce_mod(self, p: int) -> "ExtacticSystem":
        return ExtacticSystem(
            [(S, m.reduce_mod(p)) for S, m in self.minors],
            self.row_labels,
            self.total,
            self.truncated,
            list(self.notes),
        )

    def __len__(self):
        return len(self.minors)


def _select_minors(N: int, k: int, threshold: int, seed: int):
    total = comb(N, k)
    if total <= threshold:
        return list(itertools.combinations(range(N), k)), total, False, []
    rng = random.Random(seed)
    with_top = comb(N - 1, k - 1)
    if with_top <= SAMPLE_SIZE:
        first = {(0,) + S for S in itertools.combinations(range(1, N), k - 1)}
        note = f"all {with_top} minors through the order-0 row"
    else:
        first = set()
        while len(first) < SAMPLE_SIZE:
            first.add((0,) + tuple(sorted(rng.sample(range(1, N), k - 1))))
        note = f"{SAMPLE_SIZE} seeded minors through the order-0 row"
    others = set()
    want = min(SAMPLE_SIZE, total - len(first))
    while len(others) < want:
        S = tuple(sorted(rng.sample(range(N), k)))
        if S not in first:
            others.add(S)
    chosen = sorted(first | others)
    notes = [f"truncated: {len(chosen)} of {total} minors ({note} plus {len(others)} seeded others)"]
    return chosen, total, True, notes


def _minor_det(entries, strategy, seed, S):
    sub = PolyMatrix([entries[i] for i in S])
    return det_fraction_free(sub, strategy, seed=seed)


def extactic_minors(
    F,
    V: LinearSystem | Sequence[Polynomial],
    *,
    threshold: int = MINOR_THRESHOLD,
    seed: int = 0,
    strategy: str | None = None,
) -> ExtacticSystem:
    """k x k minors of the order k-1 jet matrix, sorted by row label.

    Above ``threshold`` minors only a seeded subset is computed: minors through
    the order-0 row plus random others. The result is flagged as truncated; a
    truncated sieve is still a valid necessary condition.
    """
    F = FoliationSpec.coerce(F)
    V = V if isinstance(V, LinearSystem) else LinearSystem(V)
    k = V.k
    jm = build_jet_matrix(F, V, k - 1)
    N = jm.rows
    chosen, total, truncated, notes = _select_minors(N, k, threshold, seed)
    entries = jm.matrix.entries
    dets = pmap(functools.partial(_minor_det, entries, strategy, seed), chosen)
    return ExtacticSystem(list(zip(chosen, dets)), jm.labels, total, truncated, notes)


@dataclass(frozen=True)
class SieveResult:
    divides: bool
    multiplicity: int | None  # None when every minor vanishes identically

    def __bool__(self):
        return self.divides


def _multiplicity(f: Polynomial, g: Polynomial) -> int:
    m = 0
    while True:
        q = exact_divide(g, f)
        if q is None:
            return m
        g, m = q, m + 1


def sieve_divisibility(candidate: Polynomial, E) -> SieveResult:
    """Does the candidate divide every extactic minor, and how often?

    ``E`` may be an ExtacticSystem, a single polynomial or a list of them.
    Identically zero minors are divisible by anything and do not bound the
    multiplicity.
    """
    if candidate.is_zero or candidate.is_constant:
        raise ValueError("sieve candidate must be nonconstant")
    if isinstance(E, ExtacticSystem):
        polys = E.polynomials
    elif isinstance(E, Polynomial):
        polys = [E]
    else:
        polys = list(E)
    mults = [_multiplicity(candidate, g) for g in polys if not g.is_zero]
    if not mults:
        return SieveResult(True, None)
    m = min(mults)
    return SieveResult(m >= 1, m)


def degree_formula_check(n: int, nu: int, d: int) -> int:
    """Expected extactic degree K*nu + (d-1)*C(K, 2) with K = C(nu+n, n)."""
    if d < 1 or nu < 1 or n < 1:
        raise ValueError("need n >= 1, nu >= 1 and d >= 1")
    K = comb(nu + n, n)
    return K * nu + (d - 1) * comb(K, 2)
