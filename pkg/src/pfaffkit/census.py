"""Brute-force census of invariant hypersurfaces over a small prime field.

Every monic candidate of the requested degree is tested by solving
X_i(f) = K_i f for K_i as a linear system over F_p. This deliberately avoids
polynomial division so it can serve as an oracle for the certifier.
"""

from __future__ import annotations

import functools
import itertools
import time
from dataclasses import dataclass, field

from ._parallel import pmap, worker_count
from .diffcalc import FoliationSpec
from .errors import CapExceededError, DomainError
from .exact import Polynomial, _grlex, is_prime
from .ratlinalg import field_rref

__all__ = ["CensusResult", "enumerate_invariants_modp", "DEFAULT_CAP"]

DEFAULT_CAP = 10**7


@dataclass
class CensusResult:
    p: int
    nu: int
    nvars: int
    mode: str
    members: list[tuple[Polynomial, list[Polynomial]]]
    candidates: int
    degenerate: bool = False
    notes: list[str] = field(default_factory=list)
    elapsed: float = 0.0  # wall clock, kept out of serialized reports

    @property
    def polynomials(self) -> list[Polynomial]:
        return [f for f, _ in self.members]

    def __len__(self):
        return len(self.members)


def _exponents(n: int, d: int):
    if n == 0:
        if d == 0:
            yield ()
        return
    for a in range(d, -1, -1):
        for rest in _exponents(n - 1, d - a):
            yield (a,) + rest


def _candidate_monomials(n: int, nu: int, homogeneous: bool):
    degs = [nu] if homogeneous else range(nu, -1, -1)
    monos = [e for d in degs for e in _exponents(n, d)]
    return sorted(monos, key=_grlex, reverse=True)


def _solve_cofactor(Xf: Polynomial, f: Polynomial, p: int):
    """K with Xf = K f over F_p, or None. Linear solve, no division."""
    if Xf.is_zero:
        return Xf
    dk = Xf.degree - f.degree
    if dk < 0:
        return None
    n = f.nvars
    kmonos = [e for d in range(dk + 1) for e in _exponents(n, d)]
    prods = []
    for e in kmonos:
        prods.append({tuple(a + b for a, b in zip(e, m)): int(c) for m, c in f.items()})
    keys = sorted({m for pr in prods for m in pr} | {m for m, _ in Xf.items()}, key=_grlex, reverse=True)
    rows = [[pr.get(m, 0) for pr in prods] + [int(Xf.coeff(m))] for m in keys]
    R, pivots = field_rref(rows, len(kmonos) + 1, p)
    if len(kmonos) in pivots:
        return None
    terms = {}
    for row, c in zip(R, pivots):
        if row[-1]:
            terms[kmonos[c]] = row[-1]
    return Polynomial(n, terms, p)


def _test_chunk(gens, monos, nvars, p, lead_and_tails):
    out = []
    for lead, tail in lead_and_tails:
        terms = {monos[lead]: 1}
        for idx, c in zip(range(lead + 1, len(monos)), tail):
            if c:
                terms[monos[idx]] = c
        f = Polynomial(nvars, terms, p)
        cofs = []
        for X in gens:
            K = _solve_cofactor(X(f), f, p)
            if K is None:
                break
            cofs.append(K)
        else:
            out.append((f, cofs))
    return out


def enumerate_invariants_modp(F, nu: int, p: int, *, cap: int = DEFAULT_CAP) -> CensusResult:
    """All monic degree-nu f over F_p with X_i(f) in (f) for every generator.

    Projective foliations enumerate homogeneous candidates; affine ones use
    every monomial of degree <= nu with a leading term of degree nu. A
    rational foliation is reduced mod p first (bad primes raise).
    """
    start = time.perf_counter()
    F = FoliationSpec.coerce(F)
    if not is_prime(p) or p < 3:
        raise DomainError(f"census needs an odd prime, got {p}")
    if nu < 1:
        raise ValueError("degree must be at least 1")
    if F.modulus is None:
        F = F.reduce_mod(p)
    elif F.modulus != p:
        raise DomainError(f"foliation is defined mod {F.modulus}, census asked for mod {p}")
    n = F.nvars
    homogeneous = F.mode == "projective"
    monos = _candidate_monomials(n, nu, homogeneous)
    space = p ** (len(monos) - 1)
    if space > cap:
        raise CapExceededError(f"candidate space {space} exceeds cap {cap}", required=space)
    notes = []
    degenerate = any(X.is_zero for X in F.generators)
    if degenerate:
        notes.append("degenerate: some generator vanishes mod p, every candidate is invariant")
    leads = [i for i, e in enumerate(monos) if sum(e) == nu]
    work = [
        (lead, tail)
        for lead in leads
        for tail in itertools.product(range(p), repeat=len(monos) - lead - 1)
    ]
    chunks = max(1, worker_count()) * 4
    size = max(1, -(-len(work) // chunks))
    parts = [work[i : i + size] for i in range(0, len(work), size)]
    fn = functools.partial(_test_chunk, F.generators, monos, n, p)
    members = [m for part in pmap(fn, parts) for m in part]
    members.sort(key=lambda fc: fc[0].sort_key(), reverse=True)
    res = CensusResult(p, nu, n, F.mode, members, len(work), degenerate, notes)
    res.elapsed = time.perf_counter() - start
    return res
