"""Polynomial vector fields, differential forms and projective Pfaff forms."""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import DimensionError, NotProjectiveError, PfaffkitError
from .exact import Polynomial, exact_divide, variables

__all__ = [
    "PolyVectorField",
    "PolyDifferentialForm",
    "FoliationSpec",
    "InvolutivityResult",
    "apply_derivation",
    "derivation_word",
    "wedge",
    "contract",
    "exterior_derivative",
    "lie_bracket",
    "euler_field",
    "dx",
    "differential",
    "pfaff_degree",
    "tangency_degree",
    "involutivity_check",
]


class PolyVectorField:
    """A derivation sum_i X_i d/dx_i with polynomial components."""

    __slots__ = ("components",)

    def __init__(self, components: Sequence[Polynomial], degree: int | None = None):
        comps = tuple(components)
        if not comps:
            raise DimensionError("a vector field needs at least one component")
        n = comps[0].nvars
        for c in comps:
            comps[0]._lift(c)
        if len(comps) != n:
            raise DimensionError(f"{len(comps)} components for {n} variables")
        self.components = comps
        if degree is not None and self.homogeneous_degree != degree:
            raise ValueError(f"components are not homogeneous of degree {degree}")

    @property
    def nvars(self) -> int:
        return len(self.components)

    @property
    def modulus(self):
        return self.components[0].modulus

    @property
    def homogeneous_degree(self) -> int | None:
        """Common degree of the nonzero components when all are homogeneous."""
        degs = set()
        for c in self.components:
            if c:
                if not c.is_homogeneous():
                    return None
                degs.add(c.degree)
        return degs.pop() if len(degs) == 1 else None

    @property
    def is_zero(self) -> bool:
        return not any(self.components)

    def __call__(self, f: Polynomial) -> Polynomial:
        return apply_derivation(self, f)

    def __getitem__(self, i):
        return self.components[i]

    def __add__(self, other: "PolyVectorField") -> "PolyVectorField":
        return PolyVectorField([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "PolyVectorField") -> "PolyVectorField":
        return PolyVectorField([a - b for a, b in zip(self.components, other.components)])

    def __mul__(self, g) -> "PolyVectorField":
        return PolyVectorField([g * c for c in self.components])

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, PolyVectorField) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def map(self, fn) -> "PolyVectorField":
        return PolyVectorField([fn(c) for c in self.components])

    def reduce_mod(self, p: int) -> "PolyVectorField":
        return self.map(lambda c: c.reduce_mod(p))

    def to_string(self, names=None) -> str:
        return "[" + ", ".join(c.to_string(names) for c in self.components) + "]"

    def __repr__(self):
        return f"PolyVectorField({self.to_string()})"


def euler_field(nvars: int, modulus: int | None = None) -> PolyVectorField:
    """The radial field sum_i x_i d/dx_i."""
    return PolyVectorField(variables(nvars, modulus))


def apply_derivation(X: PolyVectorField, f: Polynomial) -> Polynomial:
    if X.nvars != f.nvars:
        raise DimensionError(f"field on {X.nvars} variables applied to polynomial in {f.nvars}")
    out = f.zero()
    for i, c in enumerate(X.components):
        if c:
            d = f.diff(i)
            if d:
                out = out + c * d
    return out


def derivation_word(fields: Sequence[PolyVectorField], J: Sequence[int], f: Polynomial) -> Polynomial:
    """X_1^{j_1} ... X_r^{j_r}(f); the powers of X_r are applied first."""
    if len(fields) != len(J):
        raise DimensionError("multi-index length must equal the number of fields")
    for X, j in zip(reversed(fields), reversed(J)):
        for _ in range(j):
            f = apply_derivation(X, f)
    return f


def lie_bracket(X: PolyVectorField, Y: PolyVectorField) -> PolyVectorField:
    return PolyVectorField([X(b) - Y(a) for a, b in zip(X.components, Y.components)])


# -- alternating algebra on {sorted index tuple: coefficient} dictionaries ------


def _merge_sign(I, J):
    if set(I) & set(J):
        return 0, None
    inversions = sum(1 for i in I for j in J if i > j)
    return (-1 if inversions % 2 else 1), tuple(sorted(I + J))


def _wedge_dicts(a: Mapping, b: Mapping) -> dict:
    out: dict = {}
    for I, f in a.items():
        for J, g in b.items():
            sign, K = _merge_sign(I, J)
            if sign:
                t = f * g if sign > 0 else -(f * g)
                s = out[K] + t if K in out else t
                if s:
                    out[K] = s
                else:
                    out.pop(K, None)
    return out


class PolyDifferentialForm:
    """A polynomial r-form sum_I a_I dx_I with strictly increasing index tuples."""

    __slots__ = ("nvars", "degree", "modulus", "_coeffs")

    def __init__(
        self,
        nvars: int,
        degree: int,
        coeffs: Mapping[Sequence[int], Polynomial] | None = None,
        modulus: int | None = None,
    ):
        if not 0 <= degree <= nvars:
            raise DimensionError(f"form degree {degree} outside [0, {nvars}]")
        clean = {}
        for I, a in (coeffs or {}).items():
            I = tuple(I)
            if len(I) != degree or any(i >= nvars or i < 0 for i in I):
                raise DimensionError(f"bad index tuple {I}")
            if any(I[k] >= I[k + 1] for k in range(len(I) - 1)):
                raise ValueError(f"index tuple {I} is not strictly increasing")
            if a.nvars != nvars:
                raise DimensionError("coefficient variable count mismatch")
            if modulus is None:
                modulus = a.modulus
            elif a.modulus != modulus:
                from .errors import DomainError

                raise DomainError("coefficient domains differ")
            if a:
                clean[I] = a
        self.nvars = nvars
        self.degree = degree
        self.modulus = modulus
        self._coeffs = clean

    @classmethod
    def _make(cls, nvars, degree, modulus, coeffs):
        self = object.__new__(cls)
        self.nvars, self.degree, self.modulus, self._coeffs = nvars, degree, modulus, coeffs
        return self

    @classmethod
    def one_form(cls, components: Sequence[Polynomial]) -> "PolyDifferentialForm":
        """sum_i components[i] dx_i."""
        n = len(components)
        return cls(n, 1, {(i,): c for i, c in enumerate(components)}, components[0].modulus)

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self):
        return bool(self._coeffs)

    def items(self) -> list[tuple[tuple[int, ...], Polynomial]]:
        return sorted(self._coeffs.items())

    def coefficient(self, I: Sequence[int]) -> Polynomial:
        I = tuple(I)
        if I in self._coeffs:
            return self._coeffs[I]
        return Polynomial(self.nvars, {}, self.modulus)

    def coefficients(self) -> list[Polynomial]:
        return [a for _, a in self.items()]

    @property
    def coefficient_degree(self) -> int | None:
        """Common degree of all coefficients if they are homogeneous of one degree."""
        degs = set()
        for a in self._coeffs.values():
            if not a.is_homogeneous():
                return None
            degs.add(a.degree)
        return degs.pop() if len(degs) == 1 else None

    def _check(self, other):
        if not isinstance(other, PolyDifferentialForm):
            raise TypeError("expected a differential form")
        if other.nvars != self.nvars:
            raise DimensionError("forms live on different spaces")
        if self.modulus is not None and other.modulus is not None and self.modulus != other.modulus:
            from .errors import DomainError

            raise DomainError("coefficient domains differ")

    def __add__(self, other):
        self._check(other)
        if other.degree != self.degree and self and other:
            raise DimensionError("cannot add forms of different degree")
        out = dict(self._coeffs)
        for I, a in other._coeffs.items():
            s = out[I] + a if I in out else a
            if s:
                out[I] = s
            else:
                out.pop(I, None)
        deg = self.degree if self else other.degree
        return PolyDifferentialForm._make(self.nvars, deg, self.modulus or other.modulus, out)

    def __neg__(self):
        return PolyDifferentialForm._make(
            self.nvars, self.degree, self.modulus, {I: -a for I, a in self._coeffs.items()}
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, g):
        """Multiply every coefficient by a polynomial or scalar."""
        if isinstance(g, PolyDifferentialForm):
            return wedge(self, g)
        out = {}
        for I, a in self._coeffs.items():
            t = a * g
            if t:
                out[I] = t
        return PolyDifferentialForm._make(self.nvars, self.degree, self.modulus, out)

    __rmul__ = __mul__

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, PolyDifferentialForm):
            return NotImplemented
        if self.is_zero and other.is_zero:
            return self.nvars == other.nvars
        return (self.nvars, self.degree, self._coeffs) == (other.nvars, other.degree, other._coeffs)

    def __hash__(self):
        return hash((self.nvars, self.degree, frozenset(self._coeffs.items())))

    def map(self, fn) -> "PolyDifferentialForm":
        out = {}
        for I, a in self._coeffs.items():
            b = fn(a)
            if b:
                out[I] = b
        modulus = next((b.modulus for b in out.values()), self.modulus)
        return PolyDifferentialForm._make(self.nvars, self.degree, modulus, out)

    def reduce_mod(self, p: int) -> "PolyDifferentialForm":
        out = {I: a.reduce_mod(p) for I, a in self._coeffs.items()}
        return PolyDifferentialForm._make(self.nvars, self.degree, p, {I: a for I, a in out.items() if a})

    def to_string(self, names=None) -> str:
        names = names or [f"x{i}" for i in range(self.nvars)]
        if not self._coeffs:
            return "0"
        if self.degree == 0:
            return self._coeffs[()].to_string(names)
        parts = []
        for I, a in self.items():
            atoms = " ^ ".join(f"d{names[i]}" for i in I)
            parts.append(f"({a.to_string(names)}) {atoms}")
        return " + ".join(parts)

    def __repr__(self):
        return f"PolyDifferentialForm({self.to_string()!r}, degree={self.degree})"


def dx(i: int, nvars: int, modulus: int | None = None) -> PolyDifferentialForm:
    return PolyDifferentialForm(nvars, 1, {(i,): Polynomial.constant(1, nvars, modulus)}, modulus)


def differential(f: Polynomial) -> PolyDifferentialForm:
    """df = sum_i (df/dx_i) dx_i."""
    return PolyDifferentialForm.one_form([f.diff(i) for i in range(f.nvars)])


def wedge(omega: PolyDifferentialForm, eta: PolyDifferentialForm) -> PolyDifferentialForm:
    omega._check(eta)
    deg = omega.degree + eta.degree
    if deg > omega.nvars:
        raise DimensionError(f"wedge degree {deg} exceeds dimension {omega.nvars}")
    out = _wedge_dicts(omega._coeffs, eta._coeffs)
    return PolyDifferentialForm._make(omega.nvars, deg, omega.modulus or eta.modulus, out)


def contract(X: PolyVectorField, omega: PolyDifferentialForm) -> PolyDifferentialForm:
    """Interior product i_X omega."""
    if not isinstance(omega, PolyDifferentialForm):
        raise DimensionError("cannot contract a 0-form")
    if X.nvars != omega.nvars:
        raise DimensionError("field and form live on different spaces")
    if omega.degree < 1:
        raise DimensionError("cannot contract a 0-form")
    out: dict = {}
    for I, a in omega._coeffs.items():
        for k, idx in enumerate(I):
            comp = X.components[idx]
            if not comp:
                continue
            t = a * comp
            if k % 2:
                t = -t
            K = I[:k] + I[k + 1:]
            s = out[K] + t if K in out else t
            if s:
                out[K] = s
            else:
                out.pop(K, None)
    return PolyDifferentialForm._make(omega.nvars, omega.degree - 1, X.modulus, out)


def exterior_derivative(omega: PolyDifferentialForm) -> PolyDifferentialForm:
    n = omega.nvars
    if omega.degree >= n:
        raise DimensionError("exterior derivative of a top-degree form")
    out: dict = {}
    for I, a in omega._coeffs.items():
        for j in range(n):
            if j in I:
                continue
            d = a.diff(j)
            if not d:
                continue
            before = sum(1 for i in I if i < j)
            if before % 2:
                d = -d
            K = tuple(sorted(I + (j,)))
            s = out[K] + d if K in out else d
            if s:
                out[K] = s
            else:
                out.pop(K, None)
    return PolyDifferentialForm._make(n, omega.degree + 1, omega.modulus, out)


# -- projective Pfaff forms ----------------------------------------------------


def _require_projective(omega: PolyDifferentialForm) -> int:
    if omega.is_zero:
        raise ValueError("the zero form defines no Pfaff system")
    e = omega.coefficient_degree
    if e is None:
        raise NotProjectiveError("coefficients are not homogeneous of a common degree")
    if contract(euler_field(omega.nvars, omega.modulus), omega):
        raise NotProjectiveError("not a projective Pfaff form: contraction with the radial field is nonzero")
    return e


def tangency_degree(omega: PolyDifferentialForm, seed: int = 0, attempts: int = 5) -> int:
    """Degree of the tangency divisor of omega with a random linear P^r in P^n.

    The pullback of an r-form to C^{r+1} that is killed by the radial field is
    h * i_radial(dt_0 ^ ... ^ dt_r); the divisor is {h = 0}.
    """
    _require_projective(omega)
    r, n = omega.degree, omega.nvars
    rng = random.Random(seed)
    ts = variables(r + 1, omega.modulus)
    for _ in range(attempts):
        A = [[rng.randint(-9, 9) for _ in range(r + 1)] for _ in range(n)]
        images = [sum((a * t for a, t in zip(row, ts)), ts[0].zero()) for row in A]
        dimg = [
            PolyDifferentialForm.one_form(
                [Polynomial.constant(a, r + 1, omega.modulus) for a in row]
            )
            for row in A
        ]
        pulled = PolyDifferentialForm(r + 1, r, {}, omega.modulus)
        for I, a in omega.items():
            term = PolyDifferentialForm(r + 1, 0, {(): a.substitute(images)}, omega.modulus)
            for i in I:
                term = wedge(term, dimg[i])
            pulled = pulled + term
        if pulled.is_zero:
            continue
        h = exact_divide(pulled.coefficient(tuple(range(1, r + 1))), ts[0])
        vol = PolyDifferentialForm(
            r + 1, r + 1, {tuple(range(r + 1)): ts[0].one()}, omega.modulus
        )
        if h is None or contract(euler_field(r + 1, omega.modulus), vol) * h != pulled:
            raise PfaffkitError("pullback is not a multiple of the projective volume form")
        return h.degree
    raise PfaffkitError(f"no generic immersion found in {attempts} attempts")


def pfaff_degree(omega: PolyDifferentialForm, *, cross_check: bool = True, seed: int = 0) -> int:
    """Degree of a projective Pfaff form: coefficient degree minus one.

    With ``cross_check`` the value is confirmed against the tangency divisor of
    a seeded random linear immersion.
    """
    d = _require_projective(omega) - 1
    if cross_check:
        t = tangency_degree(omega, seed=seed)
        if t != d:
            raise PfaffkitError(f"tangency degree {t} disagrees with coefficient degree {d}")
    return d


# -- foliations ------------------------------------------------------------------


@dataclass(frozen=True)
class InvolutivityResult:
    involutive: bool
    witness: tuple | None = None  # (i, j, index tuple, nonzero coefficient)

    def __bool__(self):
        return self.involutive


def _multivector(X: PolyVectorField) -> dict:
    return {(i,): c for i, c in enumerate(X.components) if c}


def involutivity_check(F: "FoliationSpec | Sequence[PolyVectorField]") -> InvolutivityResult:
    """Check [X_i, X_j] ^ X_1 ^ ... ^ X_r == 0 for every pair i < j."""
    gens = F.generators if isinstance(F, FoliationSpec) else tuple(F)
    r, n = len(gens), gens[0].nvars
    if r + 1 > n:
        return InvolutivityResult(True)
    top: dict = {(): gens[0].components[0].one()}
    for X in gens:
        top = _wedge_dicts(top, _multivector(X))
    for i in range(r):
        for j in range(i + 1, r):
            w = _wedge_dicts(_multivector(lie_bracket(gens[i], gens[j])), top)
            if w:
                K = min(w)
                return InvolutivityResult(False, (i, j, K, w[K]))
    return InvolutivityResult(True)


class FoliationSpec:
    """Generators X_1..X_r of a distribution, in affine or projective mode.

    In projective mode every generator must be homogeneous; its degree d_i is
    the degree of the corresponding summand of the split tangent sheaf.
    """

    def __init__(
        self,
        generators: Sequence[PolyVectorField],
        mode: str = "affine",
        degrees: Sequence[int] | None = None,
    ):
        gens = tuple(generators)
        if not gens:
            raise ValueError("a foliation needs at least one generator")
        n = gens[0].nvars
        for X in gens:
            if X.nvars != n:
                raise DimensionError("generators live on different spaces")
            if X.modulus != gens[0].modulus:
                from .errors import DomainError

                raise DomainError("generators over different coefficient domains")
        if mode not in ("affine", "projective"):
            raise ValueError(f"unknown mode {mode!r}")
        degrees = None
        if mode == "projective":
            if len(gens) > n - 1:
                raise DimensionError("projective foliations need r <= n_vars - 1")
            declared = list(degrees) if degrees is not None else [None] * len(gens)
            degrees = []
            for X, dd in zip(gens, declared):
                d = X.homogeneous_degree
                if d is None and X.is_zero and dd is not None:
                    d = dd  # a generator that vanished mod p keeps its degree
                if d is None:
                    raise NotProjectiveError("projective generators must be homogeneous")
                if dd is not None and d != dd:
                    raise NotProjectiveError(f"generator has degree {d}, declared {dd}")
                degrees.append(d)
            degrees = tuple(degrees)
        self.generators = gens
        self.mode = mode
        self.degrees = degrees
        if len(gens) > 1 and not involutivity_check(gens):
            warnings.warn("generators are not involutive; treated as a Pfaff system", stacklevel=2)

    @classmethod
    def coerce(cls, F) -> "FoliationSpec":
        if isinstance(F, FoliationSpec):
            return F
        if isinstance(F, PolyVectorField):
            return cls([F])
        return cls(list(F))

    @property
    def nvars(self) -> int:
        return self.generators[0].nvars

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def modulus(self):
        return self.generators[0].modulus

    def reduce_mod(self, p: int) -> "FoliationSpec":
        gens = [X.reduce_mod(p) for X in self.generators]
        return FoliationSpec(gens, self.mode, self.degrees)

    def __repr__(self):
        body = ", ".join(X.to_string() for X in self.generators)
        return f"FoliationSpec({{{body}}}, {self.mode})"
