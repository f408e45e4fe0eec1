"""Exact coefficients, sparse multivariate polynomials and rational functions.

Polynomials are sparse maps from exponent tuples to nonzero coefficients.
Coefficients are rationals (stored as ``int`` when integral, ``Fraction``
otherwise) or residues modulo an odd prime (stored as ``int`` in ``[0, p)``).
Terms are ordered by graded lexicographic order with ``x0 > x1 > ...``.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import BadPrimeError, DimensionError, DomainError

__all__ = [
    "Residue",
    "Polynomial",
    "RationalFunction",
    "variables",
    "exact_divide",
    "evaluate_at",
    "reduce_mod_p",
    "gcd",
    "is_prime",
    "MAX_DEGREE",
]

MAX_DEGREE = 2**31 - 1


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Residue:
    """An element of the prime field F_p."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.p = p
        self.value = int(value) % p

    def _other(self, other):
        if isinstance(other, Residue):
            if other.p != self.p:
                raise DomainError(f"mixed moduli {self.p} and {other.p}")
            return other.value
        if isinstance(other, int):
            return other % self.p
        if isinstance(other, Fraction):
            return _frac_mod(other, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else Residue(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else Residue(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else Residue(o - self.value, self.p)

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else Residue(self.value * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Residue(self.value * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Residue(o * pow(self.value, -1, self.p), self.p)

    def __neg__(self):
        return Residue(-self.value, self.p)

    def __pow__(self, e: int):
        return Residue(pow(self.value, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Residue):
            return self.p == other.p and self.value == other.value
        if isinstance(other, (int, Fraction)):
            try:
                return self.value == self._other(other)
            except BadPrimeError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"Residue({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


def _frac_mod(c: Fraction, p: int) -> int:
    if c.denominator % p == 0:
        raise BadPrimeError(f"bad prime {p}: denominator {c.denominator}")
    return c.numerator * pow(c.denominator, -1, p) % p


def _norm_q(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _qdiv(a, b):
    if type(a) is int and type(b) is int:
        q, r = divmod(a, b)
        if r == 0:
            return q
        return Fraction(a, b)
    return _norm_q(Fraction(a) / b)


def _grlex(e):
    return (sum(e), e)


class Polynomial:
    """Immutable sparse polynomial in ``nvars`` variables.

    >>> x, y = variables(2)
    >>> str((x + y) ** 2)
    'x0^2 + 2*x0*x1 + x1^2'
    """

    __slots__ = ("nvars", "modulus", "_terms", "_degree")

    def __init__(self, nvars: int, terms: Mapping | None = None, modulus: int | None = None):
        if nvars < 0:
            raise DimensionError("negative variable count")
        if modulus is not None and (modulus < 3 or not is_prime(modulus)):
            raise DomainError(f"modulus must be an odd prime, got {modulus}")
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise DimensionError(f"bad exponent vector {exps} for {nvars} variables")
            c = _coerce(c, modulus)
            if c:
                clean[exps] = _add(clean.get(exps, 0), c, modulus)
                if not clean[exps]:
                    del clean[exps]
        self.nvars = nvars
        self.modulus = modulus
        self._terms = clean
        self._degree = max((sum(e) for e in clean), default=-1)
        if self._degree > MAX_DEGREE:
            raise OverflowError("exponent overflow")

    @classmethod
    def _make(cls, nvars, modulus, terms):
        # trusted constructor: terms already normalized, no zero coefficients
        self = object.__new__(cls)
        self.nvars = nvars
        self.modulus = modulus
        self._terms = terms
        self._degree = max((sum(e) for e in terms), default=-1)
        return self

    @classmethod
    def constant(cls, c, nvars: int, modulus: int | None = None) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: c}, modulus)

    @classmethod
    def monomial(cls, exps: Sequence[int], c=1, modulus: int | None = None) -> "Polynomial":
        return cls(len(exps), {tuple(exps): c}, modulus)

    def zero(self) -> "Polynomial":
        return Polynomial._make(self.nvars, self.modulus, {})

    def one(self) -> "Polynomial":
        return Polynomial._make(self.nvars, self.modulus, {(0,) * self.nvars: 1})

    def gens(self) -> list["Polynomial"]:
        return variables(self.nvars, self.modulus)

    # -- inspection -------------------------------------------------------
    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return self._degree

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_constant(self) -> bool:
        return self._degree <= 0

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def items(self) -> list[tuple[tuple[int, ...], object]]:
        """Terms in descending graded-lex order with public coefficients."""
        keys = sorted(self._terms, key=_grlex, reverse=True)
        return [(e, self._public(self._terms[e])) for e in keys]

    def coeff(self, exps: Sequence[int]):
        return self._public(self._terms.get(tuple(exps), 0))

    def _public(self, c):
        if self.modulus is None:
            return Fraction(c)
        return Residue(c, self.modulus)

    def leading_term(self) -> tuple[tuple[int, ...], object]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self._terms, key=_grlex)
        return e, self._public(self._terms[e])

    @property
    def leading_coefficient(self):
        return self.leading_term()[1]

    def variables_present(self) -> frozenset[int]:
        present = set()
        for e in self._terms:
            present.update(i for i, k in enumerate(e) if k)
        return frozenset(present)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self._terms), default=-1)

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial._make(
            self.nvars, self.modulus, {e: c for e, c in self._terms.items() if sum(e) == d}
        )

    def sort_key(self):
        """Key ordering polynomials by their graded-lex term sequences."""
        seq = []
        for e in sorted(self._terms, key=_grlex, reverse=True):
            c = self._terms[e]
            seq.append((_grlex(e), (c.numerator, c.denominator) if type(c) is Fraction else (c, 1)))
        return tuple(seq)

    # -- arithmetic -------------------------------------------------------
    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise DimensionError(f"variable counts differ: {self.nvars} vs {other.nvars}")
            if other.modulus != self.modulus:
                raise DomainError(f"coefficient domains differ: {self.modulus} vs {other.modulus}")
            return other
        if isinstance(other, (int, Fraction, Residue)):
            return Polynomial.constant(other, self.nvars, self.modulus)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        p = self.modulus
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = _add(out.get(e, 0), c, p)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial._make(self.nvars, p, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.modulus
        if p is None:
            return Polynomial._make(self.nvars, p, {e: -c for e, c in self._terms.items()})
        return Polynomial._make(self.nvars, p, {e: p - c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return self.zero()
        if self._degree + other._degree > MAX_DEGREE:
            raise OverflowError("exponent overflow")
        p = self.modulus
        acc: dict = {}
        get = acc.get
        b_items = list(other._terms.items())
        for e1, c1 in self._terms.items():
            for e2, c2 in b_items:
                e = tuple([a + b for a, b in zip(e1, e2)])
                acc[e] = get(e, 0) + c1 * c2
        if p is None:
            out = {}
            for e, c in acc.items():
                if c:
                    out[e] = _norm_q(c)
        else:
            out = {}
            for e, c in acc.items():
                c %= p
                if c:
                    out[e] = c
        return Polynomial._make(self.nvars, p, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        if self._degree * k > MAX_DEGREE:
            raise OverflowError("exponent overflow")
        result, base = self.one(), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        """Division by a nonzero scalar only; use :func:`exact_divide` for polynomials."""
        if isinstance(other, Polynomial):
            if other.is_constant and other:
                return self.scale_inverse(other._terms[(0,) * self.nvars])
            raise TypeError("use exact_divide for polynomial division")
        if self.modulus is None:
            if not other:
                raise ZeroDivisionError("division by zero")
            return self.scale_inverse(_coerce(other, None))
        return self.scale_inverse(_coerce(other, self.modulus))

    def scale_inverse(self, c) -> "Polynomial":
        p = self.modulus
        if p is None:
            return Polynomial._make(self.nvars, p, {e: _qdiv(v, c) for e, v in self._terms.items()})
        inv = pow(_coerce(c, p), -1, p)
        return Polynomial._make(self.nvars, p, {e: v * inv % p for e, v in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return (
                self.nvars == other.nvars
                and self.modulus == other.modulus
                and self._terms == other._terms
            )
        if isinstance(other, (int, Fraction, Residue)):
            try:
                return self == self._lift(other)
            except (DomainError, BadPrimeError):
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, self.modulus, frozenset(self._terms.items())))

    def monic(self) -> "Polynomial":
        """Scale so that the graded-lex leading coefficient is 1."""
        if not self._terms:
            return self
        e = max(self._terms, key=_grlex)
        return self.scale_inverse(self._terms[e])

    def content(self):
        """Positive rational c with self / c integral and primitive (rationals only)."""
        if self.modulus is not None:
            raise DomainError("content is defined over the rationals only")
        from math import gcd as igcd

        num, den = 0, 1
        for c in self._terms.values():
            c = Fraction(c)
            num = igcd(num, c.numerator)
            den = den * c.denominator // igcd(den, c.denominator)
        return Fraction(num, den) if num else Fraction(0)

    # -- calculus and evaluation -------------------------------------------
    def diff(self, i: int) -> "Polynomial":
        if not 0 <= i < self.nvars:
            raise DimensionError(f"no variable {i}")
        p = self.modulus
        out = {}
        for e, c in self._terms.items():
            k = e[i]
            if k:
                c2 = c * k if p is None else c * k % p
                if c2:
                    e2 = e[:i] + (k - 1,) + e[i + 1:]
                    out[e2] = c2
        return Polynomial._make(self.nvars, p, out)

    def evaluate(self, point: Sequence):
        return evaluate_at(self, point)

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Compose: replace variable i by ``images[i]`` (all in a common ring)."""
        if len(images) != self.nvars:
            raise DimensionError("need one image per variable")
        if not images:
            return self
        target = images[0]
        result = target.zero()
        powers: dict[tuple[int, int], Polynomial] = {}
        for e, c in self._terms.items():
            term = Polynomial.constant(self._public(c), target.nvars, target.modulus)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in powers:
                        powers[key] = images[i] ** k
                    term = term * powers[key]
            result = result + term
        return result

    def coefficients_in(self, i: int) -> dict[int, "Polynomial"]:
        """Split as a univariate polynomial in variable i: {power: coefficient}."""
        parts: dict[int, dict] = {}
        for e, c in self._terms.items():
            k = e[i]
            parts.setdefault(k, {})[e[:i] + (0,) + e[i + 1:]] = c
        return {k: Polynomial._make(self.nvars, self.modulus, t) for k, t in parts.items()}

    def reduce_mod(self, p: int) -> "Polynomial":
        return reduce_mod_p(self, p)

    # -- printing ------------------------------------------------------------
    def to_string(self, names: Sequence[str] | None = None) -> str:
        names = names or [f"x{i}" for i in range(self.nvars)]
        if not self._terms:
            return "0"
        parts = []
        for e in sorted(self._terms, key=_grlex, reverse=True):
            c = self._terms[e]
            neg = self.modulus is None and c < 0
            mag = -c if neg else c
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        dom = "QQ" if self.modulus is None else f"GF({self.modulus})"
        return f"Polynomial({self.to_string()!r}, nvars={self.nvars}, {dom})"

    def __reduce__(self):
        return (Polynomial, (self.nvars, dict(self._terms), self.modulus))


def _coerce(c, modulus):
    if modulus is None:
        if isinstance(c, Residue):
            raise DomainError("residue used as a rational coefficient")
        if isinstance(c, bool) or not isinstance(c, (int, Fraction, str)):
            raise TypeError(f"unsupported coefficient {c!r}")
        return _norm_q(Fraction(c)) if not isinstance(c, int) else c
    if isinstance(c, Residue):
        if c.p != modulus:
            raise DomainError(f"mixed moduli {c.p} and {modulus}")
        return c.value
    if isinstance(c, int) and not isinstance(c, bool):
        return c % modulus
    if isinstance(c, (Fraction, str)):
        return _frac_mod(Fraction(c), modulus)
    raise TypeError(f"unsupported coefficient {c!r}")


def _add(a, b, p):
    if p is None:
        return _norm_q(a + b)
    return (a + b) % p


def variables(nvars: int, modulus: int | None = None) -> list[Polynomial]:
    """The generators x0, ..., x_{nvars-1}."""
    out = []
    for i in range(nvars):
        e = [0] * nvars
        e[i] = 1
        out.append(Polynomial._make(nvars, modulus, {tuple(e): 1}))
    if modulus is not None and (modulus < 3 or not is_prime(modulus)):
        raise DomainError(f"modulus must be an odd prime, got {modulus}")
    return out


def exact_divide(f: Polynomial, g: Polynomial) -> Polynomial | None:
    """Return q with f == q*g, or None when g does not divide f."""
    if not isinstance(g, Polynomial):
        g = f._lift(g)
    f._lift(g)
    if g.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    p = f.modulus
    if f.is_zero:
        return f.zero()
    if g.is_constant:
        return f.scale_inverse(g._terms[(0,) * g.nvars])
    if f.degree < g.degree:
        return None
    lt = max(g._terms, key=_grlex)
    lc = g._terms[lt]
    inv = pow(lc, -1, p) if p is not None else None
    rest = [(e, c) for e, c in g._terms.items() if e != lt]
    r = dict(f._terms)
    heap = [(-sum(e), tuple(-k for k in e)) for e in r]
    heapq.heapify(heap)
    q = {}
    while r:
        while True:
            negdeg, negexp = heapq.heappop(heap)
            m = tuple(-k for k in negexp)
            if m in r:
                break
        shift = tuple(a - b for a, b in zip(m, lt))
        if any(s < 0 for s in shift):
            return None
        c = r.pop(m)
        qc = _qdiv(c, lc) if p is None else c * inv % p
        q[shift] = qc
        for e, gc in rest:
            t = tuple(a + b for a, b in zip(e, shift))
            if p is None:
                v = _norm_q(r.get(t, 0) - qc * gc)
            else:
                v = (r.get(t, 0) - qc * gc) % p
            if v:
                if t not in r:
                    heapq.heappush(heap, (-sum(t), tuple(-k for k in t)))
                r[t] = v
            else:
                r.pop(t, None)
    return Polynomial._make(f.nvars, p, q)


def evaluate_at(f: Polynomial, point: Sequence):
    """Exact value of f at ``point`` (a Fraction over Q, a Residue over F_p)."""
    if len(point) != f.nvars:
        raise DimensionError(f"point has {len(point)} coordinates, expected {f.nvars}")
    p = f.modulus
    vals = [_coerce(v, p) for v in point]
    total = 0
    for e, c in f._terms.items():
        t = c
        for v, k in zip(vals, e):
            if k:
                t = t * (v**k if p is None else pow(v, k, p))
        total = total + t if p is None else (total + t) % p
    return Fraction(total) if p is None else Residue(total, p)


def reduce_mod_p(f: Polynomial, p: int) -> Polynomial:
    """Coefficient-wise image of a rational polynomial in F_p[x]."""
    if f.modulus is not None:
        if f.modulus == p:
            return f
        raise DomainError("reduce_mod_p expects a rational polynomial")
    if p < 3 or not is_prime(p):
        raise DomainError(f"modulus must be an odd prime, got {p}")
    out = {}
    for e, c in f._terms.items():
        v = c % p if type(c) is int else _frac_mod(c, p)
        if v:
            out[e] = v
    return Polynomial._make(f.nvars, p, out)


# -- greatest common divisors --------------------------------------------------
# Recursive primitive pseudo-remainder sequences in one variable at a time,
# with coefficients in the polynomial ring of the remaining variables. A cheap
# modular specialization test settles the (common) coprime case first.

_GCD_PRIME = 2**61 - 1


def gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Monic greatest common divisor (zero only if both inputs are zero)."""
    g = f._lift(g)
    if f.is_zero:
        return g.monic()
    if g.is_zero:
        return f.monic()
    if _certainly_coprime(f, g):
        return f.one()
    return _gcd(_primitive(f), _primitive(g)).monic()


def _primitive(f):
    """Integer-primitive with positive leading coefficient over Q; monic over F_p."""
    if f.modulus is not None:
        return f.monic()
    c = f.content()
    if f._terms[max(f._terms, key=_grlex)] < 0:
        c = -c
    return f.scale_inverse(c) if c != 1 else f


def _univariate_images(f, v, point, p):
    """Coefficient list (low to high) of f with all variables but v specialized."""
    out = {}
    for e, c in f._terms.items():
        if type(c) is Fraction:
            c = _frac_mod(c, p)
        t = c
        for i, k in enumerate(e):
            if k and i != v:
                t = t * pow(point[i], k, p)
        out[e[v]] = (out.get(e[v], 0) + t) % p
    deg = max(out)
    return [out.get(k, 0) for k in range(deg + 1)]


def _uni_gcd_degree(a, b, p):
    def trim(u):
        while u and u[-1] == 0:
            u.pop()
        return u

    a, b = trim(list(a)), trim(list(b))
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            q = a[-1] * inv % p
            shift = len(a) - len(b)
            for i, c in enumerate(b):
                a[i + shift] = (a[i + shift] - q * c) % p
            trim(a)
            if not a:
                break
        a, b = b, a
    return len(a) - 1


def _certainly_coprime(f, g) -> bool:
    """True only if no nonconstant common factor exists (a proof, not a guess).

    A common factor h involving v survives specialization of the other
    variables whenever the leading coefficient of f in v does not vanish at
    the specialization point, so a trivial univariate gcd rules out v.
    """
    common = f.variables_present() & g.variables_present()
    if not common:
        return True
    p = f.modulus or _GCD_PRIME
    if f.modulus is not None and f.modulus < 1000:
        return False
    point = [(7919 * (i + 3) ** 3 + 104729 * i + 17) % p for i in range(f.nvars)]
    try:
        for v in sorted(common):
            fa = _univariate_images(f, v, point, p)
            ga = _univariate_images(g, v, point, p)
            if fa[-1] == 0 or ga[-1] == 0:
                return False
            if len(fa) - 1 != f.degree_in(v) or len(ga) - 1 != g.degree_in(v):
                return False
            if _uni_gcd_degree(fa, ga, p) > 0:
                return False
    except BadPrimeError:
        return False
    return True


def _gcd(f, g):
    if f.is_constant or g.is_constant:
        return f.one()
    vf, vg = f.variables_present(), g.variables_present()
    if not vf & vg:
        return f.one()
    v = min(vf | vg)
    if v not in vf:
        return _gcd(f, _content_in(g, v))
    if v not in vg:
        return _gcd(_content_in(f, v), g)
    cf, cg = _content_in(f, v), _content_in(g, v)
    c = _gcd(cf, cg)
    a, b = exact_divide(f, cf), exact_divide(g, cg)
    if a.degree_in(v) < b.degree_in(v):
        a, b = b, a
    while b and b.degree_in(v) > 0:
        r = _prem(a, b, v)
        a, b = b, (_primitive_in(r, v) if r else r)
    h = a if not b else f.one()
    return _primitive(c * h)


def _content_in(f, v):
    coeffs = sorted(f.coefficients_in(v).values(), key=len)
    acc = _primitive(coeffs[0])
    for c in coeffs[1:]:
        if acc.is_constant:
            return f.one()
        acc = _gcd(acc, c)
    return _primitive(acc)


def _primitive_in(r, v):
    return _primitive(exact_divide(r, _content_in(r, v)))


def _prem(a, b, v):
    db = b.degree_in(v)
    lcb = b.coefficients_in(v)[db]
    x = b.gens()[v]
    r = a
    while r and r.degree_in(v) >= db:
        dr = r.degree_in(v)
        lcr = r.coefficients_in(v)[dr]
        r = lcb * r - lcr * x ** (dr - db) * b
    return r


class RationalFunction:
    """Quotient P/Q in lowest terms with Q's leading coefficient equal to 1."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial | None = None):
        if den is None:
            den = num.one()
        den = num._lift(den)
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        if num.is_zero:
            self.num, self.den = num, num.one()
            return
        g = gcd(num, den)
        if not g.is_constant:
            num, den = exact_divide(num, g), exact_divide(den, g)
        lc = den._terms[max(den._terms, key=_grlex)]
        self.num = num.scale_inverse(lc)
        self.den = den.scale_inverse(lc)

    @property
    def nvars(self):
        return self.num.nvars

    @property
    def modulus(self):
        return self.num.modulus

    @property
    def is_zero(self):
        return self.num.is_zero

    @property
    def is_constant(self):
        return self.num.is_constant and self.den.is_constant

    def is_polynomial(self):
        return self.den.is_constant

    def _lift(self, other):
        if isinstance(other, RationalFunction):
            self.num._lift(other.num)
            return other
        if isinstance(other, (Polynomial, int, Fraction, Residue)):
            return RationalFunction(self.num._lift(other))
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        out = object.__new__(RationalFunction)
        out.num, out.den = -self.num, self.den
        return out

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if o.is_zero:
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o / self

    def __eq__(self, other):
        o = self._lift(other) if not isinstance(other, RationalFunction) else other
        if o is NotImplemented:
            return NotImplemented
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def evaluate(self, point):
        return evaluate_at(self.num, point) / evaluate_at(self.den, point)

    def to_string(self, names: Sequence[str] | None = None) -> str:
        num = self.num.to_string(names)
        if self.den == 1:
            return num
        den = self.den.to_string(names)
        if len(self.num) > 1:
            num = f"({num})"
        if len(self.den) > 1 or "*" in den or "^" in den:
            den = f"({den})"
        return f"{num}/{den}"

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"RationalFunction({self.to_string()!r})"
