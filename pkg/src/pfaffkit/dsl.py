"""A small declarative language for polynomials, vector fields and forms.

    vars x0..x2;                  # or: vars x, y, z;
    domain mod 7;                 # or: domain rational;  (default)
    mode projective;              # default mode for foliations and systems
    poly f = x0^2*x1 - 3/2*x2;
    field X = [x0, 2*x1, 0];
    form w = (x1*x2) dx0 ^ dx1 - (x0*x2) dx0 ^ dx2;
    system V = monomials(deg=1);  # or: system V = {x0, x1, x2};
    foliation F = {X, radial} projective;

Precedence is ``^`` (power) over ``*`` and ``/`` over ``+`` and ``-``.
Division is only allowed by constants, except in rational-function
expressions parsed with ``parse_rational``.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field

from .diffcalc import FoliationSpec, PolyDifferentialForm, PolyVectorField, euler_field
from .errors import ParseError, PfaffkitError
from .exact import Polynomial, RationalFunction, is_prime, variables
from .extactic import LinearSystem

__all__ = ["SessionInput", "parse_input", "parse_expression", "parse_rational", "tokenize"]

KEYWORDS = {"vars", "poly", "field", "form", "system", "foliation", "mode", "domain"}

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)|(?P<num>\d+)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>\.\.|[-+*/^()\[\]{},;=])"
)


@dataclass(frozen=True)
class Token:
    kind: str  # num, name, op, eof
    value: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    line, start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind in ("num", "name", "op"):
            out.append(Token(kind, m.group(), line, m.start() - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


@dataclass
class SessionInput:
    names: list[str] = field(default_factory=list)
    modulus: int | None = None
    mode: str = "affine"
    polys: dict[str, Polynomial] = field(default_factory=dict)
    fields: dict[str, PolyVectorField] = field(default_factory=dict)
    forms: dict[str, PolyDifferentialForm] = field(default_factory=dict)
    systems: dict[str, LinearSystem] = field(default_factory=dict)
    foliations: dict[str, FoliationSpec] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    @property
    def nvars(self) -> int:
        return len(self.names)

    def gens(self) -> list[Polynomial]:
        return variables(self.nvars, self.modulus)

    # -- printing back into the language --------------------------------------
    def fmt(self, f: Polynomial) -> str:
        return f.to_string(self.names)

    def fmt_field(self, X: PolyVectorField) -> str:
        return "[" + ", ".join(self.fmt(c) for c in X.components) + "]"

    def fmt_form(self, w: PolyDifferentialForm) -> str:
        if w.is_zero and w.degree >= 1:
            # keep the degree visible so the text parses back to the same form
            return "(0) " + " ^ ".join(f"d{v}" for v in self.names[: w.degree])
        return w.to_string(self.names)

    def to_text(self) -> str:
        lines = [f"vars {', '.join(self.names)};"]
        lines.append("domain rational;" if self.modulus is None else f"domain mod {self.modulus};")
        lines.append(f"mode {self.mode};")
        for k, f in self.polys.items():
            lines.append(f"poly {k} = {self.fmt(f)};")
        for k, X in self.fields.items():
            lines.append(f"field {k} = {self.fmt_field(X)};")
        for k, w in self.forms.items():
            lines.append(f"form {k} = {self.fmt_form(w)};")
        for k, V in self.systems.items():
            lines.append(f"system {k} = {{{', '.join(self.fmt(s) for s in V.basis)}}};")
        for k, F in self.foliations.items():
            body = ", ".join(self.fmt_field(X) for X in F.generators)
            lines.append(f"foliation {k} = {{{body}}} {F.mode};")
        return "\n".join(lines) + "\n"


class _Parser:
    def __init__(self, text: str, session: SessionInput | None = None):
        self.toks = tokenize(text)
        self.i = 0
        self.s = session if session is not None else SessionInput()
        self._declared_anything = bool(self.s.polys or self.s.fields or self.s.forms)

    # -- token helpers ---------------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def accept(self, value: str) -> Token | None:
        if self.tok.value == value and self.tok.kind in ("op", "name"):
            return self.advance()
        return None

    def expect(self, value: str) -> Token:
        t = self.accept(value)
        if t is None:
            shown = self.tok.value or "end of input"
            raise self.error(f"expected {value!r}, found {shown!r}")
        return t

    def expect_name(self) -> Token:
        if self.tok.kind != "name":
            raise self.error(f"expected a name, found {self.tok.value or 'end of input'!r}")
        return self.advance()

    def expect_int(self) -> int:
        if self.tok.kind != "num":
            raise self.error(f"expected an integer, found {self.tok.value or 'end of input'!r}")
        return int(self.advance().value)

    # -- statements --------------------------------------------------------------
    def parse(self) -> SessionInput:
        while self.tok.kind != "eof":
            if self.accept(";"):
                continue
            self.statement()
        return self.s

    def statement(self):
        t = self.expect_name()
        kw = t.value
        if kw == "vars":
            self.vars_stmt(t)
        elif kw == "domain":
            self.domain_stmt(t)
        elif kw == "mode":
            m = self.expect_name()
            if m.value not in ("affine", "projective"):
                raise self.error(f"unknown mode {m.value!r}", m)
            self.s.mode = m.value
        elif kw in ("poly", "field", "form", "system", "foliation"):
            if not self.s.names:
                raise self.error("declare variables with 'vars' first", t)
            name = self.expect_name()
            if name.value in KEYWORDS or name.value in self.s.names or name.value == "radial":
                raise self.error(f"name {name.value!r} is reserved", name)
            self.expect("=")
            getattr(self, f"{kw}_stmt")(name)
            self._declared_anything = True
        else:
            raise self.error(f"unknown statement {kw!r}", t)
        if self.tok.kind != "eof":
            self.expect(";")

    def vars_stmt(self, t):
        if self.s.names:
            raise self.error("variables are already declared", t)
        names = []
        while True:
            a = self.expect_name()
            if self.accept(".."):
                b = self.expect_name()
                names.extend(self._expand_range(a, b))
            else:
                names.append(a.value)
            if not self.accept(","):
                break
        seen = set()
        for n in names:
            if n in seen:
                raise self.error(f"variable {n!r} declared twice", t)
            if n in KEYWORDS or n == "radial":
                raise self.error(f"{n!r} cannot be a variable name", t)
            seen.add(n)
        self.s.names = names

    def _expand_range(self, a: Token, b: Token) -> list[str]:
        ma = re.fullmatch(r"(.*?)(\d+)", a.value)
        mb = re.fullmatch(r"(.*?)(\d+)", b.value)
        if not ma or not mb or ma.group(1) != mb.group(1):
            raise self.error("ranges look like x0..x3", a)
        lo, hi = int(ma.group(2)), int(mb.group(2))
        if hi < lo:
            raise self.error("empty variable range", b)
        return [f"{ma.group(1)}{i}" for i in range(lo, hi + 1)]

    def domain_stmt(self, t):
        if self._declared_anything:
            raise self.error("the domain must be set before any declaration", t)
        w = self.expect_name()
        if w.value == "rational":
            self.s.modulus = None
        elif w.value == "mod":
            tp = self.tok
            p = self.expect_int()
            if p < 3 or not is_prime(p):
                raise self.error(f"modulus must be an odd prime, got {p}", tp)
            self.s.modulus = p
        else:
            raise self.error("expected 'rational' or 'mod p'", w)

    def poly_stmt(self, name):
        self.s.polys[name.value] = self.expr()

    def field_stmt(self, name):
        t = self.tok
        X = self.field_literal()
        if self.s.mode == "projective" and not X.is_zero and X.homogeneous_degree is None:
            raise self.error("projective mode needs homogeneous field components of one degree", t)
        self.s.fields[name.value] = X

    def field_literal(self) -> PolyVectorField:
        t = self.expect("[")
        comps = [self.expr()]
        while self.accept(","):
            comps.append(self.expr())
        self.expect("]")
        if len(comps) != self.s.nvars:
            raise self.error(f"field has {len(comps)} components for {self.s.nvars} variables", t)
        return PolyVectorField(comps)

    def form_stmt(self, name):
        t = self.tok
        w = self.form_expr()
        coeffs = [a for _, a in w.items()]
        if self.s.mode == "projective" and (
            len({a.degree for a in coeffs}) > 1 or not all(a.is_homogeneous() for a in coeffs)
        ):
            raise self.error("projective mode needs homogeneous form coefficients of one degree", t)
        self.s.forms[name.value] = w

    def form_expr(self) -> PolyDifferentialForm:
        n, p = self.s.nvars, self.s.modulus
        acc = None
        first = True
        while True:
            sign = 1
            if self.accept("-"):
                sign = -1
            elif not self.accept("+") and not first:
                break
            first = False
            t = self.tok
            if self.accept("("):
                coef = self.expr()
                self.expect(")")
            elif self.tok.kind == "num" or (self.tok.kind == "name" and self._dx_index(self.tok) is None):
                coef = self.power()
                while self.tok.kind == "op" and self.tok.value in ("*", "/"):
                    t = self.advance()
                    rhs = self.power()
                    coef = coef * rhs if t.value == "*" else self.divide(coef, rhs, t)
            else:
                coef = Polynomial.constant(1, n, p)
            idx = [self.dx_atom()]
            while self.accept("^"):
                idx.append(self.dx_atom())
            if len(set(idx)) < len(idx):
                term = None
            else:
                perm = sorted(range(len(idx)), key=lambda k: idx[k])
                inv = sum(1 for a in range(len(idx)) for b in range(a + 1, len(idx)) if idx[a] > idx[b])
                s = -sign if inv % 2 else sign
                term = PolyDifferentialForm(n, len(idx), {tuple(idx[k] for k in perm): coef * s}, p)
            if term is not None:
                if acc is not None and acc.degree != term.degree and acc and term:
                    raise self.error("terms of a form must have equal degree", t)
                acc = term if acc is None else acc + term
            elif acc is None:
                acc = PolyDifferentialForm(n, len(idx), {}, p)
        return acc

    def _dx_index(self, tok: Token):
        v = tok.value
        if tok.kind != "name" or not v.startswith("d") or v in self.s.names or v in self.s.polys:
            return None
        rest = v[1:]
        return self.s.names.index(rest) if rest in self.s.names else None

    def dx_atom(self) -> int:
        t = self.tok
        k = self._dx_index(t) if t.kind == "name" else None
        if k is None:
            raise self.error(f"expected a differential like d{self.s.names[0]}, found {t.value or 'end of input'!r}")
        self.advance()
        return k

    def system_stmt(self, name):
        t = self.tok
        if self.accept("monomials"):
            self.expect("(")
            self.expect("deg")
            self.expect("=")
            deg = self.expect_int()
            homog = self.s.mode == "projective"
            if self.accept(","):
                self.expect("homogeneous")
                self.expect("=")
                w = self.expect_name()
                if w.value not in ("true", "false"):
                    raise self.error("expected true or false", w)
                homog = w.value == "true"
            self.expect(")")
            V = LinearSystem.monomials(self.s.nvars, deg, homogeneous=homog, modulus=self.s.modulus)
        else:
            self.expect("{")
            basis = [self.expr()]
            while self.accept(","):
                basis.append(self.expr())
            self.expect("}")
            if self.s.mode == "projective" and (
                len({b.degree for b in basis}) > 1 or not all(b.is_homogeneous() for b in basis)
            ):
                raise self.error("projective mode needs a homogeneous linear system of one degree", t)
            try:
                V = LinearSystem(basis)
            except ValueError as e:
                raise self.error(str(e), t) from None
        self.s.systems[name.value] = V

    def foliation_stmt(self, name):
        self.s.foliations[name.value] = self.foliation_literal()

    def foliation_literal(self) -> FoliationSpec:
        self.expect("{")
        gens, toks = [], []
        while True:
            toks.append(self.tok)
            gens.append(self.foliation_member())
            if not self.accept(","):
                break
        self.expect("}")
        mode = self.s.mode
        if self.tok.kind == "name" and self.tok.value in ("affine", "projective"):
            mode = self.advance().value
        if mode == "projective":
            for X, t in zip(gens, toks):
                if X.homogeneous_degree is None:
                    raise self.error("projective foliations need homogeneous generators", t)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            try:
                F = FoliationSpec(gens, mode)
            except PfaffkitError as e:
                raise self.error(str(e), toks[0]) from None
        self.s.warnings.extend(str(w.message) for w in caught)
        return F

    def foliation_member(self) -> PolyVectorField:
        if self.tok.value == "[":
            return self.field_literal()
        t = self.expect_name()
        if t.value == "radial":
            return euler_field(self.s.nvars, self.s.modulus)
        if t.value not in self.s.fields:
            raise self.error(f"undeclared field {t.value!r}", t)
        return self.s.fields[t.value]

    # -- expressions -------------------------------------------------------------
    def expr(self):
        acc = self.term()
        while True:
            if self.accept("+"):
                acc = acc + self.term()
            elif self.accept("-"):
                acc = acc - self.term()
            else:
                return acc

    def term(self):
        acc = self.unary()
        while True:
            if self.accept("*"):
                acc = acc * self.unary()
            elif self.tok.value == "/" and self.tok.kind == "op":
                t = self.advance()
                acc = self.divide(acc, self.unary(), t)
            else:
                return acc

    def divide(self, a, b, t):
        if b.is_zero:
            raise self.error("division by zero", t)
        if not b.is_constant:
            raise self.error("division by a nonconstant polynomial", t)
        return a / b

    def unary(self):
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self):
        base = self.factor()
        if self.tok.value == "^" and self.tok.kind == "op":
            self.advance()
            t = self.tok
            e = self.expect_int()
            if e > 10**6:
                raise self.error("exponent too large", t)
            return base**e
        return base

    def factor(self):
        t = self.tok
        n, p = self.s.nvars, self.s.modulus
        if t.kind == "num":
            self.advance()
            return self.lift(Polynomial.constant(int(t.value), n, p))
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "name":
            self.advance()
            if t.value in self.s.names:
                return self.lift(self.s.gens()[self.s.names.index(t.value)])
            if t.value in self.s.polys:
                return self.lift(self.s.polys[t.value])
            raise self.error(f"undeclared name {t.value!r}", t)
        raise self.error(f"unexpected {t.value or 'end of input'!r}", t)

    def lift(self, f: Polynomial):
        return f


class _RationalParser(_Parser):
    """Expression parser over the field of rational functions."""

    def lift(self, f):
        return RationalFunction(f)

    def divide(self, a, b, t):
        if b.is_zero:
            raise self.error("division by zero", t)
        return a / b

    def power(self):
        base = self.factor()
        if self.tok.value == "^" and self.tok.kind == "op":
            self.advance()
            e = self.expect_int()
            out = RationalFunction(Polynomial.constant(1, self.s.nvars, self.s.modulus))
            for _ in range(e):
                out = out * base
            return out
        return base


def parse_input(text: str) -> SessionInput:
    """Parse a whole session; errors carry line and column."""
    return _Parser(text).parse()


def _parse_with(parser_cls, text: str, session: SessionInput, method: str):
    p = parser_cls(text, session)
    out = getattr(p, method)()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.value!r}")
    return out


def parse_expression(text: str, session: SessionInput) -> Polynomial:
    return _parse_with(_Parser, text, session, "expr")


def parse_rational(text: str, session: SessionInput) -> RationalFunction:
    return _parse_with(_RationalParser, text, session, "expr")


def parse_field(text: str, session: SessionInput) -> PolyVectorField:
    return _parse_with(_Parser, text, session, "field_literal")


def parse_form(text: str, session: SessionInput) -> PolyDifferentialForm:
    return _parse_with(_Parser, text, session, "form_expr")


def parse_foliation(text: str, session: SessionInput) -> FoliationSpec:
    return _parse_with(_Parser, text, session, "foliation_literal")


def parse_system(text: str, session: SessionInput) -> LinearSystem:
    p = _Parser(text, session)
    t = Token("name", "_", 1, 1)
    p.system_stmt(t)
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.value!r}")
    return session.systems.pop("_")
