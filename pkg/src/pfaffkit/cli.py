"""Command-line front end: ``pfaffkit <command> [options]``.

Every command prints one canonical JSON report (sorted keys, numbers as
decimal strings). Exit status is 0 for ok, 2 for a refusal (not invariant,
full rank, ...) and 1 for errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from typing import Sequence

from . import __version__
from .bounds import FORMULAS, compute_bound, verdict, verdict_text
from .census import DEFAULT_CAP, enumerate_invariants_modp
from .diffcalc import FoliationSpec, PolyDifferentialForm, euler_field, pfaff_degree, tangency_degree
from .dsl import (
    SessionInput,
    parse_expression,
    parse_field,
    parse_foliation,
    parse_form,
    parse_input,
    parse_rational,
    parse_system,
    tokenize,
)
from .errors import PfaffkitError
from .extactic import MINOR_THRESHOLD, extactic_minors, sieve_divisibility
from .integrability import (
    certify_invariant,
    darboux_log_certificate,
    extract_first_integral,
    rank_first_integral,
    verify_first_integral,
)

SCHEMA = 1
EXIT_OK, EXIT_ERROR, EXIT_REFUSED = 0, 1, 2

COMMANDS = (
    "check-invariant",
    "extactic",
    "first-integral",
    "log-certificate",
    "bounds",
    "census",
    "degree",
    "verify",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def make_report(command: str, arguments: dict, status: str, payload: dict, seed: int = 0, error=None) -> dict:
    rep = {
        "schema": SCHEMA,
        "tool": "pfaffkit",
        "version": __version__,
        "command": command,
        "arguments": {k: _str(v) for k, v in sorted(arguments.items()) if v is not None},
        "seed": str(seed),
        "status": status,
        "payload": payload,
    }
    if error is not None:
        rep["error"] = error
    return rep


def _str(v):
    if isinstance(v, (list, tuple)):
        return [_str(x) for x in v]
    if isinstance(v, bool):
        return v
    return str(v)


# -- session resolution ----------------------------------------------------------

_BUILTIN_WORDS = {
    "radial", "monomials", "deg", "homogeneous", "true", "false", "affine", "projective",
}


def _infer_names(texts: Sequence[str]) -> list[str]:
    """Variables from inline arguments, in order of first appearance."""
    seen: list[str] = []
    for t in texts:
        for tok in tokenize(t):
            if tok.kind == "name" and tok.value not in _BUILTIN_WORDS and tok.value not in seen:
                seen.append(tok.value)
    # drop differentials dx when x itself is a variable
    return [v for v in seen if not (v.startswith("d") and v[1:] in seen)]


def load_session(args) -> SessionInput:
    if args.input and args.source:
        raise UsageError("use either --input or --source, not both")
    text = ""
    if args.input:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    elif args.source:
        text = args.source
    s = parse_input(text)
    if args.vars:
        if s.names:
            raise UsageError("--vars conflicts with a vars declaration in the input")
        s.names = [v.strip() for v in args.vars.split(",") if v.strip()]
    if not s.names:
        inline = [getattr(args, k) for k in ("foliation", "system", "form", "function") if getattr(args, k, None)]
        inline += list(getattr(args, "poly", None) or []) + list(getattr(args, "invariant", None) or [])
        inline += list(getattr(args, "candidate", None) or [])
        s.names = _infer_names(inline)
    if not s.names and args.command != "bounds":
        raise UsageError("no variables found: declare them in the input or pass --vars")
    if args.mode:
        s.mode = args.mode
    return s


def resolve_foliation(s: SessionInput, ref: str) -> FoliationSpec:
    ref = ref.strip()
    if ref in s.foliations:
        return s.foliations[ref]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if ref in s.fields:
            F = FoliationSpec([s.fields[ref]], s.mode)
        elif ref == "radial":
            F = FoliationSpec([euler_field(s.nvars, s.modulus)], s.mode)
        elif ref.startswith("["):
            F = FoliationSpec([parse_field(ref, s)], s.mode)
        elif ref.startswith("{"):
            F = parse_foliation(ref, s)
        else:
            raise UsageError(f"unknown foliation {ref!r}")
    s.warnings.extend(str(w.message) for w in caught)
    return F


def resolve_system(s: SessionInput, ref: str):
    ref = ref.strip()
    if ref in s.systems:
        return s.systems[ref]
    return parse_system(ref, s)


def resolve_form(s: SessionInput, ref: str) -> PolyDifferentialForm:
    ref = ref.strip()
    if ref in s.forms:
        return s.forms[ref]
    return parse_form(ref, s)


def resolve_poly(s: SessionInput, ref: str):
    ref = ref.strip()
    if ref in s.polys:
        return s.polys[ref]
    return parse_expression(ref, s)


def _source(s: SessionInput, args):
    if bool(args.foliation) == bool(args.form):
        raise UsageError("give exactly one of --foliation or --form")
    return resolve_foliation(s, args.foliation) if args.foliation else resolve_form(s, args.form)


# -- commands --------------------------------------------------------------------------


def _cert_payload(s, cert) -> dict:
    out = {"f": s.fmt(cert.f), "mode": cert.mode, "verified": cert.verified}
    if cert.mode == "foliation":
        out["cofactors"] = [s.fmt(K) for K in cert.cofactors]
    else:
        out["quotient"] = s.fmt_form(cert.quotient) if cert.quotient is not None else "0"
    return out


def cmd_check_invariant(s, args):
    src = _source(s, args)
    if not args.poly:
        raise UsageError("--poly is required")
    certs, refusals = [], []
    for ref in args.poly:
        f = resolve_poly(s, ref)
        c = certify_invariant(src, f)
        if c:
            certs.append(_cert_payload(s, c))
        else:
            refusals.append({"f": s.fmt(f), "reason": str(c)})
    status = "ok" if not refusals else "refused"
    return status, {"certificates": certs, "refusals": refusals}


def extactic_payload(s, F, V, seed=0, threshold=MINOR_THRESHOLD, strategy=None, candidates=()) -> dict:
    E = extactic_minors(F, V, threshold=threshold, seed=seed, strategy=strategy)
    payload = {
        "k": str(V.k),
        "order": str(V.k - 1),
        "rank_generators": str(F.rank),
        "total_minors": str(E.total),
        "computed_minors": str(len(E)),
        "truncated": E.truncated,
        "notes": list(E.notes),
        "all_zero": E.all_zero,
        "minors": [
            {"rows": [str(i) for i in S], "labels": [",".join(map(str, E.row_labels[i])) for i in S], "det": s.fmt(m)}
            for S, m in E.minors
        ],
    }
    if F.rank == 1:
        payload["extactic"] = s.fmt(E.minors[0][1])
    if candidates:
        sieve = []
        for f in candidates:
            r = sieve_divisibility(f, E)
            sieve.append(
                {
                    "candidate": s.fmt(f),
                    "divides": r.divides,
                    "multiplicity": None if r.multiplicity is None else str(r.multiplicity),
                }
            )
        payload["sieve"] = sieve
    return payload


def cmd_extactic(s, args):
    F = resolve_foliation(s, _required(args.foliation, "--foliation"))
    V = resolve_system(s, _required(args.system, "--system"))
    cands = [resolve_poly(s, c) for c in args.candidate or []]
    return "ok", extactic_payload(s, F, V, args.seed, args.threshold, args.strategy, cands)


def first_integral_payload(s, F, V, order=None):
    res = rank_first_integral(F, V, order=order)
    payload = {"rank": str(res.rank), "k": str(res.k), "order": str(res.order), "result": res.status}
    if res.full_rank:
        return "refused", payload
    payload["candidates"] = [{"value": c.value.to_string(s.names), "verified": c.verified} for c in res.candidates]
    payload["support"] = [str(i) for i in res.kernel.support]
    payload["minimality_proved"] = res.kernel.guaranteed_minimal
    return "ok", payload


def cmd_first_integral(s, args):
    F = resolve_foliation(s, _required(args.foliation, "--foliation"))
    V = resolve_system(s, _required(args.system, "--system"))
    return first_integral_payload(s, F, V, args.order)


def cmd_log_certificate(s, args):
    w = resolve_form(s, _required(args.form, "--form"))
    if not args.invariant:
        raise UsageError("--invariant is required")
    certs, refusals = [], []
    for ref in args.invariant:
        f = resolve_poly(s, ref)
        c = certify_invariant(w, f)
        if c:
            certs.append(c)
        else:
            refusals.append({"f": s.fmt(f), "reason": str(c)})
    if refusals:
        return "refused", {"refusals": refusals}
    rep = darboux_log_certificate(w, certs)
    payload = {
        "invariants": [s.fmt(f) for f in rep.invariants],
        "lambda_basis": [[str(x) for x in c.lam] for c in rep.certificates],
        "dimension": str(rep.dimension),
        "first_integral_regime": rep.first_integral_regime,
        "first_integrals": [c.value.to_string(s.names) for c in rep.first_integrals],
    }
    if w.degree == 1 and rep.dimension >= 2 and s.modulus is None:
        R = extract_first_integral(rep, w)
        payload["ratio"] = R.value.to_string(s.names) if R else {"refused": str(R)}
    return "ok", payload


def cmd_bounds(s, args):
    formula = _required(args.formula, "--formula")
    degrees = [int(x) for x in args.degrees.split(",")] if args.degrees else None
    rep = compute_bound(
        formula,
        n=args.n,
        r=args.r,
        d=args.d,
        nu=args.nu,
        degrees=degrees,
        h1cl=args.h1cl,
        h0cl=args.h0cl,
        picard=args.picard,
    )
    payload = rep.to_dict()
    if args.count is not None:
        v = verdict(args.count, rep)
        payload["verdict"] = v.value
        payload["verdict_text"] = verdict_text(v, rep)
    return "ok", payload


def census_payload(s, F, nu, p, cap=DEFAULT_CAP) -> dict:
    res = enumerate_invariants_modp(F, nu, p, cap=cap)
    return {
        "prime": str(res.p),
        "degree": str(res.nu),
        "mode": res.mode,
        "candidates": str(res.candidates),
        "degenerate": res.degenerate,
        "notes": list(res.notes),
        "count": str(len(res)),
        "members": [{"f": s.fmt(f), "cofactors": [s.fmt(K) for K in ks]} for f, ks in res.members],
    }


def cmd_census(s, args):
    F = resolve_foliation(s, _required(args.foliation, "--foliation"))
    p = args.prime if args.prime is not None else s.modulus
    if p is None:
        raise UsageError("--prime is required over the rationals")
    return "ok", census_payload(s, F, _required(args.degree, "--degree"), p, args.cap)


def cmd_degree(s, args):
    w = resolve_form(s, _required(args.form, "--form"))
    d = pfaff_degree(w, cross_check=not args.no_cross_check, seed=args.seed)
    payload = {"degree": str(d), "form_degree": str(w.degree)}
    if not args.no_cross_check:
        payload["tangency_degree"] = str(tangency_degree(w, seed=args.seed))
    return "ok", payload


def cmd_verify(s, args):
    src = _source(s, args)
    ref = _required(args.function, "--function")
    g = s.polys[ref] if ref in s.polys else parse_rational(ref, s)
    ok = verify_first_integral(src, g)
    return ("ok" if ok else "refused"), {"function": g.to_string(s.names) if hasattr(g, "num") else s.fmt(g), "verified": ok}


def _required(value, flag):
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


HANDLERS = {
    "check-invariant": cmd_check_invariant,
    "extactic": cmd_extactic,
    "first-integral": cmd_first_integral,
    "log-certificate": cmd_log_certificate,
    "bounds": cmd_bounds,
    "census": cmd_census,
    "degree": cmd_degree,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pfaffkit", description="Exact invariance, extactic and first-integral toolkit.")
    parser.add_argument("--version", action="version", version=f"pfaffkit {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    common = _Parser(add_help=False)
    common.add_argument("--input", help="session file in the input language (.pfk)")
    common.add_argument("--source", help="session text given inline")
    common.add_argument("--vars", help="comma-separated variable names when no session declares them")
    common.add_argument("--mode", choices=["affine", "projective"])
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write the report here instead of stdout")
    specs = {
        "check-invariant": ["foliation", "form", "poly*"],
        "extactic": ["foliation", "system", "candidate*", "threshold", "strategy"],
        "first-integral": ["foliation", "system", "order"],
        "log-certificate": ["form", "invariant*"],
        "bounds": ["formula", "n", "r", "d", "nu", "degrees", "h1cl", "h0cl", "picard", "count"],
        "census": ["foliation", "degree", "prime", "cap"],
        "degree": ["form", "no-cross-check"],
        "verify": ["foliation", "form", "function"],
    }
    ints = {"n", "r", "d", "nu", "h1cl", "h0cl", "picard", "count", "degree", "prime", "order"}
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        for opt in specs[name]:
            if opt.endswith("*"):
                p.add_argument(f"--{opt[:-1]}", action="append")
            elif opt == "no-cross-check":
                p.add_argument("--no-cross-check", action="store_true")
            elif opt == "formula":
                p.add_argument("--formula", choices=FORMULAS)
            elif opt == "strategy":
                p.add_argument("--strategy", choices=["bareiss", "modular_crt"])
            elif opt == "threshold":
                p.add_argument("--threshold", type=int, default=MINOR_THRESHOLD)
            elif opt == "cap":
                p.add_argument("--cap", type=int, default=DEFAULT_CAP)
            elif opt in ints:
                p.add_argument(f"--{opt}", type=int)
            else:
                p.add_argument(f"--{opt}")
    return parser


def _error(exc) -> dict:
    code = getattr(exc, "code", None)
    if isinstance(exc, UsageError):
        code = "usage"
    elif not isinstance(code, str):
        code = "invalid_argument" if isinstance(exc, (ValueError, TypeError)) else "internal_error"
    out = {"code": code, "message": str(exc)}
    if getattr(exc, "line", None) is not None:
        out["line"] = str(exc.line)
        out["column"] = str(exc.column)
    return out


def run(argv: Sequence[str] | None = None) -> tuple[int, str, str | None]:
    """Run a command; returns (exit code, report text, output path)."""
    argv = list(sys.argv[1:] if argv is None else argv)
    command = argv[0] if argv and argv[0] in COMMANDS else None
    out_path, seed, arguments = None, 0, {}
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError(f"choose a command: {', '.join(COMMANDS)}")
        command, out_path, seed = args.command, args.out, args.seed
        arguments = {k.replace("_", "-"): v for k, v in vars(args).items() if k not in ("command", "out", "seed")}
        s = load_session(args)
        status, payload = HANDLERS[command](s, args)
        if s.warnings:
            payload["warnings"] = sorted(set(s.warnings))
        code = EXIT_OK if status == "ok" else EXIT_REFUSED
        rep = make_report(command, arguments, status, payload, seed)
    except (PfaffkitError, UsageError, ValueError, TypeError, OSError, ZeroDivisionError) as exc:
        rep = make_report(command or "", arguments, "error", {}, seed, _error(exc))
        code = EXIT_ERROR
    return code, canonical_json(rep), out_path


def main(argv: Sequence[str] | None = None) -> int:
    code, text, out_path = run(argv)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
