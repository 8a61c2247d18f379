"""Command-line surface.

Exit codes: 0 success/pass, 1 check failed, 2 stuck / no reduction found,
3 input error.  All output is a pure function of (inputs, seed, limits);
JSON mode emits canonical, byte-stable documents.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .algebra import (
    Poly,
    PolyParseError,
    WeightSystem,
    lex_weight,
    parse_poly,
    poly_to_text,
    total_weight,
)
from .conditions import (
    check_quasi_su,
    check_su_conditions,
    detect_type,
    verify_properties,
)
from .engine import (
    Endo3,
    certificate_json,
    certify_nagata,
    factor_tame,
    nagata_endo,
    reduce_to_floor,
    su_number,
    verify_automorphism,
)
from .search import DEFAULT_LIMITS, SearchLimits
from .univariate import AuxPoly, su_inequality_report
from .engine import random_tame

N = 3


class InputError(Exception):
    pass


def _parse_weight(spec: str) -> WeightSystem:
    if spec == "total":
        return total_weight(N)
    if spec == "nagata-lex":
        return lex_weight(N)
    try:
        vectors = []
        for part in spec.split(";"):
            vectors.append(tuple(int(c) for c in part.split(",")))
        return WeightSystem(tuple(vectors))
    except (ValueError, TypeError) as exc:
        raise InputError(f"bad weight spec {spec!r}: {exc}") from exc


def _parse_limits(args) -> SearchLimits:
    values = {
        "bidegree": DEFAULT_LIMITS.max_bidegree,
        "rounds": DEFAULT_LIMITS.max_cancellation_rounds,
        "candidates": DEFAULT_LIMITS.max_candidates,
        "product-terms": DEFAULT_LIMITS.max_product_terms,
    }
    env = os.environ.get("TAME3_LIMITS", "")
    for chunk in filter(None, (c.strip() for c in env.split(","))):
        if "=" not in chunk:
            raise InputError(f"bad TAME3_LIMITS entry {chunk!r}")
        key, _, val = chunk.partition("=")
        if key.strip() not in values:
            raise InputError(f"unknown TAME3_LIMITS key {key!r}")
        values[key.strip()] = int(val)
    if getattr(args, "limits_bidegree", None) is not None:
        values["bidegree"] = args.limits_bidegree
    if getattr(args, "limits_rounds", None) is not None:
        values["rounds"] = args.limits_rounds
    return SearchLimits(
        max_bidegree=values["bidegree"],
        max_cancellation_rounds=values["rounds"],
        max_candidates=values["candidates"],
        max_product_terms=values["product-terms"],
    )


def _read_lines(path: str) -> list[str]:
    if path == "-":
        return sys.stdin.read().splitlines()
    try:
        with open(path) as fh:
            return fh.read().splitlines()
    except OSError as exc:
        raise InputError(str(exc)) from exc


def _parse_triple(lines: list[str], where: str) -> tuple:
    polys = []
    for k, line in enumerate(lines):
        if not line.strip():
            continue
        try:
            polys.append(parse_poly(line, N))
        except PolyParseError as exc:
            raise InputError(f"{where}, line {k + 1}: {exc}") from exc
    if len(polys) != 3:
        raise InputError(f"{where}: expected 3 polynomials, found {len(polys)}")
    return tuple(polys)


def _parse_pair(lines: list[str], where: str) -> tuple:
    blocks: list[list[str]] = [[]]
    for line in lines:
        if line.strip():
            blocks[-1].append(line)
        elif blocks[-1]:
            blocks.append([])
    blocks = [b for b in blocks if b]
    if len(blocks) != 2:
        raise InputError(f"{where}: expected two triples separated by a blank line")
    return (_parse_triple(blocks[0], where), _parse_triple(blocks[1], where))


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    else:
        for line in text_lines:
            print(line)


def cmd_deg(args) -> int:
    ws = _parse_weight(args.weight)
    triple = _parse_triple(_read_lines(args.file), args.file)
    degs = [ws.deg(f) for f in triple]
    leads = [poly_to_text(ws.leading_form(f)) if not f.is_zero else "0" for f in triple]
    payload = {
        "weight": ws.describe(),
        "components": [poly_to_text(f) for f in triple],
        "degrees": [d.to_json() for d in degs],
        "leading_forms": leads,
        "deg_F": ws.deg_endo(triple).to_json(),
        "floor": ws.total.to_json(),
        "rank": ws.rank(),
    }
    lines = [f"f{i + 1}: deg={degs[i].to_json()}  leading={leads[i]}" for i in range(3)]
    lines.append(f"deg F = {ws.deg_endo(triple).to_json()}")
    lines.append(f"|w| = {ws.total.to_json()}  rank w = {ws.rank()}")
    _emit(args, payload, lines)
    return 0


def _load_endo(args) -> Endo3:
    triple = _parse_triple(_read_lines(args.file), args.file)
    inverse = None
    if args.inverse:
        inverse = _parse_triple(_read_lines(args.inverse), args.inverse)
        if not verify_automorphism(triple, inverse):
            raise InputError("supplied inverse fails the two-sided check")
    return Endo3(triple, inverse, check_inverse=False)


def cmd_reduce(args) -> int:
    ws = _parse_weight(args.weight)
    limits = _parse_limits(args)
    endo = _load_endo(args)
    trace = reduce_to_floor(ws, endo.components, limits, prefer=args.prefer)
    verified = endo.is_verified
    payload = trace.to_json(ws)
    payload["automorphism_status"] = "verified" if verified else "unverified"
    payload["su_steps"] = su_number(trace)
    stuck = trace.result == "stuck"
    rigorous = stuck and _stuck_rigorous(trace.stuck_reasons)
    if stuck:
        if verified and rigorous:
            payload["verdict"] = (
                "stuck with rigorous obstructions; not tame at this weight "
                "(conditional on the tame reduction theorem)"
            )
        else:
            payload["verdict"] = "no reduction found"
    lines = [f"result: {trace.result}", f"steps: {len(trace.steps)}"]
    if stuck:
        lines.append(f"verdict: {payload['verdict']}")
    _emit(args, payload, lines)
    return 2 if stuck else 0


def _stuck_rigorous(reasons) -> bool:
    if not reasons:
        return False
    elem = reasons.get("elementary", {})
    if not elem or not all(a.get("absent", {}).get("rigorous") for a in elem.values()):
        return False
    su = reasons.get("su", [])
    return all(a.get("absent", {}).get("rigorous", False) for a in su if "absent" in a)


def cmd_factor(args) -> int:
    ws = _parse_weight(args.weight)
    limits = _parse_limits(args)
    endo = _load_endo(args)
    factors, trace = factor_tame(ws, endo, limits)
    if factors is None:
        payload = trace.to_json(ws)
        payload["factors"] = None
        _emit(args, payload, ["no factorization: " + trace.result])
        return 2
    payload = trace.to_json(ws)
    payload["factors"] = [f.to_json() for f in factors]
    lines = [f"{len(factors)} factors (application order):"]
    for f in factors:
        lines.append("  " + json.dumps(f.to_json(), sort_keys=True))
    _emit(args, payload, lines)
    return 0


def cmd_certify_nagata(args) -> int:
    cert = certify_nagata()
    ok = cert.all_rigorous()
    if args.json:
        print(certificate_json(cert))
    else:
        body = cert.to_json()
        for key in ("degrees", "total", "floor"):
            print(f"{key}: {body[key]}")
        for name, check in body["checks"].items():
            print(f"{name}: {json.dumps(check, sort_keys=True)}")
        print("verdict:", body["verdict"])
    return 0 if ok else 1


def cmd_check(args) -> int:
    ws = _parse_weight(args.weight)
    limits = _parse_limits(args)
    F, G = _parse_pair(_read_lines(args.file), args.file)
    which = args.which
    if which == "su":
        rep = check_su_conditions(ws, F, G, limits)
        payload, ok = rep.to_json(), rep.overall
    elif which == "quasi":
        rep = check_quasi_su(ws, F, G, limits)
        payload, ok = rep.to_json(), rep.overall
    elif which == "properties":
        rep = verify_properties(ws, F, G, limits)
        payload, ok = rep.to_json(), rep.overall
    elif which.startswith("type:"):
        kind = which.split(":", 1)[1]
        witness = detect_type(F, kind, limits)
        payload = {f"type{kind}": witness.to_json() if witness else None}
        ok = witness is not None
    else:
        raise InputError(f"unknown check {which!r}")
    lines = [json.dumps(payload, sort_keys=True, indent=1)]
    _emit(args, payload, lines)
    return 0 if ok else 1


def cmd_check_inequality(args) -> int:
    ws = _parse_weight(args.weight)
    lines = _read_lines(args.file)
    blocks: list[list[str]] = [[]]
    for line in lines:
        if line.strip():
            blocks[-1].append(line)
        elif blocks[-1]:
            blocks.append([])
    blocks = [b for b in blocks if b]
    if len(blocks) != 3:
        raise InputError("expected three blocks: generators, coefficients, g")
    try:
        fs = [parse_poly(line, N) for line in blocks[0]]
        coeffs = {}
        for line in blocks[1]:
            idx, _, body = line.partition(":")
            coeffs[int(idx)] = parse_poly(body, N)
        g = parse_poly(blocks[2][0], N)
    except (PolyParseError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    report = su_inequality_report(ws, fs, AuxPoly(N, coeffs), g)
    payload = report.to_json()
    _emit(args, payload, [json.dumps(payload, sort_keys=True)])
    return 0 if report.holds is True else 1


def cmd_gen(args) -> int:
    out = []
    for k in range(args.count):
        seed = args.seed + k
        endo, factors = random_tame(seed, args.factors, args.coeff_bound,
                                    args.degree_bound)
        out.append({
            "seed": seed,
            "components": [poly_to_text(f) for f in endo.components],
            "inverse": [poly_to_text(f) for f in endo.inverse],
            "factors": [f.to_json() for f in factors],
        })
    payload = {"count": args.count, "seed": args.seed, "corpus": out}
    text = [json.dumps(payload, sort_keys=True, indent=1)]
    _emit(args, payload, text)
    return 0


def cmd_nagata_fixture(args) -> int:
    endo = nagata_endo()
    for f in endo.components:
        print(poly_to_text(f))
    if args.inverse:
        print()
        for f in endo.inverse:
            print(poly_to_text(f))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tame3",
        description="Exact weighted-degree reduction tools for three-variable "
                    "polynomial maps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_limits=True, with_weight=True):
        p.add_argument("--json", action="store_true", help="canonical JSON output")
        if with_weight:
            p.add_argument("--weight", default="total",
                           help="total | nagata-lex | 'a,b,c;d,e,f;g,h,i'")
        if with_limits:
            p.add_argument("--limits-bidegree", type=int, default=None)
            p.add_argument("--limits-rounds", type=int, default=None)

    p = sub.add_parser("deg", help="weighted degree table of a triple")
    p.add_argument("file")
    common(p, with_limits=False)
    p.set_defaults(func=cmd_deg)

    p = sub.add_parser("reduce", help="iterate reductions to the degree floor")
    p.add_argument("file")
    p.add_argument("--inverse", default=None)
    p.add_argument("--prefer", choices=("elementary", "su"), default="elementary",
                   help="which search family to try first at each step")
    common(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("factor", help="full tame factorization")
    p.add_argument("file")
    p.add_argument("--inverse", default=None)
    common(p)
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("certify-nagata", help="rigorous non-tameness certificate")
    common(p, with_limits=False, with_weight=False)
    p.set_defaults(func=cmd_certify_nagata)

    p = sub.add_parser("check", help="condition checkers on a pair of triples")
    p.add_argument("file")
    p.add_argument("which", help="su | quasi | properties | type:I..IV")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("check-inequality", help="degree inequality oracle")
    p.add_argument("file")
    common(p, with_limits=False)
    p.set_defaults(func=cmd_check_inequality)

    p = sub.add_parser("gen", help="deterministic tame corpus")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--factors", type=int, default=4)
    p.add_argument("--coeff-bound", type=int, default=3)
    p.add_argument("--degree-bound", type=int, default=3)
    common(p, with_limits=False, with_weight=False)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("nagata", help="print the classical triple (fixture)")
    p.add_argument("--inverse", action="store_true")
    p.set_defaults(func=cmd_nagata_fixture)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 3
    except PolyParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
