"""Command line front end.

JSON goes to stdout, diagnostics to stderr.  Exit status is 0 on success,
2 for a negative verdict (refuted, not a member, not expressible, failed
verification) and 1 for errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Optional

from . import analyze, decompose
from .errors import NotExpressible, RofsumError, WrongArity
from .numfield import FieldCtx
from .parsing import parse_poly
from .rof import rof_to_json, rof_to_text

EXIT_OK, EXIT_ERROR, EXIT_NEGATIVE = 0, 1, 2

log = logging.getLogger("rofsum")


def _common(p: argparse.ArgumentParser):
    p.add_argument("--field", default="q", help="q, q-reals or fp:<p> (default q)")
    p.add_argument("--nvars", type=int, default=None, help="number of variables (default: highest index used)")
    p.add_argument("--out", default=None, help="write the JSON document to this file instead of stdout")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rofsum", description="Sums of read-once polynomials.")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="print a polynomial (expands generator shorthands)")
    _common(g)
    g.add_argument("poly")

    d = sub.add_parser("decompose", help="write a polynomial as a sum of read-once formulas")
    _common(d)
    d.add_argument("poly")
    d.add_argument(
        "--construction",
        choices=["auto", "generic", "M", "sym4", "f"],
        default="auto",
        help="construction to use (default: pick from the shape of the input)",
    )

    c = sub.add_parser("check", help="evaluate the necessary conditions for two summands")
    _common(c)
    c.add_argument("poly")

    v = sub.add_parser("verify", help="re-check a decomposition JSON file ('-' for stdin)")
    _common(v)
    v.add_argument("file")

    r = sub.add_parser("refute", help="try to prove the input is not a sum of two (or one) read-once polynomials")
    _common(r)
    r.add_argument("poly")

    o = sub.add_parser("oracle", help="exhaustive search over a small prime field")
    o.add_argument("--p", type=int, required=True)
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--max-n", type=int, default=5)
    o.add_argument("--threads", type=int, default=1)
    o.add_argument("--cache-dir", default=None)
    o.add_argument("--out", default=None)
    o.add_argument("-v", "--verbose", action="store_true")
    osub = o.add_subparsers(dest="action", required=True)
    osub.add_parser("build", help="enumerate and report set sizes")
    m = osub.add_parser("member", help="is the polynomial a sum of at most k read-once polynomials")
    m.add_argument("--k", type=int, default=1)
    m.add_argument("poly")
    mn = osub.add_parser("min", help="fewest read-once summands, up to --limit")
    mn.add_argument("--limit", type=int, default=4)
    mn.add_argument("poly")
    osub.add_parser("crosscheck", help="compare the weight conditions with search for every gen_f")
    return ap


def _emit(doc, args):
    text = json.dumps(doc, indent=2, sort_keys=False)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _ctx(args) -> FieldCtx:
    return FieldCtx.parse(args.field)


def _poly(args, ctx=None):
    return parse_poly(args.poly, ctx or _ctx(args), args.nvars)


def cmd_gen(args):
    p = _poly(args)
    _emit({"field": p.ctx.selector, "nvars": p.nvars, "poly": p.to_text()}, args)
    return EXIT_OK


def _auto_decompose(p, choice):
    ctx = p.ctx
    if choice in ("auto", "f"):
        w = decompose.match_f_family(p)
        if w is not None:
            return decompose.decompose_f(*w, ctx)
        if choice == "f":
            raise WrongArity("input is not of the form gen_f(alpha, beta, gamma)")
    if choice in ("auto", "M"):
        m = decompose.match_M(p)
        if m is not None:
            return decompose.decompose_M(*m, ctx)
        if choice == "M":
            raise WrongArity("input is not of the form A*S_n^n + B*S_n^(n-1)")
    if choice in ("auto", "sym4"):
        a = decompose.match_sym4(p)
        if a is not None:
            return decompose.decompose_sym4(a, ctx)
        if choice == "sym4":
            raise WrongArity("input is not a symmetric polynomial in 4 variables")
    return decompose.decompose_generic(p)


def cmd_decompose(args):
    p = _poly(args)
    try:
        d = _auto_decompose(p, args.construction)
    except NotExpressible as exc:
        log.info("%s", exc)
        _emit({"verdict": "NotExpressible", "target": p.to_text(), "report": exc.report.to_json()}, args)
        return EXIT_NEGATIVE
    doc = d.to_json()
    doc["readable"] = [rof_to_text(t, p.ctx) for t in d.summands]
    _emit(doc, args)
    return EXIT_OK


def cmd_check(args):
    p = _poly(args)
    _emit(analyze.condition_report(p).to_json(), args)
    return EXIT_OK


def cmd_verify(args):
    raw = sys.stdin.read() if args.file == "-" else open(args.file).read()
    doc = json.loads(raw)
    d = decompose.Decomposition.from_json(doc, parse_poly)
    ok = decompose.verify_decomposition(d)
    _emit({"verified": ok, "summands": len(d.summands), "target": d.target.to_text(), "field": d.ctx.selector}, args)
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_refute(args):
    p = _poly(args)
    effective = len(p.variables())
    if effective == 3 and p.nvars != 4:
        res = analyze.prop2_refute_3var(p)
        doc = {"verdict": res.verdict, "test": "three-variable restriction"}
        if res.witness is not None:
            doc["witness"] = {"i": res.witness[0], "A": p.ctx.fmt(res.witness[1])}
        _emit(doc, args)
        return EXIT_NEGATIVE if res.verdict == analyze.NOT_ROP else EXIT_OK
    if p.nvars != 4:
        raise WrongArity(f"refute handles 3 effective variables or 4 variables, got {p.nvars}")
    res = analyze.refute_sum2(p)
    doc = {"verdict": res.verdict, "test": "two-summand conditions", "report": res.report.to_json()}
    if res.certificate is not None:
        doc["certificate"] = res.certificate.to_json()
    _emit(doc, args)
    return EXIT_NEGATIVE if res.verdict == analyze.REFUTED else EXIT_OK


def cmd_oracle(args):
    from .oracle import BACKEND, cache_path, cross_check_f_family, ropset_build

    rs = ropset_build(args.p, args.n, max_n=args.max_n, threads=args.threads, cache_dir=args.cache_dir)
    base = {"field": rs.ctx.selector, "nvars": rs.n, "backend": BACKEND}
    if args.cache_dir:
        base["cache"] = cache_path(args.cache_dir, args.p, args.n)
    if args.action == "build":
        base.update(
            size=len(rs),
            exact_support_size=rs.count_exact(rs.M - 1),
            zero_constant_size=int(len(rs.zero_const)),
        )
        _emit(base, args)
        return EXIT_OK
    if args.action == "crosscheck":
        rep = cross_check_f_family(args.p, rs)
        base.update(rep)
        _emit(base, args)
        return EXIT_NEGATIVE if rep["disagreements"] else EXIT_OK
    g = parse_poly(args.poly, rs.ctx, rs.n)
    if args.action == "min":
        k = rs.min_summands(g, args.limit)
        base.update(poly=g.to_text(), min_summands=k, limit=args.limit)
        _emit(base, args)
        return EXIT_OK if k is not None else EXIT_NEGATIVE
    cert = rs.sum_membership(g, args.k)
    base.update(poly=g.to_text(), k=args.k, member=cert is not None)
    if cert is not None:
        base["summands"] = [q.to_text() for q in cert.polys]
        base["rofs"] = [rof_to_json(t, rs.ctx) for t in cert.rofs]
    _emit(base, args)
    return EXIT_OK if cert is not None else EXIT_NEGATIVE


COMMANDS = {
    "gen": cmd_gen,
    "decompose": cmd_decompose,
    "check": cmd_check,
    "verify": cmd_verify,
    "refute": cmd_refute,
    "oracle": cmd_oracle,
}


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return COMMANDS[args.command](args)
    except RofsumError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error[usage]: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
