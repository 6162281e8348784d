"""Text syntax for polynomials.

Grammar::

    poly   := [sign] term (sign term)*
    term   := factor ('*' factor)*
    factor := INT ['/' INT] | 'x' INT ['^' INT]

Generator shorthands are accepted in place of a polynomial:
``gen:S:n,k``, ``gen:M:n,alpha,beta`` and ``gen:f:alpha,beta,gamma``.
"""

from __future__ import annotations

import re
from typing import List, Optional, Tuple

from .errors import ParseError, UnknownVariable
from .mpoly import Poly, gen_M, gen_f, gen_symmetric
from .numfield import FieldCtx, Q

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")
_VAR = re.compile(r"x(\d+)$")


def _tokens(text: str) -> List[Tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            out.append(("int", m.group(1), start))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), start))
        else:
            out.append(("op", m.group(3), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def parse_poly(text: str, ctx: FieldCtx = Q, nvars: Optional[int] = None) -> Poly:
    """Parse polynomial text or a generator shorthand into a :class:`Poly`."""
    s = text.strip()
    if s.startswith("gen:"):
        p = parse_generator(s, ctx)
        return p if nvars is None or nvars == p.nvars else p.embed(nvars)
    terms = _Parser(text, nvars).parse()
    n = nvars if nvars is not None else max([1] + [max(vs, default=0) for vs, _, _ in terms])
    poly = Poly.zero(ctx, n)
    for powers, num, den in terms:
        exps = [0] * n
        for i, e in powers.items():
            exps[i - 1] += e
        c = ctx.parse_scalar(f"{num}/{den}")
        poly = poly + Poly(ctx, n, {tuple(exps): c})
    return poly


class _Parser:
    def __init__(self, text, nvars):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0
        self.nvars = nvars

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def parse(self):
        terms = []
        sign = 1
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            sign = -1 if t[1] == "-" else 1
            self.take()
        terms.append(self.term(sign))
        while True:
            t = self.peek()
            if t[0] == "end":
                return terms
            if t[0] == "op" and t[1] in "+-":
                self.take()
                terms.append(self.term(-1 if t[1] == "-" else 1))
            else:
                self.fail(f"unexpected {t[1]!r}")

    def term(self, sign):
        num, den = sign, 1
        powers = {}
        while True:
            t = self.take()
            if t[0] == "int":
                n, d = int(t[1]), 1
                if self.peek()[1] == "/" and self.peek()[0] == "op":
                    self.take()
                    dt = self.take()
                    if dt[0] != "int":
                        self.fail("expected a denominator", dt)
                    d = int(dt[1])
                    if d == 0:
                        self.fail("zero denominator", dt)
                num, den = num * n, den * d
            elif t[0] == "name":
                m = _VAR.match(t[1])
                if not m or int(m.group(1)) < 1:
                    raise UnknownVariable(f"unknown variable {t[1]!r}", self.text, t[2])
                k = int(m.group(1))
                if self.nvars is not None and k > self.nvars:
                    raise UnknownVariable(f"x{k} is outside x1..x{self.nvars}", self.text, t[2])
                e = 1
                if self.peek()[0] == "op" and self.peek()[1] == "^":
                    self.take()
                    et = self.take()
                    if et[0] != "int":
                        self.fail("expected an exponent", et)
                    e = int(et[1])
                powers[k] = powers.get(k, 0) + e
            else:
                self.fail("expected a number or variable", t)
            if self.peek()[0] == "op" and self.peek()[1] == "*":
                self.take()
                continue
            return powers, num, den


def parse_generator(spec: str, ctx: FieldCtx) -> Poly:
    """``gen:S:n,k`` / ``gen:M:n,alpha,beta`` / ``gen:f:alpha,beta,gamma``."""
    try:
        _, kind, args = spec.split(":", 2)
    except ValueError:
        raise ParseError("generator needs the form gen:<kind>:<args>", spec, 0) from None
    vals = [a.strip() for a in args.split(",")]
    off = len("gen:") + len(kind) + 1
    try:
        if kind == "S" and len(vals) == 2:
            return gen_symmetric(int(vals[0]), int(vals[1]), ctx)
        if kind == "M" and len(vals) == 3:
            return gen_M(int(vals[0]), ctx.parse_scalar(vals[1]), ctx.parse_scalar(vals[2]), ctx)
        if kind == "f" and len(vals) == 3:
            return gen_f(*(ctx.parse_scalar(v) for v in vals), ctx)
    except ValueError as exc:
        raise ParseError(f"bad generator argument ({exc})", spec, off) from None
    raise ParseError(f"unknown generator {kind!r} with {len(vals)} arguments", spec, 4)
