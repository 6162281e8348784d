"""Explicit sum-of-read-once-formula constructions.

Four constructions are provided:

``decompose_generic``
    Any multilinear polynomial, splitting off the last variable until four
    remain and then using a fixed three-formula template.
``decompose_M``
    ``A*S_n^n + B*S_n^{n-1}`` with ``ceil(n/2)`` summands.
``decompose_sym4``
    Any combination ``sum(a_i * S_4^i)`` with two summands.
``decompose_f``
    The weighted-matching family ``gen_f(alpha, beta, gamma)``; either two
    summands or a :class:`~rofsum.errors.NotExpressible` carrying the
    condition report that rules them out.

Every construction verifies its own output before returning it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import List, Optional, Sequence

from .errors import (
    InternalInvariantViolation,
    NotExpressible,
    RootNotRepresentable,
)
from .mpoly import Poly, gen_M, gen_f, gen_symmetric, sym4_combination
from .numfield import FieldCtx, IrrationalRoot
from .rof import (
    ADD,
    Leaf,
    Node,
    Rof,
    constant_value,
    expand,
    leaf,
    mul_chain,
    relabel,
    rof_add,
    rof_from_bivariate,
    rof_from_json,
    rof_linear,
    rof_mul,
    rof_to_json,
    affine,
    validate_read_once,
)

GENERIC = "Generic"
SYMMETRIC_M = "SymmetricM"
SYM4_TABLE = "Sym4Table"
F_FAMILY = "FFamily"
COMMUTATOR = "Commutator"
CONSTRUCTIONS = (GENERIC, SYMMETRIC_M, SYM4_TABLE, F_FAMILY, COMMUTATOR)


@dataclass
class Decomposition:
    target: Poly
    summands: List[Rof]
    construction: str
    verified: bool = False
    notes: dict = field(default_factory=dict)

    @property
    def ctx(self) -> FieldCtx:
        return self.target.ctx

    def __len__(self):
        return len(self.summands)

    def total(self) -> Poly:
        out = Poly.zero(self.ctx, self.target.nvars)
        for t in self.summands:
            out = out + expand(t, self.ctx, self.target.nvars)
        return out

    def to_json(self) -> dict:
        return {
            "target": self.target.to_text(),
            "field": self.ctx.selector,
            "nvars": self.target.nvars,
            "construction": self.construction,
            "summands": [rof_to_json(t, self.ctx) for t in self.summands],
            "verified": self.verified,
        }

    @classmethod
    def from_json(cls, doc: dict, parse_poly) -> "Decomposition":
        """Rebuild from :meth:`to_json` output; ``verified`` is NOT trusted."""
        ctx = FieldCtx.parse(doc["field"])
        target = parse_poly(doc["target"], ctx, doc.get("nvars"))
        summands = [rof_from_json(s, ctx) for s in doc["summands"]]
        return cls(target, summands, doc.get("construction", GENERIC), False)


def verify_decomposition(d: Decomposition) -> bool:
    """Exact check that the summands are read-once and add up to the target."""
    ok = True
    for t in d.summands:
        if not validate_read_once(t):
            ok = False
            break
        if max(lf.var for lf in _leaves(t)) > d.target.nvars:
            ok = False
            break
    if ok:
        ok = d.total() == d.target
    d.verified = ok
    return ok


def _leaves(t):
    if isinstance(t, Leaf):
        yield t
    else:
        yield from _leaves(t.left)
        yield from _leaves(t.right)


def _finish(target, summands, construction, **notes) -> Decomposition:
    d = Decomposition(target, [s for s in summands if not _is_zero(s, target.ctx)], construction, notes=notes)
    if not verify_decomposition(d):
        raise InternalInvariantViolation(f"{construction} construction failed to reproduce {target.to_text()}")
    return d


def _is_zero(t, ctx):
    v = constant_value(t, ctx)
    return v is not None and not v


def _poly(ctx, nvars, coeffs):
    return Poly.from_subsets(ctx, nvars, coeffs)


# generic --------------------------------------------------------------------


def generic_bound(n: int) -> int:
    if n <= 2:
        return 1
    if n == 3:
        return 2
    return 3 * 2 ** (n - 4)


def decompose_generic(p: Poly) -> Decomposition:
    """At most ``3 * 2**(n-4)`` summands for any multilinear ``p`` (n >= 4)."""
    p.require_multilinear("decompose_generic")
    return _finish(p, _generic(p), GENERIC)


def _generic(p: Poly) -> List[Rof]:
    if p.is_zero():
        return []
    ctx = p.ctx
    vs = sorted(p.variables())
    if len(vs) <= 2:
        return [rof_from_bivariate(p)]
    if len(vs) == 4:
        return _base4(p, vs)
    v = vs[-1]
    g = p.partial_derivative(v)
    h = p.restrict(v, 0)
    xv = leaf(v, ctx)
    if len(vs) == 3:
        lower = [rof_from_bivariate(g)]
    else:
        lower = _generic(g)
    out = [rof_mul(xv, s, ctx) for s in lower]
    out += [rof_from_bivariate(h)] if len(vs) == 3 else _generic(h)
    return out


def _base4(p: Poly, vs: Sequence[int]) -> List[Rof]:
    ctx = p.ctx
    n = p.nvars
    pairs = [(i, j) for i, j in combinations(vs, 2) if p.coeff([i, j])]
    if not pairs:
        x1, x2, x3, x4 = vs
        A = lambda *s: p.coeff(s)  # noqa: E731
        f1 = rof_linear(_poly(ctx, n, {(): A(), (x1,): A(x1), (x2,): A(x2), (x3,): A(x3), (x4,): A(x4)}))
        f2 = rof_mul(
            mul_chain([x1, x2], ctx),
            rof_from_bivariate(_poly(ctx, n, {(x3,): A(x1, x2, x3), (x4,): A(x1, x2, x4)})),
            ctx,
        )
        f3 = rof_mul(
            mul_chain([x3, x4], ctx),
            rof_from_bivariate(
                _poly(ctx, n, {(x1,): A(x1, x3, x4), (x2,): A(x2, x3, x4), (x1, x2): A(x1, x2, x3, x4)})
            ),
            ctx,
        )
        return [f1, f2, f3]

    # the smallest nonzero pair plays the role of (x1, x3) in the template
    i, j = pairs[0]
    rest = [v for v in vs if v not in (i, j)]
    x1, x2, x3, x4 = i, rest[0], j, rest[1]
    A = lambda *s: p.coeff(s)  # noqa: E731
    a13 = A(x1, x3)
    div, sub, mul = ctx.div, ctx.sub, ctx.mul

    def corr(big, a, b):
        return sub(big, div(mul(a, b), a13))

    f1 = rof_add(
        rof_from_bivariate(_poly(ctx, n, {(): A(), (x1,): A(x1), (x2,): A(x2), (x1, x2): A(x1, x2)})),
        rof_from_bivariate(_poly(ctx, n, {(x3,): A(x3), (x4,): A(x4), (x3, x4): A(x3, x4)})),
        ctx,
    )
    f2 = rof_mul(
        rof_from_bivariate(_poly(ctx, n, {(x1,): a13, (x2,): A(x2, x3), (x1, x2): A(x1, x2, x3)})),
        rof_from_bivariate(
            _poly(ctx, n, {(x4,): div(A(x1, x4), a13), (x3,): 1, (x3, x4): div(A(x1, x3, x4), a13)})
        ),
        ctx,
    )
    f3 = rof_mul(
        mul_chain([x2, x4], ctx),
        rof_from_bivariate(
            _poly(
                ctx,
                n,
                {
                    (): corr(A(x2, x4), A(x1, x4), A(x2, x3)),
                    (x1,): corr(A(x1, x2, x4), A(x1, x4), A(x1, x2, x3)),
                    (x3,): corr(A(x2, x3, x4), A(x1, x3, x4), A(x2, x3)),
                    (x1, x3): corr(A(x1, x2, x3, x4), A(x1, x3, x4), A(x1, x2, x3)),
                },
            )
        ),
        ctx,
    )
    return [f1, f2, f3]


# A*S_n^n + B*S_n^{n-1} -------------------------------------------------------


def decompose_M(n: int, A, B, ctx: FieldCtx) -> Decomposition:
    """``ceil(n/2)`` summands for ``A*S_n^n + B*S_n^{n-1}`` (fewer when ``B == 0``)."""
    if n < 1:
        raise ValueError("n must be positive")
    A, B = ctx.elem(A), ctx.elem(B)
    target = gen_M(n, A, B, ctx)
    xs = list(range(1, n + 1))

    def pair_sum(i):
        return Node(ADD, ctx.one, ctx.zero, leaf(2 * i - 1, ctx), leaf(2 * i, ctx))

    def others(i):
        return [v for v in xs if v not in (2 * i - 1, 2 * i)]

    summands = []
    if n % 2 == 0:
        k = n // 2
        for i in range(1, k):
            summands.append(rof_mul(pair_sum(i), mul_chain(others(i), ctx), ctx, a=B))
        u, v = 2 * k - 1, 2 * k
        head = rof_from_bivariate(_poly(ctx, n, {(u,): B, (v,): B, (u, v): A}))
        summands.append(rof_mul(head, mul_chain(xs[: 2 * k - 2], ctx), ctx))
    else:
        k = (n - 1) // 2
        for i in range(1, k + 1):
            summands.append(rof_mul(pair_sum(i), mul_chain(others(i), ctx), ctx, a=B))
        tail = rof_from_bivariate(_poly(ctx, n, {(): B, (n,): A}))
        summands.append(rof_mul(mul_chain(xs[: 2 * k], ctx), tail, ctx))
    return _finish(target, summands, SYMMETRIC_M, n=n, A=ctx.fmt(A), B=ctx.fmt(B))


# sum a_i S_4^i --------------------------------------------------------------


def sym4_row(a, ctx: FieldCtx) -> int:
    """Which of the four table rows applies (1-based)."""
    _, _, a2, a3, a4 = a
    if not a2:
        return 1 if not a3 else 2
    return 3 if ctx.mul(a2, a4) == ctx.mul(a3, a3) else 4


def decompose_sym4(a: Sequence, ctx: FieldCtx) -> Decomposition:
    """Two summands for ``sum(a[i] * S_4^i)``.

    The residual constant of each row is found by expanding the row's
    products and subtracting them from the target.
    """
    if len(a) != 5:
        raise ValueError("need five coefficients a0..a4")
    a = [ctx.elem(x) for x in a]
    a0, a1, a2, a3, a4 = a
    target = sym4_combination(a, ctx)
    n = 4
    mul, div, sub, add = ctx.mul, ctx.div, ctx.sub, ctx.add
    bi = lambda coeffs: rof_from_bivariate(_poly(ctx, n, coeffs))  # noqa: E731
    row = sym4_row(a, ctx)

    if row == 1:
        summands = [
            rof_linear(_poly(ctx, n, {(): a0, (1,): a1, (2,): a1, (3,): a1, (4,): a1})),
            mul_chain([1, 2, 3, 4], ctx, a=a4),
        ]
    elif row == 2:
        summands = [
            rof_mul(bi({(): a1, (1, 2): a3}), bi({(3,): 1, (4,): 1, (3, 4): div(a4, a3)}), ctx),
            rof_mul(
                bi({(): a1, (3, 4): a3}),
                bi({(1,): 1, (2,): 1, (): ctx.neg(div(mul(a1, a4), mul(a3, a3)))}),
                ctx,
            ),
        ]
    else:
        # both rows share the first product; everything is divided by a2
        inv2 = ctx.inv(a2)
        first = rof_mul(
            bi({(): a1, (1,): a2, (2,): a2, (1, 2): a3}),
            bi({(): a1, (3,): a2, (4,): a2, (3, 4): a3}),
            ctx,
            a=inv2,
        )
        k = sub(mul(a2, a2), mul(a1, a3))
        if row == 3:
            second = Node(ADD, mul(k, inv2), ctx.zero, mul_chain([1, 2], ctx), mul_chain([3, 4], ctx))
        else:
            e = sub(mul(a2, a4), mul(a3, a3))
            second = rof_mul(bi({(1, 2): 1, (): div(k, e)}), bi({(3, 4): e, (): k}), ctx, a=inv2)
        summands = [first, second]

    partial = Poly.zero(ctx, n)
    for t in summands:
        partial = partial + expand(t, ctx, n)
    residual = target - partial
    if not residual.is_constant():
        raise InternalInvariantViolation(f"row {row} leaves a non-constant residual {residual}")
    c = residual.constant_term()
    summands[0] = affine(summands[0], ctx, 1, c)
    return _finish(target, summands, SYM4_TABLE, row=row, c=ctx.fmt(c))


# the weighted matching family ----------------------------------------------

# gen_f(u, v, w) relabelled by these swaps gives the target in the other two cases
_SWAP_24 = {2: 4, 4: 2}
_SWAP_34 = {3: 4, 4: 3}


def decompose_f(alpha, beta, gamma, ctx: FieldCtx) -> Decomposition:
    """Two read-once summands for ``gen_f(alpha, beta, gamma)`` when they exist.

    Raises :class:`NotExpressible` when all three conditions of the
    condition report hold, and :class:`RootNotRepresentable` under real
    semantics when the required square root is irrational.
    """
    from .analyze import thm7_conditions

    al, be, ga = (ctx.elem(x) for x in (alpha, beta, gamma))
    target = gen_f(al, be, ga, ctx)
    report = thm7_conditions(al, be, ga, ctx)
    mul, div, neg, sq = ctx.mul, ctx.div, ctx.neg, lambda x: ctx.mul(x, x)

    if not report.c1:
        summands = []
        for w, (p1, p2) in zip((al, be, ga), (((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3)))):
            if w:
                summands.append(Node(ADD, w, ctx.zero, mul_chain(p1, ctx), mul_chain(p2, ctx)))
        return _finish(target, summands, F_FAMILY, case="C1")

    if not report.c2:
        if sq(al) == sq(be):
            summands, swap = _matched_squares(al, be, ga, ctx), None
        elif sq(be) == sq(ga):
            summands, swap = _matched_squares(ga, be, al, ctx), _SWAP_24
        else:
            summands, swap = _matched_squares(al, ga, be, ctx), _SWAP_34
        if swap:
            summands = [relabel(t, swap) for t in summands]
        return _finish(target, summands, F_FAMILY, case="C2")

    if not report.c3:
        tau = report.c3_root
        if isinstance(tau, IrrationalRoot):
            raise RootNotRepresentable(
                f"expressible over the reals but sqrt({tau.square}) is irrational", report
            )
        two = ctx.elem(2)
        delta = div(ctx.add(ctx.sub(ctx.sub(sq(al), sq(be)), sq(ga)), tau), mul(two, mul(be, ga)))
        mu = neg(div(ctx.add(ga, mul(be, delta)), al))
        if not delta or not mu:
            raise InternalInvariantViolation(f"degenerate delta={delta}, mu={mu}")
        s1 = rof_mul(
            Node(ADD, ctx.one, ctx.zero, leaf(1, ctx), leaf(3, ctx, neg(mu))),
            Node(ADD, ctx.one, ctx.zero, leaf(2, ctx), leaf(4, ctx, neg(ctx.inv(mu)))),
            ctx,
            a=al,
        )
        s2 = rof_mul(
            Node(ADD, ctx.one, ctx.zero, leaf(1, ctx), leaf(2, ctx, neg(delta))),
            Node(ADD, ctx.one, ctx.zero, leaf(3, ctx), leaf(4, ctx, neg(ctx.inv(delta)))),
            ctx,
            a=be,
        )
        return _finish(target, [s1, s2], F_FAMILY, case="C3", delta=ctx.fmt(delta), mu=ctx.fmt(mu))

    raise NotExpressible(
        f"gen_f({ctx.fmt(al)}, {ctx.fmt(be)}, {ctx.fmt(ga)}) satisfies C1, C2 and C3 over {ctx}", report
    )


def _matched_squares(u, v, w, ctx):
    """``u(x1 + s*x4)(x2 + s*x3) + w(x1*x4 + x2*x3)`` for ``v = s*u``, ``s*s = 1``."""
    s = ctx.div(v, u)
    first = rof_mul(
        Node(ADD, ctx.one, ctx.zero, leaf(1, ctx), leaf(4, ctx, s)),
        Node(ADD, ctx.one, ctx.zero, leaf(2, ctx), leaf(3, ctx, s)),
        ctx,
        a=u,
    )
    second = Node(ADD, w, ctx.zero, mul_chain([1, 4], ctx), mul_chain([2, 3], ctx))
    return [first, second]


# shape recognition ----------------------------------------------------------


def match_f_family(p: Poly) -> Optional[tuple]:
    """``(alpha, beta, gamma)`` if ``p`` is ``gen_f`` of those weights."""
    if p.nvars != 4 or not p.is_multilinear() or any(sum(e) != 2 for e in p.terms):
        return None
    weights = []
    for pairs in (((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3))):
        c1, c2 = p.coeff(pairs[0]), p.coeff(pairs[1])
        if c1 != c2:
            return None
        weights.append(c1)
    return tuple(weights)


def match_M(p: Poly) -> Optional[tuple]:
    """``(n, A, B)`` if ``p == A*S_n^n + B*S_n^{n-1}`` with ``n = p.nvars``."""
    n = p.nvars
    if n < 1 or not p.is_multilinear():
        return None
    ctx = p.ctx
    A = p.coeff(range(1, n + 1))
    B = p.coeff(range(1, n))
    return (n, A, B) if gen_M(n, A, B, ctx) == p else None


def match_sym4(p: Poly) -> Optional[tuple]:
    """``(a0, ..., a4)`` if ``p`` is a symmetric multilinear polynomial in four variables."""
    if p.nvars != 4 or not p.is_multilinear():
        return None
    a = tuple(p.coeff(range(1, k + 1)) for k in range(5))
    return a if sym4_combination(a, p.ctx) == p else None


def gen_rof_products(pairs, ctx, n) -> List[Rof]:
    """Formulas for products ``l * m`` of variable-disjoint affine polynomials."""
    return [rof_mul(rof_from_bivariate(l.embed(n)), rof_from_bivariate(m.embed(n)), ctx) for l, m in pairs]


def bound_for(construction: str, n: int) -> int:
    if construction == GENERIC:
        return generic_bound(n)
    if construction == SYMMETRIC_M:
        return -(-n // 2)
    return 2


__all__ = [
    "Decomposition",
    "verify_decomposition",
    "decompose_generic",
    "decompose_M",
    "decompose_sym4",
    "decompose_f",
    "match_f_family",
    "match_M",
    "match_sym4",
    "generic_bound",
    "bound_for",
    "CONSTRUCTIONS",
    "gen_symmetric",
]
