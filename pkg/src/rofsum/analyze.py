"""Decision and refutation tools for sums of two read-once polynomials.

``thm7_conditions`` evaluates the three conditions on the weights of
``gen_f``; the ``c*prime_check`` functions evaluate the necessary conditions
that any 4-variate sum of two read-once polynomials must meet.  When all of
those fail, ``refute_sum2`` returns a refutation.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import List, NamedTuple, Optional, Sequence, Tuple

from .errors import (
    InternalInvariantViolation,
    NotExpressible,
    RootNotRepresentable,
    WrongArity,
)
from .mpoly import Poly
from .numfield import FieldCtx, IrrationalRoot, Q

REFUTED = "RefutedNotSum2"
INCONCLUSIVE = "Inconclusive"
EXPRESSIBLE = "ExpressibleWitness"
NOT_ROP = "NotROP"

# brute force over F_p is used for the remaining-pair root test up to this p
BRUTE_FORCE_LIMIT = 257


class C1Witness(NamedTuple):
    i: int
    j: int
    A: object
    B: object


class C2Witness(NamedTuple):
    i: int
    j: int
    # coefficients of (x_i, x_j, d_i g, d_j g, 1)
    coefficients: tuple


class C3Witness(NamedTuple):
    """``g == l1*l2 + l3*l4``; ``first``/``second`` are the two variable splits."""

    l1: Poly
    l2: Poly
    l3: Poly
    l4: Poly
    first: tuple
    second: tuple

    def expand(self) -> Poly:
        return self.l1 * self.l2 + self.l3 * self.l4


@dataclass
class ConditionReport:
    c1: Optional[bool] = None
    c2: Optional[bool] = None
    c3: Optional[bool] = None
    d_values: Optional[tuple] = None
    c3_root: object = None
    c1p: Optional[C1Witness] = None
    c2p: Optional[C2Witness] = None
    c3p: Optional[C3Witness] = None
    primes_checked: bool = False
    # a needed square root was irrational, so a missing c3p proves nothing
    c3p_irrational: bool = False
    ctx: FieldCtx = Q

    @property
    def all_c(self) -> bool:
        return bool(self.c1 and self.c2 and self.c3)

    @property
    def any_prime(self) -> bool:
        return any(w is not None for w in (self.c1p, self.c2p, self.c3p))

    def to_json(self) -> dict:
        fmt = self.ctx.fmt
        out = {"field": self.ctx.selector, "c1": self.c1, "c2": self.c2, "c3": self.c3}
        out["d_values"] = None if self.d_values is None else [fmt(d) for d in self.d_values]
        root = self.c3_root
        if isinstance(root, IrrationalRoot):
            out["c3_root"] = f"sqrt({fmt(root.square)})"
        else:
            out["c3_root"] = None if root is None else fmt(root)
        if self.primes_checked:
            w1, w2, w3 = self.c1p, self.c2p, self.c3p
            out["c1p"] = {
                "holds": w1 is not None,
                "witness": None if w1 is None else {"i": w1.i, "j": w1.j, "A": fmt(w1.A), "B": fmt(w1.B)},
            }
            out["c2p"] = {
                "holds": w2 is not None,
                "witness": None
                if w2 is None
                else {"i": w2.i, "j": w2.j, "coefficients": [fmt(c) for c in w2.coefficients]},
            }
            out["c3p"] = {
                "holds": w3 is not None,
                "witness": None
                if w3 is None
                else {
                    "l1": w3.l1.to_text(),
                    "l2": w3.l2.to_text(),
                    "l3": w3.l3.to_text(),
                    "l4": w3.l4.to_text(),
                    "first": [list(b) for b in w3.first],
                    "second": [list(b) for b in w3.second],
                },
            }
            if self.c3p_irrational:
                out["c3p"]["irrational_root_seen"] = True
        return out


# weights of gen_f ------------------------------------------------------------


def d_values(alpha, beta, gamma, ctx: FieldCtx = Q) -> tuple:
    a2, b2, g2 = (ctx.mul(x, x) for x in (alpha, beta, gamma))
    m, s = ctx.mul, ctx.sub
    two = ctx.elem(2)

    def d(u, v, w, x, y):
        t = s(s(u, v), w)
        c = m(two, m(x, y))
        return s(m(t, t), m(c, c))

    d1 = d(a2, b2, g2, beta, gamma)
    d2 = d(b2, a2, g2, alpha, gamma)
    d3 = d(g2, a2, b2, alpha, beta)
    return d1, d2, d3


def thm7_conditions(alpha, beta, gamma, ctx: FieldCtx = Q) -> ConditionReport:
    al, be, ga = (ctx.elem(x) for x in (alpha, beta, gamma))
    m, s = ctx.mul, ctx.sub
    a2, b2, g2 = m(al, al), m(be, be), m(ga, ga)
    c1 = bool(m(m(al, be), ga))
    c2 = bool(m(m(s(a2, b2), s(b2, g2)), s(g2, a2)))
    ds = d_values(al, be, ga, ctx)
    roots = [ctx.sqrt(d) for d in ds]
    c3 = all(r is None for r in roots)
    root = next((r for r in roots if r is not None), None)
    return ConditionReport(c1=c1, c2=c2, c3=c3, d_values=ds, c3_root=root, ctx=ctx)


# C1' -------------------------------------------------------------------------


def _need4(g: Poly, what: str):
    g.require_multilinear(what)
    if g.nvars != 4:
        raise WrongArity(f"{what} needs a polynomial in exactly 4 variables, got {g.nvars}")


def c1prime_check(g: Poly) -> Optional[C1Witness]:
    """First pair ``(i, j)`` and point ``(A, B)`` making ``g|x_i=A,x_j=B`` affine."""
    _need4(g, "c1prime_check")
    ctx = g.ctx
    for i, j in combinations(range(1, 5), 2):
        k, l = (v for v in range(1, 5) if v not in (i, j))
        c0 = g.coeff((k, l))
        c1 = g.coeff((i, k, l))
        c2 = g.coeff((j, k, l))
        c3 = g.coeff((i, j, k, l))
        ab = _bilinear_root(c0, c1, c2, c3, ctx)
        if ab is not None:
            w = C1Witness(i, j, *ab)
            if g.restrict_many({i: w.A, j: w.B}).degree() > 1:
                raise InternalInvariantViolation(f"C1' witness {w} does not linearize")
            return w
    return None


def _bilinear_root(c0, c1, c2, c3, ctx):
    """A root of ``c0 + c1*A + c2*B + c3*A*B``, or ``None``."""
    if ctx.is_finite and ctx.p <= BRUTE_FORCE_LIMIT:
        m, a = ctx.mul, ctx.add
        for A, B in product(range(ctx.p), repeat=2):
            if not a(a(c0, m(c1, A)), m(B, a(c2, m(c3, A)))):
                return A, B
        return None
    zero = ctx.zero
    if not (c0 or c1 or c2 or c3):
        return zero, zero
    if c3:
        B = zero if c1 else ctx.one
        A = ctx.neg(ctx.div(ctx.add(c0, ctx.mul(c2, B)), ctx.add(c1, ctx.mul(c3, B))))
        return A, B
    if c1:
        return ctx.neg(ctx.div(c0, c1)), zero
    if c2:
        return zero, ctx.neg(ctx.div(c0, c2))
    return None


# C2' -------------------------------------------------------------------------


def nullspace(rows: Sequence[Sequence], ncols: int, ctx: FieldCtx) -> List[tuple]:
    """Basis of ``{v : M v = 0}`` by exact Gauss-Jordan elimination."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((k for k in range(r, len(m)) if m[k][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = ctx.inv(m[r][c])
        m[r] = [ctx.mul(inv, x) for x in m[r]]
        for k in range(len(m)):
            if k != r and m[k][c]:
                f = m[k][c]
                m[k] = [ctx.sub(x, ctx.mul(f, y)) for x, y in zip(m[k], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [ctx.zero] * ncols
        v[free] = ctx.one
        for row, pc in enumerate(pivots):
            v[pc] = ctx.neg(m[row][free])
        basis.append(tuple(v))
    return basis


def affinely_dependent(polys: Sequence[Poly]) -> Optional[tuple]:
    """Coefficients ``c`` with ``sum(c_k * polys[k])`` constant, not all zero.

    The constant polynomial is appended to the set, so the returned tuple
    has one more entry than ``polys``.
    """
    ctx = polys[0].ctx
    n = polys[0].nvars
    cols = list(polys) + [Poly.const(ctx, n, 1)]
    support = sorted({e for p in cols for e in p.terms})
    rows = [[p.coeff_exps(e) for p in cols] for e in support]
    basis = nullspace(rows, len(cols), ctx)
    if not basis:
        return None
    v = basis[0]
    lead = next(x for x in v if x)
    inv = ctx.inv(lead)
    return tuple(ctx.mul(inv, x) for x in v)


def c2prime_check(g: Poly) -> Optional[C2Witness]:
    """First pair whose ``{x_i, x_j, d_i g, d_j g, 1}`` is linearly dependent."""
    g.require_multilinear("c2prime_check")
    ctx, n = g.ctx, g.nvars
    for i, j in combinations(range(1, n + 1), 2):
        polys = [Poly.var(ctx, n, i), Poly.var(ctx, n, j), g.partial_derivative(i), g.partial_derivative(j)]
        dep = affinely_dependent(polys)
        if dep is not None:
            return C2Witness(i, j, dep)
    return None


# C3' -------------------------------------------------------------------------


class _Trace:
    irrational = False


def quadratic_roots(a, b, c, ctx: FieldCtx, trace: Optional[_Trace] = None) -> list:
    """Roots of ``a t^2 + b t + c`` in ascending order (``a`` may be zero)."""
    if not a:
        if b:
            return [ctx.neg(ctx.div(c, b))]
        return [] if c else None  # None: every t is a root
    if ctx.is_finite and ctx.p <= BRUTE_FORCE_LIMIT:
        m, ad = ctx.mul, ctx.add
        return [t for t in range(ctx.p) if not ad(ad(m(a, m(t, t)), m(b, t)), c)]
    disc = ctx.sub(ctx.mul(b, b), ctx.mul(ctx.elem(4), ctx.mul(a, c)))
    r = ctx.sqrt(disc)
    if r is None:
        return []
    if isinstance(r, IrrationalRoot):
        if trace is not None:
            trace.irrational = True
        return []
    two_a = ctx.mul(ctx.elem(2), a)
    roots = {ctx.div(ctx.sub(r, b), two_a), ctx.div(ctx.sub(ctx.neg(b), r), two_a)}
    return sorted(roots)


def normalize_affine(l: Poly) -> Tuple[Poly, object]:
    """``(monic l, scale)`` with ``l == scale * monic``; the lowest variable leads."""
    vs = sorted(l.variables())
    if not vs:
        return l, l.ctx.one
    lead = l.coeff([vs[0]])
    return l.scale(l.ctx.inv(lead)), lead


def affine_factors(q: Poly, u: int, v: int, trace: Optional[_Trace] = None) -> List[Poly]:
    """Monic affine ``l`` in ``x_u, x_v`` with ``q == l * m`` for an affine ``m``.

    ``q`` must live on ``{x_u, x_v}`` with total degree at most two.
    """
    ctx, n = q.ctx, q.nvars
    if q.is_zero() or q.degree() > 2 or not q.variables() <= {u, v}:
        return []
    if q.degree() <= 1:
        return [normalize_affine(q)[0]] if q.degree() == 1 else []

    def cf(eu, ev):
        e = [0] * n
        e[u - 1], e[v - 1] = eu, ev
        return q.coeff_exps(e)

    qa, s, r = cf(2, 0), cf(1, 1), cf(0, 2)
    d, e, h = cf(1, 0), cf(0, 1), cf(0, 0)
    # split the quadratic part into (a1 u + b1 v)(a2 u + b2 v)
    if qa:
        ts = quadratic_roots(qa, s, r, ctx, trace)
        if not ts:
            return []
        t1, t2 = ts[0], ts[-1]
        L1 = (ctx.one, ctx.neg(t1))
        L2 = (qa, ctx.neg(ctx.mul(qa, t2)))
    elif s:
        L1 = (ctx.zero, ctx.one)
        L2 = (s, r)
    else:
        L1 = (ctx.zero, ctx.one)
        L2 = (ctx.zero, r)
    (a1, b1), (a2, b2) = L1, L2

    def lin(ab, c):
        return Poly(ctx, n, {}) + Poly.var(ctx, n, u, ab[0]) + Poly.var(ctx, n, v, ab[1]) + Poly.const(ctx, n, c)

    out = []
    det = ctx.sub(ctx.mul(a2, b1), ctx.mul(a1, b2))
    if det:
        # a2*c1 + a1*c2 = d, b2*c1 + b1*c2 = e
        c1 = ctx.div(ctx.sub(ctx.mul(d, b1), ctx.mul(a1, e)), det)
        c2 = ctx.div(ctx.sub(ctx.mul(a2, e), ctx.mul(b2, d)), det)
        if ctx.mul(c1, c2) == h:
            out = [lin(L1, c1), lin(L2, c2)]
    else:
        # q = lam * w^2 + kappa * w + h with w = a1 u + b1 v
        lam = ctx.div(a2, a1) if a1 else ctx.div(b2, b1)
        kappa = ctx.div(d, a1) if a1 else ctx.div(e, b1)
        if ctx.mul(kappa, a1) != d or ctx.mul(kappa, b1) != e:
            return []
        ws = quadratic_roots(lam, kappa, h, ctx, trace)
        out = [lin(L1, ctx.neg(w)) for w in ws or []]
    res = []
    for l in out:
        l = normalize_affine(l)[0]
        if l.degree() >= 1 and l not in res:
            res.append(l)
    return res


def _orientations():
    """(first split, second split, canonical -> original map), in a fixed order."""
    parts = [((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3))]
    for P, Qp in product(parts, repeat=2):
        if P == Qp:
            continue
        for A, B in (P, P[::-1]):
            a1, a2 = A
            blk1 = next(b for b in Qp if a1 in b)
            blk2 = next(b for b in Qp if a2 in b)
            bx = next(x for x in blk1 if x != a1)
            by = next(x for x in blk2 if x != a2)
            yield P, Qp, {1: a1, 2: a2, 3: bx, 4: by}


def c3prime_reconstruct(g: Poly, trace: Optional[_Trace] = None) -> Optional[C3Witness]:
    """Affine ``l1..l4`` with ``g == l1*l2 + l3*l4`` on two different variable splits.

    ``l2`` and ``l4`` are returned with leading coefficient 1; the scalars
    sit in ``l1`` and ``l3``.
    """
    _need4(g, "c3prime_reconstruct")
    if g.degree() > 2:
        return None
    for P, Qp, canon in _orientations():
        back = dict(canon)
        fwd = {o: c for c, o in canon.items()}
        gc = g.relabel(fwd)
        found = _solve_canonical(gc, trace)
        if found is None:
            continue
        l1, l2, l3, l4 = (l.relabel(back) for l in found)
        w = C3Witness(l1, l2, l3, l4, tuple(P), tuple(Qp))
        if w.expand() != g:
            raise InternalInvariantViolation("C3' reconstruction does not expand back")
        return w
    return None


def _solve_canonical(g: Poly, trace) -> Optional[tuple]:
    # g = l1(x1,x2) l2(x3,x4) + l3(x1,x3) l4(x2,x4)
    ctx = g.ctx
    delta = g.commutator(1, 2)
    if delta.is_zero():
        if ctx.is_finite and ctx.p <= 31:
            cands = _all_monic_l2(ctx)
        else:
            return None
    else:
        cands = affine_factors(delta, 3, 4, trace)
    for l2 in cands:
        got = _complete(g, l2, trace)
        if got is not None:
            return got
    return None


def _all_monic_l2(ctx):
    n = 4
    out = []
    for b4, b0 in product(range(ctx.p), repeat=2):
        out.append(Poly.from_subsets(ctx, n, {(3,): 1, (4,): b4, (): b0}))
    for b0 in range(ctx.p):
        out.append(Poly.from_subsets(ctx, n, {(4,): 1, (): b0}))
    return out


def _complete(g: Poly, l2: Poly, trace) -> Optional[tuple]:
    ctx = g.ctx
    m, s = ctx.mul, ctx.sub
    b0, b3, b4 = l2.constant_term(), l2.coeff([3]), l2.coeff([4])
    if not b3 or not b4:
        return None
    a1 = ctx.div(g.coeff([1, 3]), b3)
    a2 = ctx.div(g.coeff([2, 4]), b4)
    G = g.coeff
    # grid entries of g - l1*l2 as (constant, coefficient of a0)
    rows, cols = ((), (1,), (3,)), ((), (2,), (4,))
    l1l2_fixed = {(1,): m(a1, b0), (2,): m(a2, b0), (1, 4): m(a1, b4), (2, 3): m(a2, b3)}
    l1l2_a0 = {(): b0, (3,): b3, (4,): b4}
    grid = []
    for r in rows:
        row = []
        for c in cols:
            mono = tuple(sorted(r + c))
            row.append((s(G(mono), l1l2_fixed.get(mono, ctx.zero)), ctx.neg(l1l2_a0.get(mono, ctx.zero))))
        grid.append(row)
    minors = []
    for (r1, r2), (c1, c2) in product(combinations(range(3), 2), repeat=2):
        minors.append(_sub_q(_mul_lin(grid[r1][c1], grid[r2][c2], ctx), _mul_lin(grid[r1][c2], grid[r2][c1], ctx), ctx))
    live = next((q for q in minors if any(q)), None)
    if live is None:
        a0s = [ctx.zero]
    else:
        a0s = quadratic_roots(live[2], live[1], live[0], ctx, trace) or []
    n = 4
    for a0 in a0s:
        l1 = Poly.from_subsets(ctx, n, {(): a0, (1,): a1, (2,): a2})
        h = g - l1 * l2
        f = _rank_one(h)
        if f is None:
            continue
        l3, l4 = f
        l2n, sc = normalize_affine(l2)
        l1 = l1.scale(sc)
        l4n, sc4 = normalize_affine(l4)
        l3 = l3.scale(sc4)
        return l1, l2n, l3, l4n
    return None


def _mul_lin(x, y, ctx):
    # (x0 + x1 t)(y0 + y1 t) as [c0, c1, c2]
    return [ctx.mul(x[0], y[0]), ctx.add(ctx.mul(x[0], y[1]), ctx.mul(x[1], y[0])), ctx.mul(x[1], y[1])]


def _sub_q(p, q, ctx):
    return [ctx.sub(a, b) for a, b in zip(p, q)]


def _rank_one(h: Poly) -> Optional[Tuple[Poly, Poly]]:
    """Split ``h`` as ``l3(x1, x3) * l4(x2, x4)`` when possible."""
    ctx, n = h.ctx, 4
    rows, cols = ((), (1,), (3,)), ((), (2,), (4,))
    allowed = {tuple(sorted(r + c)) for r in rows for c in cols}
    for e in h.terms:
        if tuple(i + 1 for i, x in enumerate(e) if x) not in allowed or max(e) > 1:
            return None
    G = [[h.coeff(r + c) for c in cols] for r in rows]
    piv = next(((i, j) for i in range(3) for j in range(3) if G[i][j]), None)
    if piv is None:
        return Poly.zero(ctx, n), Poly.const(ctx, n, 1)
    pi, pj = piv
    u = [G[i][pj] for i in range(3)]
    v = [ctx.div(G[pi][j], G[pi][pj]) for j in range(3)]
    for i in range(3):
        for j in range(3):
            if G[i][j] != ctx.mul(u[i], v[j]):
                return None
    l3 = Poly.from_subsets(ctx, n, {(): u[0], (1,): u[1], (3,): u[2]})
    l4 = Poly.from_subsets(ctx, n, {(): v[0], (2,): v[1], (4,): v[2]})
    return l3, l4


def affine_divides(l: Poly, p: Poly) -> bool:
    """Whether the nonconstant affine ``l`` divides ``p`` (zero remainder)."""
    ctx = l.ctx
    vs = sorted(l.variables())
    if not vs or l.degree() != 1:
        raise ValueError("divisor must be a nonconstant affine polynomial")
    v = vs[-1]
    c = l.coeff([v])
    # x_v = -(l - c x_v) / c
    rest = l - Poly.var(ctx, l.nvars, v, c)
    sub = rest.scale(ctx.neg(ctx.inv(c)))
    return substitute(p, v, sub).is_zero()


def substitute(p: Poly, i: int, q: Poly) -> Poly:
    ctx, n = p.ctx, p.nvars
    out = Poly.zero(ctx, n)
    powers = {0: Poly.const(ctx, n, 1)}
    for exps, c in p.terms.items():
        e = exps[i - 1]
        if e not in powers:
            powers[e] = q**e
        base = Poly._raw(ctx, n, {exps[: i - 1] + (0,) + exps[i:]: c})
        out = out + base * powers[e]
    return out


# combined report and refutation ---------------------------------------------


def condition_report(g: Poly) -> ConditionReport:
    """All conditions that apply to ``g``; the weight conditions only for ``gen_f`` shapes."""
    from .decompose import match_f_family

    _need4(g, "condition_report")
    weights = match_f_family(g)
    rep = thm7_conditions(*weights, g.ctx) if weights is not None else ConditionReport(ctx=g.ctx)
    trace = _Trace()
    rep.c1p = c1prime_check(g)
    rep.c2p = c2prime_check(g)
    rep.c3p = c3prime_reconstruct(g, trace)
    rep.c3p_irrational = trace.irrational
    rep.primes_checked = True
    return rep


class RefuteResult(NamedTuple):
    verdict: str
    report: Optional[ConditionReport] = None
    certificate: object = None
    witness: object = None


def refute_sum2(g: Poly) -> RefuteResult:
    """Refute, certify or give up on ``g`` being a sum of two read-once polynomials."""
    from .decompose import (
        COMMUTATOR,
        Decomposition,
        decompose_f,
        decompose_generic,
        decompose_sym4,
        gen_rof_products,
        match_f_family,
        match_sym4,
        verify_decomposition,
    )

    rep = condition_report(g)
    ctx = g.ctx
    cert = None
    if rep.c3p is not None:
        w = rep.c3p
        cert = Decomposition(g, gen_rof_products([(w.l1, w.l2), (w.l3, w.l4)], ctx, 4), COMMUTATOR)
        verify_decomposition(cert)
    if cert is None:
        weights = match_f_family(g)
        if weights is not None:
            try:
                cert = decompose_f(*weights, ctx)
            except (NotExpressible, RootNotRepresentable):
                pass
    if cert is None and match_sym4(g) is not None:
        cert = decompose_sym4(match_sym4(g), ctx)
    if cert is None:
        d = decompose_generic(g)
        if len(d) <= 2:
            cert = d
    if cert is not None:
        if not cert.verified:
            raise InternalInvariantViolation("certificate failed verification")
        if not rep.any_prime:
            raise InternalInvariantViolation("certificate found although every necessary condition fails")
        return RefuteResult(EXPRESSIBLE, rep, cert)
    if not rep.any_prime and not rep.c3p_irrational:
        return RefuteResult(REFUTED, rep)
    return RefuteResult(INCONCLUSIVE, rep)


def prop2_refute_3var(g: Poly) -> RefuteResult:
    """``NotROP`` when no single assignment ``x_i = A`` makes ``g`` affine.

    With three variables, fixing ``x_i`` leaves ``x_j x_k`` as the only
    possible nonlinear monomial, with coefficient ``c_jk + A * c_ijk``.
    """
    g.require_multilinear("prop2_refute_3var")
    vs = sorted(g.variables())
    if len(vs) != 3:
        raise WrongArity(f"needs exactly 3 effective variables, got {len(vs)}")
    ctx = g.ctx
    for i in vs:
        j, k = (v for v in vs if v != i)
        cjk, cijk = g.coeff((j, k)), g.coeff((i, j, k))
        if cijk:
            return RefuteResult(INCONCLUSIVE, witness=(i, ctx.neg(ctx.div(cjk, cijk))))
        if not cjk:
            return RefuteResult(INCONCLUSIVE, witness=(i, ctx.zero))
    return RefuteResult(NOT_ROP)
