"""Independent reference computations used by the tests.

Polynomials and formulas are rebuilt as sympy expressions, so equality
checks do not go through the package's own expansion code.
"""

import random
from fractions import Fraction
from itertools import combinations

import sympy

from rofsum.mpoly import Poly
from rofsum.rof import ADD, MUL, Leaf, Node

X = sympy.symbols("x1:13")


def sym_scalar(c, ctx):
    return sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else sympy.Integer(c)


def poly_to_sympy(p: Poly):
    expr = sympy.Integer(0)
    for exps, c in p.terms.items():
        term = sym_scalar(c, p.ctx)
        for i, e in enumerate(exps):
            term *= X[i] ** e
        expr += term
    return sympy.expand(expr)


def rof_to_sympy(t, ctx):
    if isinstance(t, Leaf):
        return sym_scalar(t.a, ctx) * X[t.var - 1] + sym_scalar(t.b, ctx)
    left, right = rof_to_sympy(t.left, ctx), rof_to_sympy(t.right, ctx)
    inner = left + right if t.op == ADD else left * right
    return sym_scalar(t.a, ctx) * inner + sym_scalar(t.b, ctx)


def same_mod(expr_a, expr_b, ctx, nvars):
    """Equality of two sympy expressions as polynomials over ``ctx``."""
    gens = X[:nvars]
    diff = sympy.Poly(sympy.expand(expr_a - expr_b), *gens, domain="QQ")
    if ctx.kind == "q":
        return diff.is_zero
    for c in diff.coeffs():
        c = sympy.Rational(c)
        if (c.p * pow(int(c.q), -1, ctx.p)) % ctx.p:
            return False
    return True


def sum_matches(summands, target: Poly):
    total = sum((rof_to_sympy(t, target.ctx) for t in summands), sympy.Integer(0))
    return same_mod(total, poly_to_sympy(target), target.ctx, target.nvars)


def subsets(n):
    return [c for k in range(n + 1) for c in combinations(range(1, n + 1), k)]


def rand_scalar(rng, ctx, nonzero=False, lo=-6, hi=6):
    while True:
        if ctx.is_finite:
            c = rng.randrange(ctx.p)
        else:
            c = Fraction(rng.randint(lo, hi), rng.choice([1, 1, 1, 2, 3]))
        c = ctx.elem(c)
        if c or not nonzero:
            return c


def rand_multilinear(rng, ctx, n, density=0.6):
    coeffs = {s: rand_scalar(rng, ctx) for s in subsets(n) if rng.random() < density}
    return Poly.from_subsets(ctx, n, coeffs)


def rand_affine(rng, ctx, n, a, b):
    """``c0 + c1*x_a + c2*x_b`` with both variables present."""
    return Poly.from_subsets(
        ctx,
        n,
        {(): rand_scalar(rng, ctx), (a,): rand_scalar(rng, ctx, True), (b,): rand_scalar(rng, ctx, True)},
    )


def rand_multiplicative_rof(rng, ctx, variables):
    """Random formula without addition gates whose leaves are exactly ``variables``."""
    variables = list(variables)
    if len(variables) == 1:
        return Leaf(variables[0], rand_scalar(rng, ctx, True), rand_scalar(rng, ctx))
    rng.shuffle(variables)
    cut = rng.randint(1, len(variables) - 1)
    return Node(
        MUL,
        rand_scalar(rng, ctx, True),
        rand_scalar(rng, ctx),
        rand_multiplicative_rof(rng, ctx, variables[:cut]),
        rand_multiplicative_rof(rng, ctx, variables[cut:]),
    )


def brute_force_rops(ctx, n):
    """Every read-once polynomial in ``n`` variables, by enumerating formulas.

    Only for tiny fields and ``n <= 3``: subtrees are enumerated as explicit
    polynomial sets, one per variable subset, with no normalization tricks.
    """
    elems = list(range(ctx.p))
    const = {Poly.const(ctx, n, c) for c in elems}
    by_subset = {(): const}
    for i in range(1, n + 1):
        by_subset[(i,)] = {Poly.var(ctx, n, i, a) + Poly.const(ctx, n, b) for a in elems for b in elems}
    for k in range(2, n + 1):
        for S in combinations(range(1, n + 1), k):
            out = set()
            for r in range(1, k):
                for A in combinations(S, r):
                    B = tuple(v for v in S if v not in A)
                    for f in by_subset[A]:
                        for g in by_subset[B]:
                            for inner in (f + g, f * g):
                                for a in elems:
                                    for b in elems:
                                        out.add(inner.scale(a) + Poly.const(ctx, n, b))
            by_subset[S] = out
    return set().union(*by_subset.values())


def seeded(seed):
    return random.Random(seed)
