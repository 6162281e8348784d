"""Sparse exact polynomials over a :class:`~rofsum.numfield.FieldCtx`.

Variables are ``x1..xn`` (1-based).  Terms are stored as a dict from an
exponent tuple of length ``n`` to a nonzero coefficient.  Exponents above one
are allowed on purpose: commutators of multilinear polynomials produce
squares, so multilinearity is a predicate checked by the operations that
need it.
"""

from __future__ import annotations

from itertools import combinations
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import FieldMismatch, NotMultilinear
from .numfield import FieldCtx, FieldElem

Exps = tuple


class Poly:
    __slots__ = ("ctx", "nvars", "_terms", "_hash")

    def __init__(self, ctx: FieldCtx, nvars: int, terms: Mapping[Exps, FieldElem] = ()):
        self.ctx = ctx
        self.nvars = nvars
        clean = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exps, c in items:
            exps = tuple(exps)
            if len(exps) != nvars:
                raise ValueError(f"exponent vector {exps} does not have {nvars} entries")
            c = ctx.elem(c)
            if c:
                if exps in clean:
                    c = ctx.add(clean[exps], c)
                    if not c:
                        del clean[exps]
                        continue
                clean[exps] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ctx, nvars, terms):
        # terms already canonical with no zero coefficients
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj.nvars = nvars
        obj._terms = terms
        obj._hash = None
        return obj

    # constructors -------------------------------------------------------

    @classmethod
    def zero(cls, ctx, nvars):
        return cls._raw(ctx, nvars, {})

    @classmethod
    def const(cls, ctx, nvars, c):
        c = ctx.elem(c)
        return cls._raw(ctx, nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def var(cls, ctx, nvars, i, coef=1):
        return cls.monomial(ctx, nvars, (i,), coef)

    @classmethod
    def monomial(cls, ctx, nvars, variables: Iterable[int], coef=1):
        """``coef * prod(x_i for i in variables)``."""
        exps = [0] * nvars
        for i in variables:
            _check_index(i, nvars)
            exps[i - 1] += 1
        return cls.const(ctx, nvars, 0) if not ctx.elem(coef) else cls._raw(
            ctx, nvars, {tuple(exps): ctx.elem(coef)}
        )

    @classmethod
    def from_subsets(cls, ctx, nvars, coeffs: Mapping[Iterable[int], FieldElem]):
        """Multilinear polynomial from ``{variable subset: coefficient}``."""
        terms = {}
        for vs, c in coeffs.items():
            exps = [0] * nvars
            for i in vs:
                exps[i - 1] = 1
            terms[tuple(exps)] = c
        return cls(ctx, nvars, terms)

    # basic protocol -----------------------------------------------------

    @property
    def terms(self) -> Mapping[Exps, FieldElem]:
        return MappingProxyType(self._terms)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ctx == other.ctx and self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx, self.nvars, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __repr__(self):
        return f"Poly({self.ctx}, {self.nvars}, {self.to_text()!r})"

    def __str__(self):
        return self.to_text()

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and not any(next(iter(self._terms))))

    def constant_term(self) -> FieldElem:
        return self._terms.get((0,) * self.nvars, self.ctx.zero)

    def coeff(self, variables: Iterable[int] = ()) -> FieldElem:
        """Coefficient of the squarefree monomial over ``variables``."""
        exps = [0] * self.nvars
        for i in variables:
            exps[i - 1] = 1
        return self._terms.get(tuple(exps), self.ctx.zero)

    def coeff_exps(self, exps: Exps) -> FieldElem:
        return self._terms.get(tuple(exps), self.ctx.zero)

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def is_multilinear(self) -> bool:
        return all(e <= 1 for exps in self._terms for e in exps)

    def variables(self) -> frozenset:
        """Var(p): the 1-based indices with a positive exponent somewhere."""
        out = set()
        for exps in self._terms:
            out.update(i + 1 for i, e in enumerate(exps) if e)
        return frozenset(out)

    def varset(self) -> int:
        """Var(p) as a bitmask, bit ``i-1`` standing for ``x_i``."""
        mask = 0
        for i in self.variables():
            mask |= 1 << (i - 1)
        return mask

    def require_multilinear(self, what="operation"):
        if not self.is_multilinear():
            raise NotMultilinear(f"{what} needs a multilinear polynomial, got {self.to_text()}")
        return self

    # arithmetic ---------------------------------------------------------

    def _compat(self, other: "Poly"):
        if self.ctx != other.ctx:
            raise FieldMismatch(f"cannot combine polynomials over {self.ctx} and {other.ctx}")
        if self.nvars != other.nvars:
            raise FieldMismatch(f"cannot combine {self.nvars}- and {other.nvars}-variable polynomials")

    def _lift(self, other):
        if isinstance(other, Poly):
            self._compat(other)
            return other
        return Poly.const(self.ctx, self.nvars, other)

    def __add__(self, other):
        other = self._lift(other)
        add = self.ctx.add
        out = dict(self._terms)
        for k, c in other._terms.items():
            if k in out:
                s = add(out[k], c)
                if s:
                    out[k] = s
                else:
                    del out[k]
            else:
                out[k] = c
        return Poly._raw(self.ctx, self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ctx.neg
        return Poly._raw(self.ctx, self.nvars, {k: neg(c) for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "Poly":
        c = self.ctx.elem(c)
        if not c:
            return Poly.zero(self.ctx, self.nvars)
        mul = self.ctx.mul
        return Poly._raw(self.ctx, self.nvars, {k: mul(v, c) for k, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        self._compat(other)
        ctx = self.ctx
        mul, add = ctx.mul, ctx.add
        out = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                c = mul(c1, c2)
                if k in out:
                    out[k] = add(out[k], c)
                else:
                    out[k] = c
        return Poly._raw(ctx, self.nvars, {k: c for k, c in out.items() if c})

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e: int):
        out = Poly.const(self.ctx, self.nvars, 1)
        for _ in range(e):
            out = out * self
        return out

    # calculus -----------------------------------------------------------

    def restrict(self, i: int, a) -> "Poly":
        """``p|_{x_i = a}``."""
        return self.restrict_many({i: a})

    def restrict_many(self, assignment: Mapping[int, FieldElem]) -> "Poly":
        ctx = self.ctx
        subs = {}
        for i, a in assignment.items():
            _check_index(i, self.nvars)
            subs[i - 1] = ctx.elem(a)
        mul, add, power = ctx.mul, ctx.add, ctx.power
        out = {}
        for exps, c in self._terms.items():
            ex = list(exps)
            for idx, a in subs.items():
                e = ex[idx]
                if e:
                    c = mul(c, power(a, e))
                    ex[idx] = 0
            if not c:
                continue
            k = tuple(ex)
            out[k] = add(out[k], c) if k in out else c
        return Poly._raw(ctx, self.nvars, {k: c for k, c in out.items() if c})

    def partial_derivative(self, i: int) -> "Poly":
        _check_index(i, self.nvars)
        ctx = self.ctx
        idx = i - 1
        out = {}
        for exps, c in self._terms.items():
            e = exps[idx]
            if not e:
                continue
            c = ctx.mul(c, ctx.elem(e))
            if not c:
                continue
            k = exps[:idx] + (e - 1,) + exps[idx + 1 :]
            out[k] = c
        return Poly._raw(ctx, self.nvars, out)

    derivative = partial_derivative

    def commutator(self, i: int, j: int) -> "Poly":
        """``p|00 * p|11 - p|01 * p|10`` over the pair ``(x_i, x_j)``."""
        self.require_multilinear("commutator")
        if i == j:
            raise ValueError("commutator needs two distinct variables")
        r = self.restrict_many
        return r({i: 0, j: 0}) * r({i: 1, j: 1}) - r({i: 0, j: 1}) * r({i: 1, j: 0})

    def eval_at(self, point: Sequence[FieldElem]) -> FieldElem:
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.nvars}")
        ctx = self.ctx
        pt = [ctx.elem(x) for x in point]
        mul, add, power = ctx.mul, ctx.add, ctx.power
        total = ctx.zero
        for exps, c in self._terms.items():
            for x, e in zip(pt, exps):
                if e:
                    c = mul(c, power(x, e) if e > 1 else x)
            total = add(total, c)
        return total

    # relabelling --------------------------------------------------------

    def relabel(self, mapping: Mapping[int, int], nvars: int | None = None) -> "Poly":
        """Rename ``x_i`` to ``x_mapping[i]``; unmapped variables keep their index."""
        n = self.nvars if nvars is None else nvars
        out = {}
        for exps, c in self._terms.items():
            ex = [0] * n
            for idx, e in enumerate(exps):
                if e:
                    tgt = mapping.get(idx + 1, idx + 1)
                    _check_index(tgt, n)
                    ex[tgt - 1] += e
            out[tuple(ex)] = c
        if len(out) != len(self._terms):
            raise ValueError("relabelling is not injective on the support")
        return Poly._raw(self.ctx, n, out)

    def embed(self, nvars: int) -> "Poly":
        """Same polynomial viewed with a different number of ambient variables."""
        if nvars >= self.nvars:
            pad = (0,) * (nvars - self.nvars)
            return Poly._raw(self.ctx, nvars, {k + pad: c for k, c in self._terms.items()})
        if any(any(k[nvars:]) for k in self._terms):
            raise ValueError(f"polynomial uses variables beyond x{nvars}")
        return Poly._raw(self.ctx, nvars, {k[:nvars]: c for k, c in self._terms.items()})

    # display ------------------------------------------------------------

    def sorted_terms(self):
        """Terms in graded lexicographic order, highest degree first."""
        return sorted(self._terms.items(), key=lambda kv: (-sum(kv[0]), tuple(-e for e in kv[0])))

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        ctx = self.ctx
        parts = []
        for exps, c in self.sorted_terms():
            factors = []
            for idx, e in enumerate(exps):
                if e == 1:
                    factors.append(f"x{idx + 1}")
                elif e > 1:
                    factors.append(f"x{idx + 1}^{e}")
            neg = ctx.kind == "q" and c < 0
            mag = -c if neg else c
            if factors and mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([ctx.fmt(mag)] + factors)
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(parts)


def _check_index(i, nvars):
    if not 1 <= i <= nvars:
        raise IndexError(f"variable x{i} outside x1..x{nvars}")


# families ---------------------------------------------------------------


def gen_symmetric(n: int, k: int, ctx: FieldCtx) -> Poly:
    """Elementary symmetric polynomial of degree ``k`` in ``x1..xn``."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    terms = {}
    for subset in combinations(range(n), k):
        exps = [0] * n
        for i in subset:
            exps[i] = 1
        terms[tuple(exps)] = ctx.one
    return Poly._raw(ctx, n, terms)


def gen_M(n: int, alpha, beta, ctx: FieldCtx) -> Poly:
    """``alpha * S_n^n + beta * S_n^{n-1}``."""
    return gen_symmetric(n, n, ctx).scale(alpha) + gen_symmetric(n, n - 1, ctx).scale(beta)


F_PAIRINGS = (((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3)))


def gen_f(alpha, beta, gamma, ctx: FieldCtx) -> Poly:
    """The 4-variate family weighting the three perfect matchings of S_4^2."""
    coeffs = {}
    for weight, pairs in zip((alpha, beta, gamma), F_PAIRINGS):
        for pair in pairs:
            coeffs[pair] = weight
    return Poly.from_subsets(ctx, 4, coeffs)


def sym4_combination(a: Sequence[FieldElem], ctx: FieldCtx) -> Poly:
    """``sum(a[i] * S_4^i for i in 0..4)``."""
    out = Poly.zero(ctx, 4)
    for i, ai in enumerate(a):
        out = out + gen_symmetric(4, i, ctx).scale(ai)
    return out


def linear_form(ctx: FieldCtx, nvars: int, coeffs: Mapping[int, FieldElem], const=0) -> Poly:
    """``const + sum(c * x_i)`` from ``{i: c}``."""
    out = {(0,) * nvars: const}
    for i, c in coeffs.items():
        exps = [0] * nvars
        exps[i - 1] = 1
        out[tuple(exps)] = c
    return Poly(ctx, nvars, out)
