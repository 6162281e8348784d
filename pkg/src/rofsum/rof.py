"""Read-once formulas in normal form.

Every node carries an affine pair ``(a, b)``: a leaf on ``x_i`` computes
``a*x_i + b`` and an internal node computes ``a*(left op right) + b``.
Trees are immutable; scalars are plain field values, so most functions take
the :class:`~rofsum.numfield.FieldCtx` they live in.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional, Union

from .errors import (
    DegenerateLeaf,
    NotMultiplicative,
    NotReadOnce,
    TooManyVariables,
)
from .mpoly import Poly
from .numfield import FieldCtx, FieldElem

ADD = "add"
MUL = "mul"


@dataclass(frozen=True)
class Leaf:
    var: int
    a: FieldElem
    b: FieldElem


@dataclass(frozen=True)
class Node:
    op: str
    a: FieldElem
    b: FieldElem
    left: "Rof"
    right: "Rof"

    def __post_init__(self):
        if self.op not in (ADD, MUL):
            raise ValueError(f"unknown gate {self.op!r}")


Rof = Union[Leaf, Node]


class ReadOnceCheck(NamedTuple):
    ok: bool
    var: Optional[int] = None

    def __bool__(self):
        return self.ok


# traversal ------------------------------------------------------------------


def leaves(t: Rof) -> Iterator[Leaf]:
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Leaf):
            yield node
        else:
            stack.append(node.right)
            stack.append(node.left)


def leaf_labels(t: Rof) -> list:
    return [lf.var for lf in leaves(t)]


def max_var(t: Rof) -> int:
    return max(leaf_labels(t))


def size(t: Rof) -> int:
    if isinstance(t, Leaf):
        return 1
    return 1 + size(t.left) + size(t.right)


def validate_read_once(t: Rof) -> ReadOnceCheck:
    seen = set()
    for v in leaf_labels(t):
        if v in seen:
            return ReadOnceCheck(False, v)
        seen.add(v)
    return ReadOnceCheck(True)


def is_multiplicative(t: Rof) -> bool:
    if isinstance(t, Leaf):
        return True
    return t.op == MUL and is_multiplicative(t.left) and is_multiplicative(t.right)


# semantics ------------------------------------------------------------------


def expand(t: Rof, ctx: FieldCtx, nvars: Optional[int] = None) -> Poly:
    """The polynomial computed by ``t``."""
    check = validate_read_once(t)
    if not check:
        raise NotReadOnce(f"x{check.var} labels more than one leaf", check.var)
    n = max_var(t) if nvars is None else nvars
    if max_var(t) > n:
        raise ValueError(f"formula reads x{max_var(t)} but only {n} variables are in scope")
    return _expand(t, ctx, n)


def _expand(t, ctx, n):
    if isinstance(t, Leaf):
        return Poly.var(ctx, n, t.var, t.a) + t.b
    left = _expand(t.left, ctx, n)
    right = _expand(t.right, ctx, n)
    inner = left + right if t.op == ADD else left * right
    return inner.scale(t.a) + t.b


def effective_vars(t: Rof, ctx: FieldCtx) -> frozenset:
    """Variables the computed polynomial really depends on."""
    return expand(t, ctx).variables()


def constant_value(t: Rof, ctx: FieldCtx):
    """The value of ``t`` if it is syntactically constant, else ``None``."""
    if isinstance(t, Leaf):
        return t.b if not t.a else None
    if not t.a:
        return t.b
    lv = constant_value(t.left, ctx)
    rv = constant_value(t.right, ctx)
    if lv is None or rv is None:
        if t.op == MUL and (lv == 0 or rv == 0) and (lv is not None or rv is not None):
            return t.b
        return None
    inner = ctx.add(lv, rv) if t.op == ADD else ctx.mul(lv, rv)
    return ctx.add(ctx.mul(t.a, inner), t.b)


# builders -------------------------------------------------------------------


def leaf(var: int, ctx: FieldCtx, a=1, b=0) -> Leaf:
    return Leaf(var, ctx.elem(a), ctx.elem(b))


def const_rof(c, ctx: FieldCtx, var: int = 1) -> Leaf:
    """A constant as a zero-scale leaf."""
    return Leaf(var, ctx.zero, ctx.elem(c))


def affine(t: Rof, ctx: FieldCtx, scale=1, shift=0) -> Rof:
    """Formula for ``scale * t + shift`` obtained by rewriting the root pair."""
    s, c = ctx.elem(scale), ctx.elem(shift)
    a = ctx.mul(t.a, s)
    b = ctx.add(ctx.mul(t.b, s), c)
    if isinstance(t, Leaf):
        return Leaf(t.var, a, b)
    return Node(t.op, a, b, t.left, t.right)


def rof_mul(left: Rof, right: Rof, ctx: FieldCtx, a=1, b=0) -> Rof:
    """``a * (left * right) + b`` with constant operands folded away."""
    a, b = ctx.elem(a), ctx.elem(b)
    lv = constant_value(left, ctx)
    rv = constant_value(right, ctx)
    if lv is not None and rv is not None:
        return const_rof(ctx.add(ctx.mul(a, ctx.mul(lv, rv)), b), ctx, _some_var(left))
    if lv is not None:
        return affine(right, ctx, ctx.mul(a, lv), b)
    if rv is not None:
        return affine(left, ctx, ctx.mul(a, rv), b)
    return Node(MUL, a, b, left, right)


def rof_add(left: Rof, right: Rof, ctx: FieldCtx, a=1, b=0) -> Rof:
    """``a * (left + right) + b`` with constant operands folded away."""
    a, b = ctx.elem(a), ctx.elem(b)
    lv = constant_value(left, ctx)
    rv = constant_value(right, ctx)
    if lv is not None and rv is not None:
        return const_rof(ctx.add(ctx.mul(a, ctx.add(lv, rv)), b), ctx, _some_var(left))
    if lv is not None:
        return affine(right, ctx, a, ctx.add(ctx.mul(a, lv), b))
    if rv is not None:
        return affine(left, ctx, a, ctx.add(ctx.mul(a, rv), b))
    return Node(ADD, a, b, left, right)


def _some_var(t):
    return next(leaves(t)).var


def mul_chain(variables, ctx: FieldCtx, a=1, b=0) -> Rof:
    """``a * prod(x_i) + b`` as a left-leaning product; empty product is ``a + b``."""
    variables = list(variables)
    if not variables:
        return const_rof(ctx.add(ctx.elem(a), ctx.elem(b)), ctx)
    t: Rof = leaf(variables[0], ctx)
    for v in variables[1:]:
        t = Node(MUL, ctx.one, ctx.zero, t, leaf(v, ctx))
    return affine(t, ctx, a, b)


def relabel(t: Rof, mapping) -> Rof:
    if isinstance(t, Leaf):
        return Leaf(mapping.get(t.var, t.var), t.a, t.b)
    return Node(t.op, t.a, t.b, relabel(t.left, mapping), relabel(t.right, mapping))


def rof_from_bivariate(p: Poly) -> Rof:
    """A formula for any multilinear polynomial on at most two variables."""
    p.require_multilinear("rof_from_bivariate")
    ctx = p.ctx
    vs = sorted(p.variables())
    if len(vs) > 2:
        raise TooManyVariables(f"{p.to_text()} depends on {len(vs)} variables")
    d = p.constant_term()
    if not vs:
        return const_rof(d, ctx)
    if len(vs) == 1:
        (i,) = vs
        return Leaf(i, p.coeff([i]), d)
    i, j = vs
    a = p.coeff([i, j])
    b = p.coeff([i])
    c = p.coeff([j])
    if a:
        shift = ctx.sub(d, ctx.div(ctx.mul(b, c), a))
        return Node(MUL, a, shift, leaf(i, ctx, 1, ctx.div(c, a)), leaf(j, ctx, 1, ctx.div(b, a)))
    return Node(ADD, ctx.one, d, Leaf(i, b, ctx.zero), Leaf(j, c, ctx.zero))


def rof_linear(p: Poly) -> Rof:
    """Left-leaning sum for a polynomial of total degree at most one."""
    if p.degree() > 1:
        raise ValueError(f"{p.to_text()} is not affine")
    ctx = p.ctx
    d = p.constant_term()
    vs = sorted(p.variables())
    if not vs:
        return const_rof(d, ctx)
    if len(vs) == 1:
        return Leaf(vs[0], p.coeff(vs), d)
    t: Rof = Leaf(vs[0], p.coeff([vs[0]]), ctx.zero)
    for k, v in enumerate(vs[1:], start=2):
        shift = d if k == len(vs) else ctx.zero
        t = Node(ADD, ctx.one, shift, t, Leaf(v, p.coeff([v]), ctx.zero))
    return t


# derivative-kill witness ------------------------------------------------------


class DerivativeKill(NamedTuple):
    j: int
    gamma: FieldElem


def lemma1_witness(t: Rof, i: int, ctx: FieldCtx) -> DerivativeKill:
    """Find ``(j, gamma)`` with ``d/dx_j expand(t)`` vanishing at ``x_i = gamma``.

    Walks up from the leaf of ``x_i``.  While the sibling subtree is constant
    the ancestor is still an affine function of ``x_i``; at the first
    ancestor whose sibling reads some effective variable, ``gamma`` is the
    root of that affine function and ``j`` the smallest such variable.
    """
    if not is_multiplicative(t):
        raise NotMultiplicative("formula has an addition gate")
    g = expand(t, ctx)
    eff = g.variables()
    if i not in eff:
        raise ValueError(f"x{i} is not an effective variable")
    if len(eff) < 2:
        raise ValueError("need at least two effective variables")
    path = _path_to(t, i)
    lf = path[-1]
    if not lf.a:
        raise DegenerateLeaf(f"leaf of x{i} has zero scale")
    # current subtree computes A*x_i + B
    A, B = lf.a, lf.b
    n = g.nvars
    for parent, child in zip(reversed(path[:-1]), reversed(path[1:])):
        sib = parent.right if parent.left is child else parent.left
        ps = _expand(sib, ctx, n)
        sib_vars = ps.variables()
        if sib_vars:
            gamma = ctx.neg(ctx.div(B, A))
            return DerivativeKill(min(sib_vars), gamma)
        k = ps.constant_term()
        A = ctx.mul(parent.a, ctx.mul(A, k))
        B = ctx.add(ctx.mul(parent.a, ctx.mul(B, k)), parent.b)
        if not A:
            break
    raise DegenerateLeaf(f"no ancestor of x{i} multiplies it by another variable")


def _path_to(t, i):
    if isinstance(t, Leaf):
        return [t] if t.var == i else None
    for child in (t.left, t.right):
        sub = _path_to(child, i)
        if sub is not None:
            return [t] + sub
    return None


# serialization --------------------------------------------------------------


def rof_to_json(t: Rof, ctx: FieldCtx) -> dict:
    if isinstance(t, Leaf):
        return {"var": t.var, "a": ctx.fmt(t.a), "b": ctx.fmt(t.b)}
    return {
        "op": t.op,
        "a": ctx.fmt(t.a),
        "b": ctx.fmt(t.b),
        "left": rof_to_json(t.left, ctx),
        "right": rof_to_json(t.right, ctx),
    }


def rof_from_json(d: dict, ctx: FieldCtx) -> Rof:
    a = ctx.parse_scalar(str(d["a"]))
    b = ctx.parse_scalar(str(d["b"]))
    if "var" in d:
        return Leaf(int(d["var"]), a, b)
    return Node(d["op"], a, b, rof_from_json(d["left"], ctx), rof_from_json(d["right"], ctx))


def rof_to_text(t: Rof, ctx: FieldCtx) -> str:
    """Compact infix rendering, for diagnostics."""
    if isinstance(t, Leaf):
        if not t.a:
            return ctx.fmt(t.b)
        body = f"x{t.var}" if t.a == 1 else f"{ctx.fmt(t.a)}*x{t.var}"
        return body if not t.b else f"({body} + {ctx.fmt(t.b)})"
    sym = " + " if t.op == ADD else " * "
    inner = f"({rof_to_text(t.left, ctx)}{sym}{rof_to_text(t.right, ctx)})"
    if t.a != 1:
        inner = f"{ctx.fmt(t.a)}*{inner}"
    return inner if not t.b else f"({inner} + {ctx.fmt(t.b)})"
