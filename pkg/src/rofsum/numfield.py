"""Exact field contexts: the rationals and prime fields F_p.

Field elements are plain Python values so that polynomial kernels stay cheap:
``fractions.Fraction`` over the rationals and an ``int`` residue in
``range(p)`` over F_p.  A :class:`FieldCtx` owns the arithmetic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Iterator, NamedTuple, Optional, Union

from sympy import isprime
from sympy.ntheory import sqrt_mod

from .errors import DivisionByZero, FieldMismatch

FieldElem = Union[Fraction, int]

# square roots mod p are looked up in an exhaustive table up to this size
SQRT_TABLE_LIMIT = 10_000

_SCALAR_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


class IrrationalRoot(NamedTuple):
    """Existence-only answer for a positive non-square under real semantics."""

    square: Fraction


@lru_cache(maxsize=None)
def _root_table(p: int) -> dict:
    table = {}
    for r in range(p):
        table.setdefault(r * r % p, r)
    return table


@dataclass(frozen=True)
class FieldCtx:
    """A tagged exact field.

    ``kind`` is ``"q"`` (rationals) or ``"fp"`` (prime field of order ``p``).
    ``reals`` only changes how squareness is decided over the rationals.
    """

    kind: str
    p: Optional[int] = None
    reals: bool = False

    def __post_init__(self):
        if self.kind == "q":
            if self.p is not None:
                raise ValueError("rational field takes no modulus")
        elif self.kind == "fp":
            if self.p is None or self.p < 2 or not isprime(self.p):
                raise ValueError(f"F_p needs a prime modulus, got {self.p!r}")
            if self.reals:
                raise ValueError("reals semantics only applies to the rationals")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    # construction -------------------------------------------------------

    @classmethod
    def rationals(cls, reals: bool = False) -> "FieldCtx":
        return cls("q", None, reals)

    @classmethod
    def prime(cls, p: int) -> "FieldCtx":
        return cls("fp", int(p))

    @classmethod
    def parse(cls, selector: str) -> "FieldCtx":
        """Parse ``q``, ``q-reals`` or ``fp:<p>``."""
        s = selector.strip().lower()
        if s == "q":
            return cls.rationals()
        if s in ("q-reals", "r", "reals"):
            return cls.rationals(reals=True)
        if s.startswith("fp:"):
            try:
                p = int(s[3:])
            except ValueError:
                raise ValueError(f"bad field selector {selector!r}") from None
            return cls.prime(p)
        raise ValueError(f"bad field selector {selector!r}")

    @property
    def selector(self) -> str:
        if self.kind == "fp":
            return f"fp:{self.p}"
        return "q-reals" if self.reals else "q"

    @property
    def is_finite(self) -> bool:
        return self.kind == "fp"

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "fp" else 0

    def __str__(self):
        return self.selector

    # elements -----------------------------------------------------------

    @property
    def zero(self) -> FieldElem:
        return 0 if self.kind == "fp" else Fraction(0)

    @property
    def one(self) -> FieldElem:
        return 1 if self.kind == "fp" else Fraction(1)

    def elem(self, x) -> FieldElem:
        """Coerce an int, Fraction or scalar string into canonical form."""
        if isinstance(x, str):
            return self.parse_scalar(x)
        if self.kind == "fp":
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise DivisionByZero(f"{x} has no image in F_{self.p}")
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return int(x) % self.p
        return Fraction(x)

    def check(self, x) -> FieldElem:
        """Reject values that are not canonical elements of this field."""
        if self.kind == "fp":
            if type(x) is int and 0 <= x < self.p:
                return x
        elif isinstance(x, Fraction):
            return x
        raise FieldMismatch(f"{x!r} is not a canonical element of {self}")

    def elements(self) -> Iterator[FieldElem]:
        if self.kind != "fp":
            raise ValueError("only finite fields can be enumerated")
        return iter(range(self.p))

    def parse_scalar(self, text: str) -> FieldElem:
        m = _SCALAR_RE.match(text)
        if not m:
            raise ValueError(f"bad scalar {text!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise DivisionByZero(f"zero denominator in {text!r}")
        return self.elem(Fraction(num, den))

    def fmt(self, x: FieldElem) -> str:
        return str(x)

    # arithmetic ---------------------------------------------------------

    def add(self, a, b):
        if self.kind == "fp":
            return (a + b) % self.p
        return a + b

    def sub(self, a, b):
        if self.kind == "fp":
            return (a - b) % self.p
        return a - b

    def neg(self, a):
        if self.kind == "fp":
            return -a % self.p
        return -a

    def mul(self, a, b):
        if self.kind == "fp":
            return a * b % self.p
        return a * b

    def inv(self, a):
        if not a:
            raise DivisionByZero("inverse of zero")
        if self.kind == "fp":
            return pow(a, -1, self.p)
        return 1 / a

    def div(self, a, b):
        if not b:
            raise DivisionByZero(f"{a} / 0")
        if self.kind == "fp":
            return a * pow(b, -1, self.p) % self.p
        return a / b

    def power(self, a, e: int):
        if self.kind == "fp":
            return pow(a, e, self.p)
        return a**e

    # square roots -------------------------------------------------------

    def sqrt(self, d) -> Union[FieldElem, IrrationalRoot, None]:
        """Canonical square root of ``d``, or ``None`` when there is none.

        Over F_p the smaller of the two residues is returned.  Over the
        rationals the non-negative root is returned; with ``reals`` set, a
        positive non-square yields an :class:`IrrationalRoot` marker.
        """
        if self.kind == "fp":
            if self.p <= SQRT_TABLE_LIMIT:
                return _root_table(self.p).get(d % self.p)
            roots = sqrt_mod(d % self.p, self.p, all_roots=True)
            return min(roots) if roots else None
        d = Fraction(d)
        if d < 0:
            return None
        u, v = d.numerator, d.denominator
        ru, rv = isqrt(u), isqrt(v)
        if ru * ru == u and rv * rv == v:
            return Fraction(ru, rv)
        return IrrationalRoot(d) if self.reals else None

    def is_square(self, d) -> bool:
        return self.sqrt(d) is not None


_OPS = {
    "add": FieldCtx.add,
    "sub": FieldCtx.sub,
    "mul": FieldCtx.mul,
    "div": FieldCtx.div,
}


def field_arith(ctx: FieldCtx, a, b, op: str) -> FieldElem:
    """Exact ``a op b`` in ``ctx``; operands must already be canonical."""
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    return fn(ctx, ctx.check(a), ctx.check(b))


def sqrt_in_field(ctx: FieldCtx, d):
    return ctx.sqrt(ctx.check(d))


Q = FieldCtx.rationals()
