from fractions import Fraction

import pytest

from rofsum.errors import DivisionByZero, FieldMismatch
from rofsum.numfield import FieldCtx, IrrationalRoot, Q, field_arith, sqrt_in_field

F7 = FieldCtx.prime(7)
R = FieldCtx.rationals(reals=True)


def test_rational_arithmetic():
    assert field_arith(Q, Fraction(1, 2), Fraction(1, 3), "add") == Fraction(5, 6)
    assert field_arith(Q, Fraction(3, 4), Fraction(1, 2), "div") == Fraction(3, 2)


def test_prime_arithmetic():
    assert field_arith(F7, 3, 5, "mul") == 1
    assert field_arith(F7, 2, 5, "sub") == 4
    assert field_arith(F7, 1, 3, "div") == 5


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        field_arith(Q, Fraction(1), Fraction(0), "div")
    with pytest.raises(DivisionByZero):
        F7.inv(0)


def test_mismatched_operands_rejected():
    with pytest.raises(FieldMismatch):
        field_arith(F7, 9, 1, "add")
    with pytest.raises(FieldMismatch):
        field_arith(Q, 1, Fraction(1), "add")


def test_bad_modulus():
    with pytest.raises(ValueError):
        FieldCtx.prime(9)


def test_selectors_round_trip():
    for sel in ("q", "q-reals", "fp:2", "fp:101"):
        assert FieldCtx.parse(sel).selector == sel


def test_scalar_text():
    assert Q.parse_scalar("-5/2") == Fraction(-5, 2)
    assert F7.parse_scalar("1/2") == 4
    assert F7.parse_scalar("-1") == 6


@pytest.mark.parametrize(
    "ctx, d, root",
    [
        (Q, Fraction(9, 4), Fraction(3, 2)),
        (Q, Fraction(-231), None),
        (Q, Fraction(2), None),
        (F7, 2, 3),
        (F7, 3, None),
        (F7, 0, 0),
    ],
)
def test_sqrt(ctx, d, root):
    assert sqrt_in_field(ctx, d) == root


def test_sqrt_reals_marks_irrational_roots():
    assert sqrt_in_field(R, Fraction(2)) == IrrationalRoot(Fraction(2))
    assert sqrt_in_field(R, Fraction(-231)) is None
    assert sqrt_in_field(R, Fraction(16)) == 4


def test_sqrt_large_prime_uses_smaller_root():
    ctx = FieldCtx.prime(1_000_003)
    r = ctx.sqrt(ctx.elem(4))
    assert r == 2
    for d in range(2, 40):
        r = ctx.sqrt(d)
        if r is not None:
            assert r * r % ctx.p == d and r <= ctx.p - r


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_squares_exhaustive(p):
    ctx = FieldCtx.prime(p)
    squares = {x * x % p for x in range(p)}
    for d in range(p):
        assert ctx.is_square(d) == (d in squares)
