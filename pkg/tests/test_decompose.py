import json
from fractions import Fraction
from itertools import product

import pytest

from helpers import rand_multilinear, rand_scalar, seeded, sum_matches
from rofsum.decompose import (
    Decomposition,
    decompose_M,
    decompose_f,
    decompose_generic,
    decompose_sym4,
    generic_bound,
    match_M,
    match_f_family,
    match_sym4,
    sym4_row,
    verify_decomposition,
)
from rofsum.errors import NotExpressible, NotMultilinear, RootNotRepresentable
from rofsum.mpoly import Poly, gen_M, gen_f, sym4_combination
from rofsum.numfield import FieldCtx, Q
from rofsum.parsing import parse_poly
from rofsum.rof import Leaf

R = FieldCtx.rationals(reals=True)


@pytest.mark.parametrize("n", range(1, 9))
def test_generic_bound_and_independent_check(ctx, n):
    rng = seeded(n)
    for _ in range(5):
        p = rand_multilinear(rng, ctx, n)
        d = decompose_generic(p)
        assert d.verified and len(d) <= generic_bound(n)
        if n <= 6:
            assert sum_matches(d.summands, p)


def test_generic_rejects_non_multilinear():
    with pytest.raises(NotMultilinear):
        decompose_generic(Poly(Q, 2, {(2, 0): 1}))


def test_generic_small_counts():
    assert len(decompose_generic(parse_poly("3*x1 + 1"))) == 1
    assert len(decompose_generic(parse_poly("x1*x2*x3 + x1 + x2*x3"))) <= 2


@pytest.mark.parametrize("n", range(1, 11))
def test_M_family(ctx, n):
    rng = seeded(100 + n)
    for _ in range(5):
        A, B = rand_scalar(rng, ctx), rand_scalar(rng, ctx)
        d = decompose_M(n, A, B, ctx)
        assert d.verified and len(d) <= -(-n // 2)
        assert d.target == gen_M(n, A, B, ctx)


def test_M_family_independent_check():
    for n in (3, 4, 5, 6):
        d = decompose_M(n, Fraction(2), Fraction(-3), Q)
        assert sum_matches(d.summands, d.target)


@pytest.mark.parametrize(
    "a, row",
    [
        ((1, 2, 0, 0, 3), 1),
        ((1, 2, 0, 5, 3), 2),
        ((1, 2, 2, 4, 8), 3),
        ((1, 2, 2, 4, 7), 4),
    ],
)
def test_sym4_rows(a, row):
    assert sym4_row([Fraction(x) for x in a], Q) == row
    d = decompose_sym4(a, Q)
    assert d.verified and len(d) == 2 and d.notes["row"] == row
    assert sum_matches(d.summands, sym4_combination(a, Q))


def test_sym4_hand_computed_constants():
    # row 2 needs c = a0 + a1^2 a4 / a3^2, row 3 needs c = (a2 a0 - a1^2) / a2
    assert decompose_sym4((1, 2, 0, 5, 3), Q).notes["c"] == str(Fraction(1) + Fraction(4 * 3, 25))
    assert decompose_sym4((1, 2, 2, 4, 8), Q).notes["c"] == str(Fraction(2 * 1 - 4, 2))


def test_sym4_over_small_fields():
    for p in (2, 3, 5):
        ctx = FieldCtx.prime(p)
        for a in product(range(p), repeat=5):
            assert len(decompose_sym4(a, ctx)) <= 2


@pytest.mark.parametrize(
    "weights, case",
    [((2, 2, 3), "C2"), ((2, -2, 3), "C2"), ((1, 2, 3), "C3"), ((0, 4, 5), "C1"), ((3, 2, 2), "C2"), ((2, 3, 2), "C2")],
)
def test_f_family_constructions(weights, case):
    d = decompose_f(*weights, Q)
    assert d.verified and len(d) <= 2 and d.notes["case"] == case
    assert sum_matches(d.summands, gen_f(*weights, Q))


def test_f_family_example_values():
    d = decompose_f(1, 2, 3, Q)
    assert (d.notes["delta"], d.notes["mu"]) == ("-1", "-1")


def test_f_family_not_expressible_carries_report():
    with pytest.raises(NotExpressible) as exc:
        decompose_f(2, 4, 5, Q)
    assert exc.value.report.all_c
    assert exc.value.report.d_values == (Fraction(-231),) * 3


def test_f_family_irrational_root_under_reals():
    # (1, 2, 4): D = 7 * (-5) * (-1) * 3 = 105 > 0, not a rational square
    assert Q.sqrt(Fraction(105)) is None
    with pytest.raises(NotExpressible):
        decompose_f(1, 2, 4, Q)
    with pytest.raises(RootNotRepresentable):
        decompose_f(1, 2, 4, R)


def test_shape_recognition():
    assert match_f_family(gen_f(1, 2, 3, Q)) == (1, 2, 3)
    assert match_f_family(gen_M(4, 1, 1, Q)) is None
    assert match_M(gen_M(5, 2, 3, Q)) == (5, 2, 3)
    assert match_sym4(sym4_combination((1, 2, 3, 4, 5), Q)) == (1, 2, 3, 4, 5)
    assert match_sym4(gen_f(1, 2, 3, Q)) is None


def test_json_round_trip_and_tamper_detection():
    d = decompose_f(1, 2, 3, Q)
    doc = json.loads(json.dumps(d.to_json()))
    again = Decomposition.from_json(doc, parse_poly)
    assert verify_decomposition(again)
    doc["summands"][0]["a"] = "7"
    assert not verify_decomposition(Decomposition.from_json(doc, parse_poly))


def test_verify_rejects_wrong_sum():
    target = parse_poly("x1*x2")
    d = Decomposition(target, [Leaf(1, Fraction(1), Fraction(0))], "Generic")
    assert not verify_decomposition(d)
