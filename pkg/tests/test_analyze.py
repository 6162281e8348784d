from fractions import Fraction
from itertools import product

import pytest
import sympy

from helpers import X, poly_to_sympy, rand_affine, rand_multilinear, rand_scalar, seeded
from rofsum.analyze import (
    EXPRESSIBLE,
    INCONCLUSIVE,
    NOT_ROP,
    REFUTED,
    affine_divides,
    affine_factors,
    c1prime_check,
    c2prime_check,
    c3prime_reconstruct,
    condition_report,
    d_values,
    nullspace,
    prop2_refute_3var,
    quadratic_roots,
    refute_sum2,
    thm7_conditions,
)
from rofsum.errors import WrongArity
from rofsum.mpoly import Poly, gen_f, gen_symmetric
from rofsum.numfield import FieldCtx, Q
from rofsum.parsing import parse_poly

F3 = FieldCtx.prime(3)
F7 = FieldCtx.prime(7)
R = FieldCtx.rationals(reals=True)


def test_weight_conditions_for_245():
    rep = thm7_conditions(2, 4, 5, Q)
    assert rep.c1 and rep.c2 and rep.c3
    assert rep.d_values == (Fraction(-231),) * 3
    assert rep.c3_root is None


def test_condition_failures():
    assert not thm7_conditions(2, 2, 3, Q).c2
    assert not thm7_conditions(0, 1, 2, Q).c1
    rep = thm7_conditions(1, 2, 3, Q)
    assert rep.c1 and rep.c2 and not rep.c3
    assert rep.d_values[0] == 0 and rep.c3_root == 0


def test_d_values_factor_symbolically():
    a, b, g = sympy.symbols("a b g")
    d1 = (a**2 - b**2 - g**2) ** 2 - (2 * b * g) ** 2
    d2 = (-(a**2) + b**2 - g**2) ** 2 - (2 * a * g) ** 2
    d3 = (-(a**2) - b**2 + g**2) ** 2 - (2 * a * b) ** 2
    prod = (a + b + g) * (a - b - g) * (a - b + g) * (a + b - g)
    for d in (d1, d2, d3):
        assert sympy.expand(d - prod) == 0


def test_d_values_over_fp():
    for a, b, g in product(range(5), repeat=3):
        ds = d_values(a, b, g, FieldCtx.prime(5))
        assert len(set(ds)) == 1


def test_c1prime_none_on_f_family():
    for w in [(2, 4, 5), (1, 1, 1), (1, 2, 3)]:
        assert c1prime_check(gen_f(*w, Q)) is None


def test_c1prime_witness_linearizes():
    g = parse_poly("x1*x2*x3 + x3*x4", Q, 4)
    w = c1prime_check(g)
    assert w is not None
    assert g.restrict_many({w.i: w.A, w.j: w.B}).degree() <= 1


def test_c1prime_f3_brute_force_matches_closed_form():
    # S_4^2 over F_3: every pair leaves x_k x_l with coefficient 1, nothing can cancel it
    g = gen_symmetric(4, 2, F3)
    assert c1prime_check(g) is None
    g = gen_symmetric(4, 2, F3) + gen_symmetric(4, 3, F3)
    w = c1prime_check(g)
    assert w is not None and g.restrict_many({w.i: w.A, w.j: w.B}).degree() <= 1
    # closed form over Q: 1 + A + B = 0 has a root as well
    assert c1prime_check(gen_symmetric(4, 2, Q) + gen_symmetric(4, 3, Q)) is not None


def test_c1prime_agrees_across_fields():
    rng = seeded(21)
    for _ in range(200):
        g = rand_multilinear(rng, F7, 4, density=0.5)
        brute = c1prime_check(g) is not None
        # over F_7 the equation c0 + c1 A + c2 B + c3 A B = 0 is solvable unless c1=c2=c3=0 != c0
        exists = False
        for i, j in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]:
            k, l = (v for v in range(1, 5) if v not in (i, j))
            c = [g.coeff((k, l)), g.coeff((i, k, l)), g.coeff((j, k, l)), g.coeff((i, j, k, l))]
            if any(c[1:]) or not c[0]:
                exists = True
        assert brute == exists


def test_c2prime_examples():
    g = parse_poly("x1*x2 + x1 + x2 + 1 + x3*x4", Q, 4)
    w = c2prime_check(g)
    assert (w.i, w.j) == (1, 2)
    assert c2prime_check(gen_f(2, 4, 5, Q)) is None
    assert c2prime_check(parse_poly("x1 + 2*x2 + 3*x3 + x4", Q, 4)) is not None


def test_c2prime_witness_is_a_dependence():
    g = parse_poly("x1*x2 + x1 + x2 + 1 + x3*x4", Q, 4)
    w = c2prime_check(g)
    combo = (
        Poly.var(Q, 4, w.i, w.coefficients[0])
        + Poly.var(Q, 4, w.j, w.coefficients[1])
        + g.partial_derivative(w.i).scale(w.coefficients[2])
        + g.partial_derivative(w.j).scale(w.coefficients[3])
        + Poly.const(Q, 4, w.coefficients[4])
    )
    assert combo.is_zero()


def test_nullspace():
    rows = [[Fraction(1), Fraction(2), Fraction(3)], [Fraction(2), Fraction(4), Fraction(6)]]
    basis = nullspace(rows, 3, Q)
    assert len(basis) == 2
    for v in basis:
        assert all(sum(r[k] * v[k] for k in range(3)) == 0 for r in rows)


def test_quadratic_roots():
    assert quadratic_roots(Fraction(1), Fraction(-3), Fraction(2), Q) == [1, 2]
    assert quadratic_roots(Fraction(1), Fraction(0), Fraction(1), Q) == []
    assert quadratic_roots(1, 0, 5, F7) == [3, 4]


def test_affine_factors_of_commutator():
    # gen_f(1, 2, 3): Delta_12 = -6 (x3 + x4)^2
    delta = gen_f(1, 2, 3, Q).commutator(1, 2)
    assert affine_factors(delta, 3, 4) == [parse_poly("x3 + x4", Q, 4)]
    # gen_f(2, 4, 5): discriminant 37^2 - 4*400 = -231
    assert affine_factors(gen_f(2, 4, 5, Q).commutator(1, 2), 3, 4) == []


def test_c3prime_on_weights_123():
    w = c3prime_reconstruct(gen_f(1, 2, 3, Q))
    assert w is not None and w.expand() == gen_f(1, 2, 3, Q)
    assert c3prime_reconstruct(gen_f(2, 4, 5, Q)) is None


@pytest.mark.parametrize("ctx", [Q, F7, F3], ids=["q", "fp7", "fp3"])
def test_c3prime_round_trip(ctx):
    rng = seeded(31)
    for _ in range(150):
        g = (
            rand_affine(rng, ctx, 4, 1, 2) * rand_affine(rng, ctx, 4, 3, 4)
            + rand_affine(rng, ctx, 4, 1, 3) * rand_affine(rng, ctx, 4, 2, 4)
        )
        w = c3prime_reconstruct(g)
        assert w is not None
        assert w.expand() == g
        if not ctx.is_finite:
            assert poly_to_sympy(w.expand()) == poly_to_sympy(g)


def test_commutator_divisible_by_second_form():
    rng = seeded(41)
    for _ in range(200):
        l1, l2 = rand_affine(rng, Q, 4, 1, 2), rand_affine(rng, Q, 4, 3, 4)
        l3, l4 = rand_affine(rng, Q, 4, 1, 3), rand_affine(rng, Q, 4, 2, 4)
        g = l1 * l2 + l3 * l4
        assert affine_divides(l2, g.commutator(1, 2))
        # and sympy agrees that the remainder vanishes
        _, r = sympy.div(poly_to_sympy(g.commutator(1, 2)), poly_to_sympy(l2), X[2], X[3])
        assert sympy.expand(r) == 0


def test_structural_conditions_fail_on_refuted_weights():
    rng = seeded(51)
    seen = 0
    while seen < 60:
        w = [rand_scalar(rng, Q, True) for _ in range(3)]
        if not thm7_conditions(*w, Q).all_c:
            continue
        seen += 1
        g = gen_f(*w, Q)
        assert c1prime_check(g) is None and c2prime_check(g) is None and c3prime_reconstruct(g) is None


def test_refute_verdicts():
    assert refute_sum2(gen_f(2, 4, 5, Q)).verdict == REFUTED
    assert refute_sum2(gen_f(2, 4, 5, R)).verdict == REFUTED
    res = refute_sum2(gen_f(1, 2, 3, Q))
    assert res.verdict == EXPRESSIBLE and res.certificate.verified
    res = refute_sum2(gen_f(1, 1, 1, Q))
    assert res.verdict == EXPRESSIBLE and res.certificate.verified


def test_refute_inconclusive_under_reals():
    # gen_f(1, 2, 4) needs sqrt(105): refuted over Q, open over the reals
    assert refute_sum2(gen_f(1, 2, 4, Q)).verdict == REFUTED
    assert refute_sum2(gen_f(1, 2, 4, R)).verdict == INCONCLUSIVE


def test_refute_wrong_arity():
    with pytest.raises(WrongArity):
        refute_sum2(parse_poly("x1*x2 + x3*x5"))


def test_three_variable_refuter():
    assert prop2_refute_3var(parse_poly("x1*x2 + x2*x3 + x1*x3")).verdict == NOT_ROP
    assert prop2_refute_3var(parse_poly("x1*x2*x3")).verdict == INCONCLUSIVE
    assert prop2_refute_3var(parse_poly("x1*x3 + x2*x3")).verdict == INCONCLUSIVE
    with pytest.raises(WrongArity):
        prop2_refute_3var(parse_poly("x1*x2"))


def test_three_variable_refuter_agrees_with_oracle(rs2_4):
    # over F_2 every NotROP verdict must be confirmed by exhaustive search
    F2 = rs2_4.ctx
    for code in range(256):
        coeffs = {s: (code >> k) & 1 for k, s in enumerate([(), (1,), (2,), (3,), (1, 2), (1, 3), (2, 3), (1, 2, 3)])}
        g = Poly.from_subsets(F2, 3, coeffs)
        if len(g.variables()) != 3:
            continue
        if prop2_refute_3var(g).verdict == NOT_ROP:
            assert not rs2_4.is_rop(g.embed(4))


def test_condition_report_json():
    doc = condition_report(gen_f(1, 2, 3, Q)).to_json()
    assert doc["c3"] is False and doc["c3_root"] == "0"
    assert doc["c3p"]["holds"] and doc["c3p"]["witness"]["l2"]
