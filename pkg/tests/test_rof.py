from fractions import Fraction

import pytest

from helpers import poly_to_sympy, rand_multiplicative_rof, rof_to_sympy, seeded
from rofsum.errors import NotMultiplicative, NotReadOnce, TooManyVariables
from rofsum.mpoly import Poly
from rofsum.numfield import FieldCtx, Q
from rofsum.rof import (
    ADD,
    MUL,
    Leaf,
    Node,
    expand,
    is_multiplicative,
    lemma1_witness,
    rof_from_bivariate,
    rof_from_json,
    rof_linear,
    rof_to_json,
    validate_read_once,
)


def test_leaf_and_node_semantics():
    t = Node(MUL, Fraction(2), Fraction(1), Leaf(1, Fraction(1), Fraction(3)), Leaf(2, Fraction(1), Fraction(2)))
    assert expand(t, Q) == Poly.from_subsets(Q, 2, {(1, 2): 2, (1,): 4, (2,): 6, (): 13})


def test_repeated_variable_rejected():
    t = Node(ADD, Fraction(1), Fraction(0), Leaf(1, Fraction(1), Fraction(0)), Leaf(1, Fraction(2), Fraction(0)))
    check = validate_read_once(t)
    assert not check and check.var == 1
    with pytest.raises(NotReadOnce):
        expand(t, Q)


def test_bivariate_round_trip(ctx):
    rng = seeded(11)
    from helpers import rand_scalar

    for _ in range(200):
        coeffs = {s: rand_scalar(rng, ctx) for s in [(), (1,), (3,), (1, 3)]}
        p = Poly.from_subsets(ctx, 3, coeffs)
        t = rof_from_bivariate(p)
        assert validate_read_once(t)
        assert expand(t, ctx, 3) == p


def test_bivariate_rejects_three_variables():
    with pytest.raises(TooManyVariables):
        rof_from_bivariate(Poly.from_subsets(Q, 3, {(1,): 1, (2,): 1, (3,): 1}))


def test_linear_chain():
    p = Poly.from_subsets(Q, 4, {(): 5, (1,): 1, (2,): -2, (4,): 3})
    assert expand(rof_linear(p), Q, 4) == p


def test_json_round_trip(ctx):
    rng = seeded(5)
    for _ in range(30):
        t = rand_multiplicative_rof(rng, ctx, [1, 2, 3, 4])
        assert rof_from_json(rof_to_json(t, ctx), ctx) == t


def test_expand_agrees_with_sympy():
    rng = seeded(6)
    for _ in range(50):
        t = rand_multiplicative_rof(rng, Q, [1, 2, 3, 4, 5])
        assert poly_to_sympy(expand(t, Q)) == __import__("sympy").expand(rof_to_sympy(t, Q))


def test_derivative_witness_requires_multiplicative():
    t = Node(ADD, Fraction(1), Fraction(0), Leaf(1, Fraction(1), Fraction(0)), Leaf(2, Fraction(1), Fraction(0)))
    assert not is_multiplicative(t)
    with pytest.raises(NotMultiplicative):
        lemma1_witness(t, 1, Q)


@pytest.mark.parametrize("ctx", [Q, FieldCtx.prime(5)], ids=["q", "fp5"])
def test_derivative_witness_kills_derivative(ctx):
    rng = seeded(7)
    for _ in range(200):
        vs = rng.sample(range(1, 7), rng.randint(2, 6))
        t = rand_multiplicative_rof(rng, ctx, vs)
        g = expand(t, ctx, 6)
        for i in g.variables():
            w = lemma1_witness(t, i, ctx)
            assert w.j != i and w.j in g.variables()
            assert g.partial_derivative(w.j).restrict(i, w.gamma).is_zero()
