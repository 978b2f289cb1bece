import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clusterdual.exact import LaurentPoly, SFRat
from clusterdual.seed import mutate_integer_matrix
from clusterdual.tropical import (
    PLExpr,
    TropPoint,
    pl_compose_hinged,
    pl_equal,
    pl_eval,
    trop_d_mutation_hinged,
    trop_mutate,
    trop_mutate_a,
    trop_mutate_d,
    trop_mutate_x,
    tropicalize,
)

half = Fraction(1, 2)

# diagonal 4 of a square, alternating signs to the four sides
SQUARE = [
    [0, 0, 0, 0, -1],
    [0, 0, 0, 0, 1],
    [0, 0, 0, 0, -1],
    [0, 0, 0, 0, 1],
    [1, -1, 1, -1, 0],
]


def test_a_square_diagonal():
    out = trop_mutate_a((half, 0, half, 0, half), 4, SQUARE)
    assert out[4] == half
    assert out[:4] == (half, 0, half, 0)
    assert trop_mutate_a((0,) * 5, 4, SQUARE) == (0,) * 5


def test_x_examples():
    eps = [[0, 1], [-1, 0]]
    assert trop_mutate_x((2, -1), 0, eps) == (-2, 1)
    assert trop_mutate_x((-3, 5), 0, eps) == (3, 5)


def test_d_rank_two():
    eps = [[0, 1], [-1, 0]]
    b, x = trop_mutate_d((1, 0), (2, 0), 0, eps)
    assert b == (-1, 0)
    assert x == (-2, 2)


def test_tropicalize_examples():
    u = LaurentPoly.var(1, 0)
    one = LaurentPoly.const(1, 1)
    e = tropicalize(one + u)
    assert pl_equal(e, PLExpr.maximum([(0, 0), (1, 0)], 1))
    mono = LaurentPoly(2, {(2, -1): 5})
    assert pl_equal(tropicalize(mono), PLExpr.linear([2, -1]))
    ratio = tropicalize(SFRat(one + u, u))
    assert pl_equal(ratio, PLExpr.maximum([(-1, 0), (0, 0)], 1))


def test_tropicalize_rejects_subtraction():
    u = LaurentPoly.var(1, 0)
    with pytest.raises(ValueError):
        tropicalize(LaurentPoly.const(1, 1) - u)


def test_pl_eval_examples():
    e = PLExpr.maximum([(0, 0), (1, 0)], 1)
    assert pl_eval(e, (-3,)) == 0
    assert pl_eval(PLExpr.linear([2, -1]), (1, 1)) == 1
    with pytest.raises(ValueError):
        pl_eval(e, (1, 2))


def test_tropicalization_is_the_log_limit():
    # F = (1 + x + x y^2) / (1 + y) at u = (1, -2) scaled by C
    x, y = LaurentPoly.var(2, 0), LaurentPoly.var(2, 1)
    one = LaurentPoly.const(2, 1)
    r = SFRat(one + x + x * y * y, one + y)
    u = (Fraction(1), Fraction(-2))
    C = 60.0
    num = 1 + math.exp(C * 1) + math.exp(C * (1 - 4))
    den = 1 + math.exp(C * -2)
    assert abs(math.log(num / den) / C - float(pl_eval(tropicalize(r), u))) < 0.05


def test_point_json_and_validation():
    pt = TropPoint("d", (1, half, 0, -2))
    assert TropPoint.from_json(pt.to_json()) == pt
    with pytest.raises(ValueError):
        TropPoint("d", (1, 2, 3))
    with pytest.raises(ValueError):
        TropPoint("q", (1,))


@st.composite
def skew(draw, max_n=4, bound=2):
    n = draw(st.integers(1, max_n))
    eps = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            e = draw(st.integers(-bound, bound))
            eps[i][j], eps[j][i] = e, -e
    return eps


coords = st.fractions(min_value=-6, max_value=6, max_denominator=3)


def neg_eps(eps):
    return [[-e for e in row] for row in eps]


@settings(max_examples=100, deadline=None)
@given(skew(), st.data())
def test_tropical_mutations_are_involutions(eps, data):
    n = len(eps)
    k = data.draw(st.integers(0, n - 1))
    a = data.draw(st.lists(coords, min_size=n, max_size=n))
    x = data.draw(st.lists(coords, min_size=n, max_size=n))
    # the second mutation uses the mutated matrix
    eps2 = mutate_integer_matrix(eps, k)
    assert trop_mutate_a(trop_mutate_a(a, k, eps), k, eps2) == tuple(a)
    assert trop_mutate_x(trop_mutate_x(x, k, eps), k, eps2) == tuple(x)
    b1, x1 = trop_mutate_d(a, x, k, eps)
    assert trop_mutate_d(b1, x1, k, eps2) == (tuple(a), tuple(x))


@settings(max_examples=100, deadline=None)
@given(skew(), st.data())
def test_x_negation_flips_the_form(eps, data):
    n = len(eps)
    k = data.draw(st.integers(0, n - 1))
    x = data.draw(st.lists(coords, min_size=n, max_size=n))
    neg = tuple(-c for c in x)
    assert trop_mutate_x(neg, k, neg_eps(eps)) == tuple(-c for c in trop_mutate_x(x, k, eps))


@settings(max_examples=60, deadline=None)
@given(skew(max_n=3), st.data())
def test_hinged_composition_matches_pointwise(eps, data):
    n = len(eps)
    k = data.draw(st.integers(0, n - 1))
    forms = data.draw(st.lists(st.lists(st.integers(-2, 2), min_size=2 * n + 1, max_size=2 * n + 1), min_size=1, max_size=3))
    e = PLExpr.maximum(forms, 2 * n)
    linear, hinges, weights = trop_d_mutation_hinged(eps, k)
    composed = pl_compose_hinged(e, linear, hinges, weights)
    pt = data.draw(st.lists(coords, min_size=2 * n, max_size=2 * n))
    b, x = trop_mutate_d(pt[:n], pt[n:], k, eps)
    assert pl_eval(composed, pt) == pl_eval(e, b + x)


def test_trop_mutate_dispatch():
    eps = [[0, 1], [-1, 0]]
    pt = TropPoint("d", (1, 0, 2, 0))
    assert trop_mutate(pt, 0, eps) == TropPoint("d", (-1, 0, -2, 2))
