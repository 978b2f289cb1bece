from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from clusterdual.cluster import (
    TrivialSemifield,
    UniversalSemifield,
    canonical_map,
    d_chart_form,
    f_polynomial,
    initial_labeled_seed,
    monodromy_trace,
    mutate_a_chart,
    mutate_d_chart,
    mutate_labeled,
    mutate_x_chart,
    poisson_bracket,
    principal_seed,
    separation_reconstruct,
    symbolic_chart,
)
from clusterdual.exact import LaurentPoly, sfr_equal
from clusterdual.seed import Seed, mutate_integer_matrix

A2 = Seed([[0, 1], [-1, 0]])


def test_principal_exchange_a2():
    sigma = principal_seed(A2)
    x0, x1, y0, _ = symbolic_chart(4)
    assert sfr_equal(mutate_labeled(sigma, 0).x[0], (y0 * x1 + 1) / x0)


def test_trivial_coefficients_give_a_mutation():
    sigma = initial_labeled_seed(A2, TrivialSemifield())
    A = symbolic_chart(2)
    assert sfr_equal(mutate_labeled(sigma, 1).x[1], mutate_a_chart(A, 1, A2.eps)[1])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.data())
def test_labeled_mutation_involutive(m, data):
    eps = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            e = data.draw(st.integers(-2, 2))
            eps[i][j], eps[j][i] = e, -e
    seed = Seed(eps)
    k = data.draw(st.integers(0, m - 1))
    for sigma in (principal_seed(seed), initial_labeled_seed(seed, UniversalSemifield(m), list(symbolic_chart(m)))):
        twice = mutate_labeled(mutate_labeled(sigma, k), k)
        assert all(sfr_equal(a, b) for a, b in zip(twice.x, sigma.x))
        assert twice.seed == seed


def test_x_chart_numeric():
    assert mutate_x_chart((Fraction(2), Fraction(3)), 0, A2.eps) == (Fraction(1, 2), Fraction(9))


def test_x_chart_untouched_coordinate():
    X = symbolic_chart(3)
    eps = [[0, 1, 0], [-1, 0, 0], [0, 0, 0]]
    assert mutate_x_chart(X, 0, eps)[2] is X[2]


def test_x_pentagon():
    X = symbolic_chart(2)
    eps = A2.eps
    cur = X
    for step in range(5):
        k = step % 2
        cur = mutate_x_chart(cur, k, eps)
        eps = mutate_integer_matrix(eps, k)
    assert sfr_equal(cur[0], X[1]) and sfr_equal(cur[1], X[0])


def test_d_chart_rank_two():
    B0, B1, X0, X1 = symbolic_chart(4)
    B, X = mutate_d_chart((B0, B1), (X0, X1), 0, A2.eps)
    assert sfr_equal(B[0], (X0 * B1 + 1) / ((X0 + 1) * B0))
    assert B[1] is B1


def test_f_polynomials_a2():
    F, g = f_polynomial(A2, [], 1)
    assert F == LaurentPoly.const(2, 1) and g == (0, 1)
    F, _ = f_polynomial(A2, [0], 0)
    assert F == LaurentPoly(2, {(0, 0): 1, (1, 0): 1})
    F, _ = f_polynomial(A2, [0, 1], 1)
    assert F == LaurentPoly(2, {(0, 0): 1, (0, 1): 1, (1, 1): 1})


def test_separation_trivial_and_constant():
    sigma = initial_labeled_seed(A2, TrivialSemifield())
    F, g = f_polynomial(A2, [0], 0)
    rebuilt = separation_reconstruct(F, g, A2, TrivialSemifield(), [1, 1], sigma.x)
    assert sfr_equal(rebuilt, mutate_labeled(sigma, 0).x[0])
    one = LaurentPoly.const(2, 1)
    mono = separation_reconstruct(one, (2, -1), A2, TrivialSemifield(), [1, 1], sigma.x)
    assert sfr_equal(mono, sigma.x[0] ** 2 / sigma.x[1])


def test_separation_universal_a2():
    sf = UniversalSemifield(2)
    ys = [sf.generator(0), sf.generator(1)]
    sigma = initial_labeled_seed(A2, sf, ys)
    F, g = f_polynomial(A2, [0], 0)
    assert sfr_equal(mutate_labeled(sigma, 0).x[0], separation_reconstruct(F, g, A2, sf, ys, sigma.x))


def test_canonical_maps():
    eps = [[0, 1, -2], [-1, 0, 1], [2, -1, 0]]
    V = symbolic_chart(6)
    B, X = V[:3], V[3:]
    B2, X2 = canonical_map("iota", canonical_map("iota", (B, X), eps), eps)
    assert all(sfr_equal(a, b) for a, b in zip(B + X, B2 + X2))
    left, right = canonical_map("pi", canonical_map("j", X, eps), eps)
    assert all(sfr_equal(a, b) and sfr_equal(a, c) for a, b, c in zip(X, left, right))
    A, A0 = V[:3], V[3:]
    got = canonical_map("pi", canonical_map("phi", (A, A0), eps), eps)
    want = (canonical_map("p", A, eps), canonical_map("p", A0, eps))
    assert all(sfr_equal(a, b) for a, b in zip(got[0] + got[1], want[0] + want[1]))


def test_poisson_bracket():
    X0, X1 = symbolic_chart(2)
    assert sfr_equal(poisson_bracket(X0, X1, A2.eps), X0 * X1)
    f = X0 + X1 * X1
    assert not poisson_bracket(f, f, A2.eps).num


def test_poisson_bracket_survives_mutation():
    eps = [[0, 2], [-2, 0]]
    X = symbolic_chart(2)
    new = mutate_x_chart(X, 0, eps)
    eps2 = mutate_integer_matrix(eps, 0)
    lhs = poisson_bracket(new[0], new[1], eps)
    rhs = eps2[0][1] * new[0] * new[1]
    assert sfr_equal(lhs, rhs)


def test_d_chart_form_shape():
    form = d_chart_form([[0, 1], [-1, 0]])
    assert form[0][2] == 1 and form[2][0] == -1 and form[2][3] == 0


def test_monodromy_trace():
    assert monodromy_trace([(0, "L"), (1, "R")], 0, 2) == LaurentPoly.const(2, 2)
    word = [(0, "L"), (1, "R"), (1, "L"), (0, "R")]
    t = monodromy_trace(word, 2, 2)
    for r in range(1, len(word)):
        assert monodromy_trace(word[r:] + word[:r], 2, 2) == t
    left = monodromy_trace([(0, "L"), (1, "L")], 1, 2)
    assert left == LaurentPoly(2, {(1, 1): 1, (-1, -1): 1})
