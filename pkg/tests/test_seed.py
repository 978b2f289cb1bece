import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clusterdual.seed import (
    CompatiblePair,
    IncompatiblePairError,
    LatticeSeed,
    Seed,
    double_seed,
    doubled_form_value,
    mutate_lattice,
    mutate_matrix,
    mutate_pair,
    mutate_word,
    principal_pair,
)


@st.composite
def seeds(draw, max_m=8, bound=3):
    m = draw(st.integers(1, max_m))
    eps = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            e = draw(st.integers(-bound, bound))
            eps[i][j], eps[j][i] = e, -e
    frozen = draw(st.sets(st.integers(1, m - 1), max_size=max(0, m - 1))) if m > 1 else set()
    return Seed(eps, frozenset(frozen))


def test_rank_two_flip():
    assert mutate_matrix(Seed([[0, 1], [-1, 0]]), 0).eps == ((0, -1), (1, 0))


def test_three_cycle():
    s = Seed([[0, 1, -1], [-1, 0, 1], [1, -1, 0]])
    assert mutate_matrix(s, 1).eps == ((0, -1, 0), (1, 0, -1), (0, 1, 0))


def test_frozen_direction_rejected():
    with pytest.raises(ValueError):
        mutate_matrix(Seed([[0, 1], [-1, 0]], frozenset({1})), 1)


def test_json_round_trip():
    s = Seed([[0, 2, -1], [-2, 0, 0], [1, 0, 0]], frozenset({2}))
    assert Seed.from_json(s.to_json()) == s
    p = principal_pair([[0, 1], [-1, 0]], 4)
    assert CompatiblePair.from_json(p.to_json()) == p


@settings(max_examples=150, deadline=None)
@given(seeds(), st.data())
def test_matrix_mutation_is_involutive_and_skew(s, data):
    k = data.draw(st.sampled_from(s.mutable))
    once = mutate_matrix(s, k)
    for i in range(s.m):
        for j in range(s.m):
            assert once.eps[i][j] == -once.eps[j][i]
    assert mutate_matrix(once, k) == s


def test_lattice_rank_two():
    ls = LatticeSeed.standard(Seed([[0, 1], [-1, 0]]))
    out = mutate_lattice(ls, 0)
    assert out.vector(0) == (-1, 0)
    # [eps_21]_+ = 0, so e_2 is unchanged
    assert out.vector(1) == (0, 1)


@settings(max_examples=100, deadline=None)
@given(seeds(max_m=6), st.data())
def test_lattice_matches_matrix_and_returns_form(s, data):
    k = data.draw(st.sampled_from(s.mutable))
    ls = LatticeSeed.standard(s)
    once = mutate_lattice(ls, k)
    gram = [[once.pairing(once.vector(i), once.vector(j)) for j in range(s.m)] for i in range(s.m)]
    assert tuple(map(tuple, gram)) == mutate_matrix(s, k).eps
    assert once.to_seed() == mutate_matrix(s, k)
    twice = mutate_lattice(once, k)
    gram2 = [[twice.pairing(twice.vector(i), twice.vector(j)) for j in range(s.m)] for i in range(s.m)]
    assert tuple(map(tuple, gram2)) == s.eps


def test_doubled_form():
    d = double_seed(Seed([[0]]))
    # (e, f) = +1 from the phi-term of the second argument
    assert d.form == ((0, 1), (-1, 0))
    s = Seed([[0, 2], [-2, 0]])
    d = double_seed(s)
    e = lambda i: [int(i == j) for j in range(2)]
    z = [0, 0]
    for i in range(2):
        for j in range(2):
            assert d.pair(e(i) + z, z + e(j)) == doubled_form_value(s.eps, e(i), z, z, e(j)) == int(i == j)
            assert d.pair(z + e(i), z + e(j)) == 0


def test_pair_rank_one_twice():
    p = CompatiblePair([[0, -2], [2, 0]], [[0], [2]], (4,))
    assert mutate_pair(mutate_pair(p, 0), 0) == p


def test_incompatible_pair_rejected():
    with pytest.raises(IncompatiblePairError):
        CompatiblePair([[0, 1], [-1, 0]], [[0], [1]], (2,))


@settings(max_examples=100, deadline=None)
@given(seeds(max_m=4, bound=2), st.integers(1, 4), st.lists(st.integers(0, 3), max_size=4), st.data())
def test_pair_mutation_sign_independent_and_compatible(s, d, pre, data):
    p = principal_pair(s.eps, d)
    for j in pre:
        p = mutate_pair(p, j % p.n)
    k = data.draw(st.integers(0, p.n - 1))
    plus, minus = mutate_pair(p, k, 1), mutate_pair(p, k, -1)
    assert plus == minus
    assert plus.compatibility_product() == plus.expected_product()
    assert plus.d == p.d
    assert mutate_pair(plus, k, -1) == p


def test_mutate_word():
    s = Seed([[0, 1, 0], [-1, 0, 1], [0, -1, 0]])
    rng = random.Random(1)
    word = [rng.randrange(3) for _ in range(10)]
    assert mutate_word(mutate_word(s, word), list(reversed(word))) == s
