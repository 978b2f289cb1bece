import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clusterdual.cluster import f_polynomial
from clusterdual.polygon import (
    DiskLamination,
    MarkedArcSet,
    Triangulation,
    a0_side_completion,
    a_coords,
    all_triangulations,
    chord_crossing_number,
    compatible_pair,
    complete_a0,
    crossing_sequence,
    deform_endpoints,
    exchange_from_triangulation,
    flip,
    flip_path,
    flip_word,
    msw_g_vector,
    path_to_arc,
    perfect_matchings,
    random_disk_lamination,
    snake_graph,
    undeform_endpoints,
)
from clusterdual.seed import mutate_matrix
from clusterdual.tropical import trop_mutate_a

half = Fraction(1, 2)
SQUARE = Triangulation(4, ((0, 2),))


def test_square_flip():
    assert flip(SQUARE, 0).diagonals == ((1, 3),)
    assert flip(flip(SQUARE, 0), 0) == SQUARE
    assert flip(SQUARE, (0, 2)).diagonals == ((1, 3),)


def test_counts_and_paths():
    assert len(all_triangulations(6)) == 14
    T = Triangulation.fan(7)
    assert flip_path(T, T) == []
    for U in all_triangulations(7)[::5]:
        assert flip_word(T, flip_path(T, U)).key() == U.key()


def test_invalid_triangulations():
    with pytest.raises(ValueError):
        Triangulation(5, ((0, 2), (1, 3)))
    with pytest.raises(ValueError):
        Triangulation(5, ((0, 2),))
    with pytest.raises(ValueError):
        Triangulation(5, ((0, 1), (0, 2)))


def test_pentagon_fan_exchange():
    eps = exchange_from_triangulation(Triangulation.fan(5)).eps
    assert abs(eps[0][1]) == 1


def test_flip_matches_matrix_mutation():
    for T in all_triangulations(7):
        for k in T.mutable:
            assert exchange_from_triangulation(flip(T, k)) == mutate_matrix(exchange_from_triangulation(T), k)


def test_compatibility_law():
    for T in all_triangulations(6):
        p = compatible_pair(T)
        assert p.compatibility_product() == p.expected_product()


def test_crossing_numbers():
    assert chord_crossing_number((0, 2), (1, 3)) == 1
    assert chord_crossing_number((0, 2), (0, 3)) == 0
    assert chord_crossing_number((0, 1), (0, 3)) == 0


def _segments_cross(c1, c2, n):
    def pt(v):
        return (math.cos(2 * math.pi * v / n), math.sin(2 * math.pi * v / n))

    def orient(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])

    if set(c1) & set(c2):
        return False
    a, b = map(pt, c1)
    c, d = map(pt, c2)
    return orient(a, b, c) * orient(a, b, d) < 0 and orient(c, d, a) * orient(c, d, b) < 0


def test_crossing_sequence():
    assert crossing_sequence((0, 2), SQUARE) == []
    assert crossing_sequence((1, 3), SQUARE) == [(0, 2)]
    fan = Triangulation.fan(6)
    seq = crossing_sequence((1, 5), fan)
    assert seq == [(0, 2), (0, 3), (0, 4)]
    # membership agrees with a geometric segment test on the unit circle
    for T in all_triangulations(7)[::7]:
        for c in [(i, j) for i in range(7) for j in range(i + 2, 7) if (i, j) != (0, 6)]:
            want = {d for d in T.diagonals if _segments_cross(c, d, 7)}
            assert set(crossing_sequence(c, T)) == want


def test_a_coords_square():
    l = DiskLamination(4, (((0, 2), 1),))
    assert a_coords(l, SQUARE) == (half, half, 0, half, 0)
    flipped = a_coords(l, flip(SQUARE, 0))
    assert flipped[0] == half
    eps = exchange_from_triangulation(SQUARE).eps
    assert trop_mutate_a(a_coords(l, SQUARE), 0, eps) == flipped
    assert a_coords(DiskLamination(4), SQUARE) == (0,) * 5


def test_a_coords_around_a_vertex():
    l = DiskLamination(4, (((0, 1), 1),))
    assert a_coords(l, SQUARE)[0] == 0
    assert a_coords(l, flip(SQUARE, 0))[0] == half
    eps = exchange_from_triangulation(SQUARE).eps
    assert trop_mutate_a(a_coords(l, SQUARE), 0, eps)[0] == half


def test_deform_endpoints():
    arcs = deform_endpoints(DiskLamination(4, (((0, 2), 1),)))
    assert arcs.as_dict() == {(1, 3): 1}
    merged = deform_endpoints(DiskLamination(6, (((0, 3), 2), ((0, 3), 3))))
    assert merged.as_dict() == {(1, 4): 5}


def test_deform_round_trip():
    rng = random.Random(3)
    for _ in range(500):
        n = rng.randint(4, 9)
        s1, s2 = rng.sample(range(n), 2)
        l = DiskLamination(n, (((s1, s2), rng.randint(1, 4)),))
        assert undeform_endpoints(deform_endpoints(l)) == l


def test_non_special_negative_weight_rejected():
    with pytest.raises(ValueError):
        DiskLamination(6, (((0, 3), -1),))
    assert DiskLamination(6, (((0, 1), -1),)).curves == (((0, 1), Fraction(-1)),)


def test_snake_graphs():
    G = snake_graph(SQUARE, (1, 3))
    assert len(G.tiles) == 1 and len(perfect_matchings(G)) == 2
    pent = Triangulation.fan(5)
    G = snake_graph(pent, (1, 4))
    assert len(G.tiles) == 2 and len(perfect_matchings(G)) == 3
    word = path_to_arc(pent, (1, 4))
    F, _ = f_polynomial(exchange_from_triangulation(pent), word, flip_word(pent, word).index((1, 4)))
    assert sum(c for _, c in F.items()) == 3
    with pytest.raises(ValueError):
        snake_graph(pent, (0, 2))


def test_g_vector_matches_cluster():
    T = Triangulation.fan(6)
    seed = exchange_from_triangulation(T)
    for c in [(1, 3), (1, 4), (1, 5), (2, 5)]:
        word = path_to_arc(T, c)
        U = flip_word(T, word)
        _, g = f_polynomial(seed, word, U.index(c))
        assert msw_g_vector(T, c) == g


def test_a0_completion():
    sides, kernel = a0_side_completion(5, {(0, 2): 1})
    arcs = complete_a0(5, {(0, 2): 1})
    assert all(s == 0 for s in arcs.vertex_sums())
    assert kernel is None and len(sides) == 5
    with pytest.raises(ValueError):
        a0_side_completion(4, {(0, 2): 1})
    even = complete_a0(6, {(0, 3): 1}, shift=2)
    assert all(s == 0 for s in even.vertex_sums())


def test_crossing_arcs_rejected():
    with pytest.raises(ValueError):
        MarkedArcSet(4, (((0, 2), 1), ((1, 3), 1)))


def test_json_round_trips():
    T = all_triangulations(7)[11]
    assert Triangulation.from_json(T.to_json()) == T
    arcs = complete_a0(5, {(0, 2): 2})
    assert MarkedArcSet.from_json(arcs.to_json()) == arcs
    l = DiskLamination(6, (((0, 3), 2), ((1, 2), -1)))
    assert DiskLamination.from_json(l.to_json()) == l


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 8), st.integers(0, 10**6))
def test_a_coords_follow_tropical_a_mutation(n, s):
    rng = random.Random(s)
    T = rng.choice(all_triangulations(n))
    l = random_disk_lamination(rng, n)
    k = rng.randrange(n - 3)
    eps = exchange_from_triangulation(T).eps
    U = flip(T, k)
    assert trop_mutate_a(a_coords(l, T), k, eps) == a_coords(l, U)
