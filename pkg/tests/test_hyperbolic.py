import math
import random

import pytest

from clusterdual.hyperbolic import (
    INF,
    DecoratedIdealPolygon,
    DegenerateConfiguration,
    a_flip_check,
    b_values,
    cross_ratio_check,
    double_b_check,
    horocycle_gap,
    integrated_lambda_length,
    ptolemy_check,
    quadrilateral,
    random_moebius,
    random_polygon,
    random_redecoration,
    x_flip_check,
)
from clusterdual.polygon import Triangulation, all_triangulations, flip

TOL = 1e-9
SQUARE = Triangulation(4, ((0, 2),))


def test_unit_lambda_length():
    P = DecoratedIdealPolygon((0.0, 1.0, INF), (1.0, 1.0, 1.0))
    assert P.lambda_length(0, 1) == pytest.approx(1.0, abs=TOL)
    assert integrated_lambda_length(P, 0, 1) == pytest.approx(1.0, abs=1e-9)


def test_quadrature_agrees_with_the_formula():
    rng = random.Random(1)
    for _ in range(20):
        P = random_polygon(rng, 5, with_infinity=rng.random() < 0.5)
        for i in range(5):
            for j in range(i + 1, 5):
                assert integrated_lambda_length(P, i, j) == pytest.approx(P.lambda_length(i, j), rel=1e-8)


def test_scaling_horocycles():
    P = DecoratedIdealPolygon((-2.0, 0.5, 3.0), (0.7, 1.3, 2.0))
    # each diameter times t scales the product d_i d_j by t^2
    t = 3.0
    Q = DecoratedIdealPolygon(P.points, tuple(h * t for h in P.horocycles))
    assert Q.lambda_length(0, 2) == pytest.approx(P.lambda_length(0, 2) / t, rel=TOL)


def test_tangent_horocycles_have_unit_lambda_length():
    # diameters d0 d1 = (x1 - x0)^2 makes the horocycles tangent
    P = DecoratedIdealPolygon((0.0, 2.0, 5.0), (1.0, 4.0, 1.0))
    assert horocycle_gap(P, 0, 1) == pytest.approx(0.0, abs=TOL)
    assert P.lambda_length(0, 1) == pytest.approx(1.0, abs=TOL)
    assert horocycle_gap(P, 1, 2) > 0 and P.lambda_length(1, 2) > 1


def test_harmonic_quadrilateral():
    P = DecoratedIdealPolygon((-1.0, 0.0, 1.0, INF), (1.0, 1.0, 1.0, 1.0))
    assert quadrilateral(SQUARE, 0) == (0, 1, 2, 3)
    assert P.x_coordinates(SQUARE)[0] == pytest.approx(1.0, abs=TOL)
    assert ptolemy_check(P, (0, 1, 2, 3)) < TOL
    assert cross_ratio_check(P, SQUARE, 0) < TOL


def test_degenerate_points_raise():
    with pytest.raises(DegenerateConfiguration):
        DecoratedIdealPolygon((0.0, 1e-13, 1.0), (1.0, 1.0, 1.0))
    with pytest.raises(ValueError):
        DecoratedIdealPolygon((1.0, 0.0, 2.0, 3.0), (1.0,) * 4)
    with pytest.raises(ValueError):
        DecoratedIdealPolygon((0.0, 1.0, 2.0), (1.0, -1.0, 1.0))


def test_random_flip_residuals():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(4, 8)
        T = rng.choice(all_triangulations(n))
        k = rng.randrange(n - 3)
        P = random_polygon(rng, n, with_infinity=rng.random() < 0.3)
        assert ptolemy_check(P, quadrilateral(T, k)) < TOL
        assert cross_ratio_check(P, T, k) < TOL
        assert a_flip_check(P, T, k) < TOL
        assert x_flip_check(P, T, k) < TOL
        assert double_b_check(P, random_redecoration(rng, P), T, k) < TOL


def test_x_ignores_the_decoration():
    rng = random.Random(3)
    T = Triangulation.fan(6)
    P = random_polygon(rng, 6)
    # only the diagonal rows are decoration-free
    X = P.x_coordinates(T)[:3]
    for _ in range(10):
        Y = random_redecoration(rng, P).x_coordinates(T)[:3]
        assert max(abs(a - b) / abs(a) for a, b in zip(X, Y)) < TOL


def test_same_decoration_gives_unit_b():
    rng = random.Random(4)
    T = Triangulation.fan(7)
    P = random_polygon(rng, 7)
    assert all(abs(b - 1) < TOL for b in b_values(P, P, T))
    assert all(abs(b - 1) < TOL for b in b_values(P, P, flip(T, 2)))


def test_b_values_are_moebius_invariant():
    rng = random.Random(9)
    T = Triangulation.fan(6)
    for _ in range(20):
        P = random_polygon(rng, 6, span=3.0)
        Pm = random_redecoration(rng, P)
        g = random_moebius(rng)
        try:
            Q, Qm = P.moebius(*g), Pm.moebius(*g)
        except ValueError:
            continue
        before = b_values(P, Pm, T)
        after = b_values(Q, Qm, T)
        assert max(abs(a - b) / abs(a) for a, b in zip(before, after)) < 1e-8


def test_moebius_preserves_lambda_lengths():
    P = DecoratedIdealPolygon((-1.0, 0.0, 2.0, INF), (0.5, 1.5, 2.0, 3.0))
    Q = P.moebius(0.0, -1.0, 1.0, 0.0)
    for i in range(4):
        for j in range(i + 1, 4):
            assert Q.lambda_length(i, j) == pytest.approx(P.lambda_length(i, j), rel=TOL)
    assert not math.isinf(Q.points[3])
