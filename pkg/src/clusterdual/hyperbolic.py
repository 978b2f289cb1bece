"""Decorated ideal polygons in the upper half-plane.

A floating-point oracle for the combinatorial side of the package: lambda
lengths of horocycle-decorated ideal polygons satisfy the Ptolemy relation,
their ratios give cross-ratios, and ratios of two decorations give B-values.
All of them are compared against the exact mutation formulas evaluated at the
same floating inputs.

Vertex ``v`` of a polygon is the ``v``-th ideal point.  Points are listed in
counterclockwise order along the boundary, so a polygon is a cyclically
increasing sequence of real numbers with at most one ``inf``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from scipy.integrate import quad

from .cluster import mutate_a_chart, mutate_d_chart, mutate_x_chart
from .polygon import Triangulation, exchange_from_triangulation, flip

INF = math.inf
MIN_GAP = 1e-9


class DegenerateConfiguration(ValueError):
    """Ideal points too close together to evaluate reliably."""


def _cyclic_rank(points: Sequence[float]) -> list[float]:
    # position along RP^1 with inf as the largest value
    return [INF if math.isinf(p) else p for p in points]


@dataclass(frozen=True)
class DecoratedIdealPolygon:
    """Ideal points with one horocycle each.

    ``horocycles[v]`` is the Euclidean diameter of the horocycle at a finite
    point, or its height when the point is ``inf``.
    """

    points: tuple[float, ...]
    horocycles: tuple[float, ...]

    def __post_init__(self):
        pts = tuple(float(p) for p in self.points)
        hs = tuple(float(h) for h in self.horocycles)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "horocycles", hs)
        if len(pts) < 3:
            raise ValueError("a polygon needs at least three ideal points")
        if len(hs) != len(pts):
            raise ValueError("one horocycle per ideal point")
        if any(not (h > 0) or math.isinf(h) for h in hs):
            raise ValueError("horocycle parameters must be positive and finite")
        if sum(math.isinf(p) for p in pts) > 1 or any(p == -INF or math.isnan(p) for p in pts):
            raise ValueError("at most one point at +inf, no other non-finite values")
        ranks = _cyclic_rank(pts)
        descents = sum(ranks[i] >= ranks[(i + 1) % len(ranks)] for i in range(len(ranks)))
        if descents != 1:
            raise ValueError("points must be in cyclic counterclockwise order")
        finite = [p for p in pts if not math.isinf(p)]
        scale = max(1.0, max(abs(p) for p in finite))
        ordered = sorted(finite)
        if any(b - a < MIN_GAP * scale for a, b in zip(ordered, ordered[1:])):
            raise DegenerateConfiguration("ideal points nearly coincide")

    @property
    def n(self) -> int:
        return len(self.points)

    def lambda_length(self, i: int, j: int) -> float:
        """exp(signed distance / 2) between the horocycles at i and j."""
        if i == j:
            raise ValueError("lambda length needs two distinct vertices")
        xi, xj = self.points[i], self.points[j]
        di, dj = self.horocycles[i], self.horocycles[j]
        if math.isinf(xi):
            return math.sqrt(di / dj)
        if math.isinf(xj):
            return math.sqrt(dj / di)
        return abs(xi - xj) / math.sqrt(di * dj)

    def a_coordinates(self, T: Triangulation) -> list[float]:
        """Lambda lengths of the edges of T, in edge order."""
        return [self.lambda_length(u, v) for u, v in T.edges]

    def x_coordinates(self, T: Triangulation) -> list[float]:
        """X_i = prod_j A_j^eps_ij over all edges of T."""
        eps = exchange_from_triangulation(T).eps
        A = self.a_coordinates(T)
        out = []
        for row in eps:
            value = 1.0
            for a, e in zip(A, row):
                if e:
                    value *= a ** e
            out.append(value)
        return out

    def rescaled(self, factors: Sequence[float]) -> "DecoratedIdealPolygon":
        """Move every horocycle; at a finite point the diameter is multiplied, at inf the height is divided."""
        hs = [h / f if math.isinf(p) else h * f for p, h, f in zip(self.points, self.horocycles, factors)]
        return DecoratedIdealPolygon(self.points, tuple(hs))

    def moebius(self, a: float, b: float, c: float, d: float) -> "DecoratedIdealPolygon":
        """Image under z -> (az + b)/(cz + d) with ad - bc = 1, keeping vertex labels."""
        if abs(a * d - b * c - 1) > 1e-12:
            raise ValueError("need a unimodular matrix")
        pts = []
        hs = []
        for x, h in zip(self.points, self.horocycles):
            if math.isinf(x):
                if c == 0:
                    pts.append(INF)
                    hs.append(a * a * h)
                else:
                    pts.append(a / c)
                    hs.append(1.0 / (c * c * h))
                continue
            denom = c * x + d
            if denom == 0:
                pts.append(INF)
                hs.append(1.0 / (c * c * h))
            else:
                pts.append((a * x + b) / denom)
                hs.append(h / (denom * denom))
        return DecoratedIdealPolygon(tuple(pts), tuple(hs))


def quadrilateral(T: Triangulation, k: int) -> tuple[int, int, int, int]:
    """Vertices (a, b, c, d) in counterclockwise order with diagonal k = (a, c)."""
    u, v = T.diagonals[k]
    w1, w2 = T.apexes((u, v))
    inside = w1 if u < w1 < v else w2
    outside = w2 if inside == w1 else w1
    return u, inside, v, outside


def point_cross_ratio(a: float, b: float, c: float, d: float) -> float:
    """(b - a)(d - c) / ((c - b)(d - a)), taken as a limit when one point is inf."""
    def diff(p, q):
        # p - q with an infinite endpoint replaced by its sign; such factors come in pairs
        if math.isinf(p):
            return 1.0
        if math.isinf(q):
            return -1.0
        return p - q

    return diff(b, a) * diff(d, c) / (diff(c, b) * diff(d, a))


# geometric checks

def ptolemy_check(P: DecoratedIdealPolygon, quad_vertices: Sequence[int]) -> float:
    """Relative residual of l_ac l_bd = l_ab l_cd + l_ad l_bc."""
    a, b, c, d = quad_vertices
    lam = P.lambda_length
    lhs = lam(a, c) * lam(b, d)
    rhs = lam(a, b) * lam(c, d) + lam(a, d) * lam(b, c)
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs))


def cross_ratio_check(P: DecoratedIdealPolygon, T: Triangulation, k: int) -> float:
    """Compare X_k from lambda lengths with the cross-ratio of the four ideal points."""
    a, b, c, d = quadrilateral(T, k)
    lam = P.lambda_length
    from_lengths = lam(a, b) * lam(c, d) / (lam(b, c) * lam(d, a))
    pts = P.points
    from_points = point_cross_ratio(pts[a], pts[b], pts[c], pts[d])
    return abs(from_lengths - from_points) / abs(from_points)


def _relative(xs: Sequence[float], ys: Sequence[float]) -> float:
    return max(abs(x - y) / max(abs(x), abs(y)) for x, y in zip(xs, ys))


def a_flip_check(P: DecoratedIdealPolygon, T: Triangulation, k: int) -> float:
    """Lambda lengths of flip(T, k) against the exchange relation."""
    eps = exchange_from_triangulation(T).eps
    predicted = mutate_a_chart(P.a_coordinates(T), k, eps)
    return _relative(predicted, P.a_coordinates(flip(T, k)))


def x_flip_check(P: DecoratedIdealPolygon, T: Triangulation, k: int) -> float:
    eps = exchange_from_triangulation(T).eps
    predicted = mutate_x_chart(P.x_coordinates(T), k, eps)
    return _relative(predicted, P.x_coordinates(flip(T, k)))


def b_values(P: DecoratedIdealPolygon, P_mirror: DecoratedIdealPolygon, T: Triangulation) -> list[float]:
    """B_e = A°_e / A_e for the two decorations of the same ideal points."""
    if P.points != P_mirror.points:
        raise ValueError("both decorations must live on the same ideal polygon")
    return [b / a for a, b in zip(P.a_coordinates(T), P_mirror.a_coordinates(T))]


def double_b_check(P: DecoratedIdealPolygon, P_mirror: DecoratedIdealPolygon, T: Triangulation, k: int) -> float:
    """D-mutation of (B, X) against the values recomputed after a geometric flip."""
    eps = exchange_from_triangulation(T).eps
    B, X = mutate_d_chart(b_values(P, P_mirror, T), P.x_coordinates(T), k, eps)
    T2 = flip(T, k)
    return max(_relative(B, b_values(P, P_mirror, T2)), _relative(X, P.x_coordinates(T2)))


# numeric integration oracle for lambda lengths

def integrated_lambda_length(P: DecoratedIdealPolygon, i: int, j: int) -> float:
    """exp(L/2) with L the hyperbolic length of the geodesic between the horocycles, by quadrature."""
    xi, xj = P.points[i], P.points[j]
    di, dj = P.horocycles[i], P.horocycles[j]
    if math.isinf(xi) or math.isinf(xj):
        d, h = (dj, di) if math.isinf(xi) else (di, dj)
        # vertical geodesic, ds = dy / y, from the top of the horocycle up to the horizontal one
        length, _ = quad(lambda y: 1.0 / y, d, h, epsabs=0.0, epsrel=1e-13)
        return math.exp(length / 2)
    r = abs(xi - xj) / 2
    if xi > xj:
        xi, xj, di, dj = xj, xi, dj, di
    # semicircle param (c + r cos t, r sin t); the horocycle at xj meets it where tan(t/2) = dj / (2r)
    t_right = 2 * math.atan(dj / (2 * r))
    t_left = math.pi - 2 * math.atan(di / (2 * r))
    sign = 1.0
    lo, hi = t_right, t_left
    if lo > hi:
        lo, hi, sign = hi, lo, -1.0
    length, _ = quad(lambda t: 1.0 / math.sin(t), lo, hi, epsabs=0.0, epsrel=1e-13)
    return math.exp(sign * length / 2)


def horocycle_gap(P: DecoratedIdealPolygon, i: int, j: int) -> float:
    """Euclidean gap between two finite horocycles (negative when they overlap)."""
    xi, xj = P.points[i], P.points[j]
    if math.isinf(xi) or math.isinf(xj):
        raise ValueError("gap is only defined for finite points")
    ri, rj = P.horocycles[i] / 2, P.horocycles[j] / 2
    return math.hypot(xi - xj, ri - rj) - ri - rj


# random configurations

def random_polygon(rng: random.Random, n: int, with_infinity: bool = False,
                   span: float = 10.0, diameters: tuple[float, float] = (0.1, 10.0),
                   min_gap: float = 1e-3) -> DecoratedIdealPolygon:
    finite = n - 1 if with_infinity else n
    while True:
        pts = sorted(rng.uniform(-span, span) for _ in range(finite))
        if all(b - a >= min_gap for a, b in zip(pts, pts[1:])):
            break
    if with_infinity:
        pts.append(INF)
    lo, hi = diameters
    hs = [math.exp(rng.uniform(math.log(lo), math.log(hi))) for _ in range(n)]
    return DecoratedIdealPolygon(tuple(pts), tuple(hs))


def random_redecoration(rng: random.Random, P: DecoratedIdealPolygon,
                        diameters: tuple[float, float] = (0.1, 10.0)) -> DecoratedIdealPolygon:
    lo, hi = diameters
    hs = [math.exp(rng.uniform(math.log(lo), math.log(hi))) for _ in range(P.n)]
    return DecoratedIdealPolygon(P.points, tuple(hs))


def random_moebius(rng: random.Random) -> tuple[float, float, float, float]:
    """A random element of SL2(R) of moderate size."""
    while True:
        a, b, c = (rng.uniform(-2, 2) for _ in range(3))
        if abs(a) > 0.2:
            return a, b, c, (1 + b * c) / a

