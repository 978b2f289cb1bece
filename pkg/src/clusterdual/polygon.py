"""Convex polygon combinatorics.

Vertices are 0..n-1 counterclockwise. Boundary segment ``i`` joins vertices
``i`` and ``i+1``. A triangulation stores its n-3 diagonals in a fixed order;
its edge index set lists those diagonals first and then the n sides, so the
mutable indices of the associated seed are ``0..n-4``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .seed import CompatiblePair, Seed

Chord = tuple[int, int]


def chord(u: int, v: int) -> Chord:
    if u == v:
        raise ValueError("a chord needs two distinct endpoints")
    return (u, v) if u < v else (v, u)


def is_side(c: Chord, n: int) -> bool:
    u, v = c
    return (v - u) % n in (1, n - 1)


def chord_crossing_number(c1: Chord, c2: Chord) -> int:
    """1 when the endpoints strictly interleave, else 0."""
    a, b = sorted(c1)
    c, d = sorted(c2)
    if len({a, b, c, d}) < 4:
        return 0
    return int((a < c < b) != (a < d < b))


def weighted_crossing_number(arcs1: dict, arcs2: dict):
    return sum(w1 * w2 * chord_crossing_number(c1, c2) for c1, w1 in arcs1.items() for c2, w2 in arcs2.items())


def side_chord(i: int, n: int) -> Chord:
    return chord(i % n, (i + 1) % n)


@dataclass(frozen=True)
class Triangulation:
    n: int
    diagonals: tuple[Chord, ...]

    def __post_init__(self):
        if self.n < 4:
            raise ValueError("polygon needs at least four marked points")
        diags = tuple(chord(*d) for d in self.diagonals)
        object.__setattr__(self, "diagonals", diags)
        if len(diags) != self.n - 3 or len(set(diags)) != len(diags):
            raise ValueError(f"a triangulation of an {self.n}-gon has exactly {self.n - 3} distinct diagonals")
        for d in diags:
            if is_side(d, self.n) or not all(0 <= v < self.n for v in d):
                raise ValueError(f"{d} is not a diagonal")
        for d1, d2 in itertools.combinations(diags, 2):
            if chord_crossing_number(d1, d2):
                raise ValueError(f"diagonals {d1} and {d2} cross")

    @classmethod
    def fan(cls, n: int, apex: int = 0) -> "Triangulation":
        return cls(n, tuple(chord(apex, (apex + j) % n) for j in range(2, n - 1)))

    @property
    def edges(self) -> tuple[Chord, ...]:
        return self.diagonals + tuple(side_chord(i, self.n) for i in range(self.n))

    @property
    def m(self) -> int:
        return 2 * self.n - 3

    @property
    def mutable(self) -> tuple[int, ...]:
        return tuple(range(self.n - 3))

    @property
    def frozen(self) -> frozenset:
        return frozenset(range(self.n - 3, self.m))

    def key(self) -> frozenset:
        return frozenset(self.diagonals)

    def index(self, c: Chord) -> int:
        c = chord(*c)
        return self.edges.index(c)

    def has_edge(self, c: Chord) -> bool:
        return chord(*c) in self.edges

    def side_index(self, i: int) -> int:
        return self.n - 3 + (i % self.n)

    def triangles(self) -> list[tuple[int, int, int]]:
        es = set(self.edges)
        out = []
        for a, b, c in itertools.combinations(range(self.n), 3):
            if (a, b) in es and (b, c) in es and (a, c) in es:
                out.append((a, b, c))
        return out

    def apexes(self, d: Chord) -> list[int]:
        """The vertices w forming a triangle of T with the diagonal d."""
        es = set(self.edges)
        u, v = d
        return [w for w in range(self.n) if w not in d and chord(u, w) in es and chord(v, w) in es]

    def to_json(self) -> dict:
        return {"n": self.n, "diagonals": [list(d) for d in self.diagonals]}

    @classmethod
    def from_json(cls, data: dict) -> "Triangulation":
        return cls(int(data["n"]), tuple(tuple(d) for d in data["diagonals"]))


def _diag_position(T: Triangulation, d) -> int:
    if isinstance(d, int):
        if not 0 <= d < T.n - 3:
            raise ValueError(f"diagonal index {d} out of range")
        return d
    c = chord(*d)
    if c not in T.diagonals:
        raise ValueError(f"{c} is not a diagonal of the triangulation")
    return T.diagonals.index(c)


def flip(T: Triangulation, d) -> Triangulation:
    """Replace diagonal d (position or chord) by the other diagonal of its quadrilateral."""
    pos = _diag_position(T, d)
    old = T.diagonals[pos]
    w1, w2 = T.apexes(old)
    diags = list(T.diagonals)
    diags[pos] = chord(w1, w2)
    return Triangulation(T.n, tuple(diags))


def flip_word(T: Triangulation, word: Iterable[int]) -> Triangulation:
    for k in word:
        T = flip(T, k)
    return T


def flip_neighbors(T: Triangulation) -> list[tuple[int, Triangulation]]:
    return [(k, flip(T, k)) for k in range(T.n - 3)]


def all_triangulations(n: int) -> list[Triangulation]:
    """Breadth-first enumeration of the flip graph, in canonical sorted order."""
    start = Triangulation.fan(n)
    seen = {start.key(): start}
    queue = deque([start])
    while queue:
        T = queue.popleft()
        for _, U in flip_neighbors(T):
            if U.key() not in seen:
                seen[U.key()] = U
                queue.append(U)
    return [seen[k] for k in sorted(seen, key=lambda s: sorted(s))]


def flip_path(T1: Triangulation, T2: Triangulation) -> list[int]:
    """Breadth-first flip word (positions in the evolving triangulation) from T1 to T2."""
    if T1.n != T2.n:
        raise ValueError("triangulations of different polygons")
    target = T2.key()
    if T1.key() == target:
        return []
    prev = {T1.key(): None}
    queue = deque([T1])
    while queue:
        T = queue.popleft()
        for k, U in flip_neighbors(T):
            if U.key() in prev:
                continue
            prev[U.key()] = (T, k)
            if U.key() == target:
                word = []
                node = U
                while prev[node.key()] is not None:
                    parent, step = prev[node.key()]
                    word.append(step)
                    node = parent
                return word[::-1]
            queue.append(U)
    raise ValueError("flip graph is disconnected")


def path_to_arc(T: Triangulation, c: Chord) -> list[int]:
    """A shortest flip word after which c is an edge."""
    c = chord(*c)
    if T.has_edge(c):
        return []
    prev = {T.key(): None}
    queue = deque([T])
    while queue:
        S = queue.popleft()
        for k, U in flip_neighbors(S):
            if U.key() in prev:
                continue
            prev[U.key()] = (S, k)
            if c in U.diagonals:
                word = []
                node = U
                while prev[node.key()] is not None:
                    parent, step = prev[node.key()]
                    word.append(step)
                    node = parent
                return word[::-1]
            queue.append(U)
    raise ValueError(f"{c} is not an arc of the polygon")


def _ccw_incidence(T: Triangulation) -> dict[int, list[int]]:
    """Edge indices at each vertex, ordered counterclockwise from the side towards v+1."""
    n = T.n
    inc: dict[int, list[tuple[int, int]]] = {v: [] for v in range(n)}
    for idx, (a, b) in enumerate(T.edges):
        inc[a].append(((b - a) % n, idx))
        inc[b].append(((a - b) % n, idx))
    return {v: [idx for _, idx in sorted(lst)] for v, lst in inc.items()}


def b_full(T: Triangulation) -> list[list[int]]:
    """b_ij = #(vertices where i is immediately clockwise of j) - #(the reverse)."""
    m = T.m
    b = [[0] * m for _ in range(m)]
    for order in _ccw_incidence(T).values():
        for a, c in zip(order, order[1:]):
            b[a][c] += 1
            b[c][a] -= 1
    return b


def lambda_matrix(T: Triangulation) -> tuple[tuple[int, ...], ...]:
    """lambda_ij = #(vertices where i is clockwise of j) - #(the reverse)."""
    m = T.m
    lam = [[0] * m for _ in range(m)]
    for order in _ccw_incidence(T).values():
        for x, y in itertools.combinations(order, 2):
            lam[x][y] += 1
            lam[y][x] -= 1
    return tuple(tuple(r) for r in lam)


def exchange_from_triangulation(T: Triangulation) -> Seed:
    """Seed with eps = b^t; the sides are frozen."""
    b = b_full(T)
    m = T.m
    eps = [[b[j][i] for j in range(m)] for i in range(m)]
    return Seed(eps, T.frozen)


def b_matrix(T: Triangulation) -> tuple[tuple[int, ...], ...]:
    """The I x J block of b (rows: all edges, columns: diagonals)."""
    b = b_full(T)
    return tuple(tuple(b[i][j] for j in T.mutable) for i in range(T.m))


def compatible_pair(T: Triangulation) -> CompatiblePair:
    return CompatiblePair(lambda_matrix(T), b_matrix(T), [4] * (T.n - 3))


# arcs crossing a triangulation

def _ccw_dist(a: int, b: int, n: int) -> int:
    return (b - a) % n


def crossing_sequence(c: Chord, T: Triangulation) -> list[Chord]:
    """Diagonals of T crossed by c, in order along c starting at its smaller endpoint."""
    c = chord(*c)
    if T.has_edge(c):
        return []
    u, v = c
    n = T.n
    crossed = []
    for d in T.diagonals:
        if chord_crossing_number(c, d):
            a, b = d
            p, r = (a, b) if 0 < _ccw_dist(u, a, n) < _ccw_dist(u, v, n) else (b, a)
            crossed.append(((_ccw_dist(u, p, n), -_ccw_dist(u, r, n)), d))
    crossed.sort()
    return [d for _, d in crossed]


# laminations

Segment = int


def _curve(s1: int, s2: int, n: int) -> tuple[int, int]:
    s1 %= n
    s2 %= n
    if s1 == s2:
        raise ValueError("a curve must join two different boundary segments")
    return (s1, s2) if s1 < s2 else (s2, s1)


def is_special_curve(curve: tuple[int, int], n: int) -> bool:
    """A curve retractable to a single marked point joins adjacent segments."""
    return (curve[1] - curve[0]) % n in (1, n - 1)


@dataclass(frozen=True)
class DiskLamination:
    """Weighted curves between boundary segments; parallel curves are merged."""

    n: int
    curves: tuple[tuple[tuple[int, int], Fraction], ...] = ()

    def __post_init__(self):
        merged: dict[tuple[int, int], Fraction] = {}
        for cv, w in self.curves:
            key = _curve(cv[0], cv[1], self.n)
            merged[key] = merged.get(key, Fraction(0)) + Fraction(w)
        for key, w in merged.items():
            if w < 0 and not is_special_curve(key, self.n):
                raise ValueError(f"curve {key} is not special and needs a nonnegative weight")
        object.__setattr__(self, "curves", tuple(sorted((k, w) for k, w in merged.items() if w != 0)))

    @classmethod
    def from_dict(cls, n: int, weights: dict) -> "DiskLamination":
        return cls(n, tuple(weights.items()))

    def as_dict(self) -> dict[tuple[int, int], Fraction]:
        return dict(self.curves)

    def segment_sums(self) -> list[Fraction]:
        sums = [Fraction(0)] * self.n
        for (s1, s2), w in self.curves:
            sums[s1] += w
            sums[s2] += w
        return sums

    def satisfies_a0(self) -> bool:
        """Frozen coordinates vanish: every segment's endpoint weight sum is zero."""
        return all(s == 0 for s in self.segment_sums())

    def has_integral_parity(self) -> bool:
        """Integral weights and an even endpoint weight sum on every segment."""
        if any(w.denominator != 1 for _, w in self.curves):
            return False
        return all(s.denominator == 1 and s.numerator % 2 == 0 for s in self.segment_sums())

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "curves": [{"segments": list(k), "weight": str(w)} for k, w in self.curves],
        }

    @classmethod
    def from_json(cls, data: dict, n: int | None = None) -> "DiskLamination":
        n = int(data.get("n", n))
        return cls(n, tuple((tuple(c["segments"]), Fraction(str(c["weight"]))) for c in data["curves"]))


def _separates(c: Chord, s1: int, s2: int, n: int) -> bool:
    """Whether the diagonal c splits segments s1 and s2 into different sides."""
    a, b = c
    inside1 = a <= s1 < b
    inside2 = a <= s2 < b
    return inside1 != inside2


def curve_meets_edge(curve: tuple[int, int], e: Chord, n: int) -> int:
    """Intersection count of a curve with an edge under the endpoint-counts-once rule."""
    if is_side(e, n):
        u, v = e
        seg = u if (v - u) % n == 1 else v
        return int(curve[0] == seg) + int(curve[1] == seg)
    return int(_separates(e, curve[0], curve[1], n))


def a_coords(l: DiskLamination, T: Triangulation) -> tuple[Fraction, ...]:
    """Half the weighted number of intersections with each edge of T."""
    out = []
    for e in T.edges:
        out.append(sum((w * curve_meets_edge(cv, e, T.n) for cv, w in l.curves), Fraction(0)) / 2)
    return tuple(out)


def x_coords(l: DiskLamination, T: Triangulation) -> tuple[Fraction, ...]:
    """Shear coordinates on the diagonals, from the local quadrilateral rule."""
    eps = exchange_from_triangulation(T).eps
    n = T.n
    out = []
    for k, d in enumerate(T.diagonals):
        u, v = d
        total = Fraction(0)
        for cv, w in l.curves:
            if not curve_meets_edge(cv, d, n):
                continue
            sides = []
            for apex in T.apexes(d):
                for s in (chord(u, apex), chord(v, apex)):
                    if curve_meets_edge(cv, s, n):
                        sides.append(T.index(s))
                        break
            sign = sum(eps[k][s] for s in sides)
            total += w * Fraction(sign, 2)
        out.append(total)
    return tuple(out)


@dataclass(frozen=True)
class MarkedArcSet:
    """Pairwise non-crossing chords with weights (negative weights only on sides)."""

    n: int
    arcs: tuple[tuple[Chord, Fraction], ...] = ()

    def __post_init__(self):
        merged: dict[Chord, Fraction] = {}
        for c, w in self.arcs:
            c = chord(*c)
            merged[c] = merged.get(c, Fraction(0)) + Fraction(w)
        items = tuple(sorted((c, w) for c, w in merged.items() if w != 0))
        for (c1, _), (c2, _) in itertools.combinations(items, 2):
            if chord_crossing_number(c1, c2):
                raise ValueError(f"arcs {c1} and {c2} cross")
        object.__setattr__(self, "arcs", items)

    @classmethod
    def from_dict(cls, n: int, weights: dict) -> "MarkedArcSet":
        return cls(n, tuple(weights.items()))

    def as_dict(self) -> dict[Chord, Fraction]:
        return dict(self.arcs)

    def diagonal_arcs(self) -> dict[Chord, Fraction]:
        return {c: w for c, w in self.arcs if not is_side(c, self.n)}

    def side_arcs(self) -> dict[Chord, Fraction]:
        return {c: w for c, w in self.arcs if is_side(c, self.n)}

    def triangulation(self) -> Triangulation:
        """A triangulation containing every arc, completed greedily in lexicographic order."""
        diags = sorted(self.diagonal_arcs())
        for c in itertools.combinations(range(self.n), 2):
            if len(diags) == self.n - 3:
                break
            if is_side(c, self.n) or c in diags:
                continue
            if not any(chord_crossing_number(c, d) for d in diags):
                diags.append(c)
        return Triangulation(self.n, tuple(diags))

    def weight_vector(self, T: Triangulation | None = None) -> tuple[Fraction, ...]:
        T = T or self.triangulation()
        w = [Fraction(0)] * T.m
        for c, wt in self.arcs:
            w[T.index(c)] += wt
        return tuple(w)

    def vertex_sums(self) -> list[Fraction]:
        sums = [Fraction(0)] * self.n
        for (a, b), w in self.arcs:
            sums[a] += w
            sums[b] += w
        return sums

    def to_json(self) -> dict:
        return {"n": self.n, "arcs": [{"chord": list(c), "weight": str(w)} for c, w in self.arcs]}

    @classmethod
    def from_json(cls, data: dict) -> "MarkedArcSet":
        return cls(int(data["n"]), tuple((tuple(a["chord"]), Fraction(str(a["weight"]))) for a in data["arcs"]))


def deform_endpoints(l: DiskLamination) -> MarkedArcSet:
    """Slide each endpoint counterclockwise along its segment to the next marked point."""
    n = l.n
    arcs: dict[Chord, Fraction] = {}
    for (s1, s2), w in l.curves:
        c = chord((s1 + 1) % n, (s2 + 1) % n)
        arcs[c] = arcs.get(c, Fraction(0)) + w
    return MarkedArcSet.from_dict(n, arcs)


def undeform_endpoints(arcs: MarkedArcSet) -> DiskLamination:
    """Inverse of deform_endpoints: marked point p goes back to segment p-1."""
    n = arcs.n
    return DiskLamination(n, tuple((((a - 1) % n, (b - 1) % n), w) for (a, b), w in arcs.arcs))


# snake graphs

@dataclass(frozen=True)
class Tile:
    corners: tuple[int, int, int, int]
    sides: tuple[Chord, Chord, Chord, Chord]
    diagonal: Chord


@dataclass
class SnakeGraph:
    arc: Chord
    tiles: list[Tile]
    glued: list[Chord]
    vertices: list[tuple[int, int]] = field(default_factory=list)
    edges: list[tuple[int, int, Chord, bool]] = field(default_factory=list)

    @property
    def boundary_edges(self) -> list[int]:
        return [i for i, e in enumerate(self.edges) if e[3]]


def _triangle_between(d1: Chord, d2: Chord) -> tuple[int, int, int]:
    verts = set(d1) | set(d2)
    if len(verts) != 3:
        raise ValueError("consecutive crossed diagonals must share a vertex")
    return tuple(sorted(verts))


def snake_graph(T: Triangulation, c: Chord) -> SnakeGraph:
    """Tiles glued along the third sides of the triangles between consecutive crossings."""
    c = chord(*c)
    seq = crossing_sequence(c, T)
    if not seq:
        raise ValueError(f"{c} is an edge of the triangulation; its snake graph is empty")
    u, v = c
    tris = [tuple(sorted(set(seq[0]) | {u}))]
    for j in range(len(seq) - 1):
        tris.append(_triangle_between(seq[j], seq[j + 1]))
    tris.append(tuple(sorted(set(seq[-1]) | {v})))
    tiles = []
    for j, d in enumerate(seq):
        a, b = d
        x = next(w for w in tris[j] if w not in d)
        y = next(w for w in tris[j + 1] if w not in d)
        corners = (a, x, b, y)
        sides = (chord(a, x), chord(x, b), chord(b, y), chord(y, a))
        tiles.append(Tile(corners, sides, d))
    glued = []
    for j in range(1, len(seq)):
        tri = tris[j]
        third = [chord(p, q) for p, q in itertools.combinations(tri, 2) if chord(p, q) not in (seq[j - 1], seq[j])]
        glued.append(third[0])
    # union-find over (tile, polygon vertex)
    parent: dict = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for j, g in enumerate(glued):
        for p in g:
            ra, rb = find((j, p)), find((j + 1, p))
            if ra != rb:
                parent[rb] = ra
    for j, tile in enumerate(tiles):
        for p in tile.corners:
            find((j, p))
    roots = sorted({find(x) for x in list(parent)})
    vid = {r: i for i, r in enumerate(roots)}
    edges: dict = {}
    for j, tile in enumerate(tiles):
        for s in tile.sides:
            p, q = s
            a, b = sorted((vid[find((j, p))], vid[find((j, q))]))
            key = (a, b, s)
            interior = (j > 0 and s == glued[j - 1]) or (j < len(glued) and s == glued[j])
            edges[key] = not interior
    edge_list = [(a, b, s, bd) for (a, b, s), bd in sorted(edges.items())]
    return SnakeGraph(c, tiles, glued, roots, edge_list)


def perfect_matchings(G: SnakeGraph) -> list[tuple[int, ...]]:
    """All perfect matchings, as sorted tuples of edge indices, in canonical order."""
    nv = len(G.vertices)
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(nv)}
    for idx, (a, b, _, _) in enumerate(G.edges):
        adj[a].append((b, idx))
        adj[b].append((a, idx))
    out = []

    def extend(covered: frozenset, chosen: list[int]):
        free = next((v for v in range(nv) if v not in covered), None)
        if free is None:
            out.append(tuple(sorted(chosen)))
            return
        for w, idx in adj[free]:
            if w not in covered:
                extend(covered | {free, w}, chosen + [idx])

    extend(frozenset(), [])
    return sorted(out)


def matching_monomial(G: SnakeGraph, T: Triangulation, P: Sequence[int]) -> tuple[int, ...]:
    """Exponent vector of x(P) over the edges of T."""
    e = [0] * T.m
    for idx in P:
        e[T.index(G.edges[idx][2])] += 1
    return tuple(e)


def crossing_monomial(T: Triangulation, c: Chord) -> tuple[int, ...]:
    e = [0] * T.m
    for d in crossing_sequence(c, T):
        e[T.index(d)] += 1
    return tuple(e)


def boundary_matchings(G: SnakeGraph) -> list[tuple[int, ...]]:
    bd = set(G.boundary_edges)
    return [P for P in perfect_matchings(G) if set(P) <= bd]


def _side_at_start(G: SnakeGraph, T: Triangulation) -> Chord:
    """The side of the first tile that follows its diagonal counterclockwise around the start point."""
    tile = G.tiles[0]
    u = G.arc[0]
    a, b = tile.diagonal
    # the first triangle is (a, b, u); pick the side through u whose other end
    # comes first counterclockwise after u
    first = a if _ccw_dist(u, a, T.n) < _ccw_dist(u, b, T.n) else b
    return chord(u, first)


def minimal_matching(T: Triangulation, c: Chord) -> tuple[int, ...]:
    """The boundary-only matching P_- of the snake graph, by the start-triangle rule."""
    G = snake_graph(T, c)
    pair = boundary_matchings(G)
    if len(pair) != 2:
        raise AssertionError(f"expected two boundary matchings, found {len(pair)}")
    marker = _side_at_start(G, T)
    chosen = [P for P in pair if any(G.edges[i][2] == marker for i in P)]
    if len(chosen) != 1:
        raise AssertionError("start-triangle rule does not single out one boundary matching")
    return chosen[0]


def msw_g_vector(T: Triangulation, c: Chord, reference: Sequence[int] | None = None) -> tuple[int, ...]:
    """Exponent of x(P_-)/cross(T, c).

    With ``reference`` given, P_- is the boundary matching reproducing it and a
    mismatch raises; otherwise P_- comes from :func:`minimal_matching`.
    """
    c = chord(*c)
    if T.has_edge(c):
        g = [0] * T.m
        g[T.index(c)] = 1
        return tuple(g)
    G = snake_graph(T, c)
    cross = crossing_monomial(T, c)
    cands = []
    for P in boundary_matchings(G):
        mono = matching_monomial(G, T, P)
        cands.append(tuple(a - b for a, b in zip(mono, cross)))
    if reference is not None:
        reference = tuple(reference)
        if reference not in cands:
            raise AssertionError(f"no boundary matching of {c} reproduces the g-vector {reference}")
        return reference
    mono = matching_monomial(G, T, minimal_matching(T, c))
    return tuple(a - b for a, b in zip(mono, cross))


def all_arcs(n: int) -> list[Chord]:
    return [c for c in itertools.combinations(range(n), 2) if not is_side(c, n)]


# boundary completion of arc systems

def a0_side_completion(n: int, diagonals: dict) -> tuple[tuple[Fraction, ...], tuple[int, ...] | None]:
    """Side weights cancelling every vertex sum of the given diagonals.

    Returns a particular solution (side i joins i and i+1) and, for even n,
    the free direction. Raises ValueError when no solution exists.
    """
    c = [Fraction(0)] * n
    for (a, b), w in diagonals.items():
        c[a] += Fraction(w)
        c[b] += Fraction(w)
    # sigma_{v-1} + sigma_v = -c_v; propagate from sigma_{n-1} = s
    lin = Fraction(0)  # sigma_v = lin + sign * s
    sign = 1
    for v in range(n):
        lin, sign = -c[v] - lin, -sign
    # lin, sign now describe sigma_{n-1}
    if n % 2:
        start = lin / 2
        kernel = None
    else:
        if lin != 0:
            raise ValueError("the alternating vertex sum does not vanish")
        start = Fraction(0)
        kernel = tuple((-1) ** (v + 1) for v in range(n))
    sides = []
    prev = start
    for v in range(n):
        prev = -c[v] - prev
        sides.append(prev)
    return tuple(sides), kernel


def complete_a0(n: int, diagonals: dict, shift=0) -> MarkedArcSet:
    """The diagonals plus side arcs making every vertex sum zero (shift moves along the free direction)."""
    sides, kernel = a0_side_completion(n, diagonals)
    arcs = {chord(*d): Fraction(w) for d, w in diagonals.items()}
    for i, s in enumerate(sides):
        if kernel is not None:
            s += kernel[i] * Fraction(shift)
        arcs[side_chord(i, n)] = arcs.get(side_chord(i, n), Fraction(0)) + s
    return MarkedArcSet.from_dict(n, arcs)


def random_noncrossing_diagonals(rng, n: int, max_weight: int = 2, density: float = 0.6) -> dict[Chord, int]:
    arcs = all_arcs(n)
    rng.shuffle(arcs)
    chosen: dict[Chord, int] = {}
    for c in arcs:
        if rng.random() < density and not any(chord_crossing_number(c, d) for d in chosen):
            chosen[c] = rng.randint(1, max_weight)
    return chosen


def random_a0_arcs(rng, n: int, max_weight: int = 2, half_integral: bool = False, density: float = 0.6) -> MarkedArcSet:
    """A random arc system with vanishing vertex sums; even n may get a half-integral side shift."""
    while True:
        diags = random_noncrossing_diagonals(rng, n, max_weight, density)
        try:
            _, kernel = a0_side_completion(n, diags)
        except ValueError:
            continue
        shift = Fraction(0)
        if kernel is not None:
            shift = Fraction(rng.randint(-4, 4), 2 if half_integral else 1)
        return complete_a0(n, diags, shift)


def normalize_doubled(C: MarkedArcSet, C_mirror: MarkedArcSet) -> tuple[MarkedArcSet, MarkedArcSet]:
    """Move the side weights of C onto the mirror half (frozen B's are 1, so the duality function is unchanged)."""
    if C.n != C_mirror.n:
        raise ValueError("the two halves live on different polygons")
    mirror = C_mirror.as_dict()
    for c, w in C.side_arcs().items():
        mirror[c] = mirror.get(c, Fraction(0)) - w
    return MarkedArcSet.from_dict(C.n, C.diagonal_arcs()), MarkedArcSet.from_dict(C.n, mirror)


def doubled_has_parity(C: MarkedArcSet, C_mirror: MarkedArcSet) -> bool:
    a, b = normalize_doubled(C, C_mirror)
    return all(w.denominator == 1 for _, w in a.arcs + b.arcs)


def weighted_noncrossing_diagonals(n: int, max_total: int):
    """Every noncrossing diagonal system with positive integer weights of total at most max_total."""
    arcs = all_arcs(n)

    def extend(start: int, chosen: list, budget: int):
        yield dict(chosen)
        for i in range(start, len(arcs)):
            c = arcs[i]
            if any(chord_crossing_number(c, d) for d, _ in chosen):
                continue
            for w in range(1, budget + 1):
                yield from extend(i + 1, chosen + [(c, w)], budget - w)

    yield from extend(0, [], max_total)


def curves_cross(c1: tuple[int, int], c2: tuple[int, int]) -> bool:
    """Curves between boundary segments must cross iff their segments strictly interleave."""
    a, b = c1
    c, d = c2
    if len({a, b, c, d}) < 4:
        return False
    return (a < c < b) != (a < d < b)


def random_disk_lamination(rng, n: int, curves: int = 4, max_weight: int = 3,
                           negative_special: bool = True) -> DiskLamination:
    """Disjoint curves with random weights; special curves may carry negative weights."""
    chosen: dict[tuple[int, int], int] = {}
    for _ in range(curves):
        s1, s2 = rng.sample(range(n), 2)
        cv = _curve(s1, s2, n)
        if any(curves_cross(cv, other) for other in chosen):
            continue
        w = rng.randint(1, max_weight)
        if negative_special and is_special_curve(cv, n) and rng.random() < 0.5:
            w = -w
        chosen[cv] = chosen.get(cv, 0) + w
    return DiskLamination.from_dict(n, chosen)
