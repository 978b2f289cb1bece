"""Randomized and exhaustive verification suites.

Each suite takes a level ("desk" runs the full acceptance sizes, "quick" a
small smoke run), a seed and an optional trial count, and returns a
``SuiteResult``. Every suite compares two independent computations; none of
them checks a value against itself.
"""

from __future__ import annotations

import math
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .cluster import (
    UniversalSemifield,
    initial_labeled_seed,
    mutate_d_chart,
    mutate_labeled,
    mutate_x_chart,
    principal_seed,
    separation_reconstruct,
    symbolic_chart,
)
from .errors import DomainError
from .exact import OmegaScalar, SFRat, sfr_equal, substitute
from .hyperbolic import (
    a_flip_check,
    cross_ratio_check,
    double_b_check,
    integrated_lambda_length,
    ptolemy_check,
    quadrilateral,
    random_moebius,
    random_polygon,
    random_redecoration,
    x_flip_check,
)
from .polygon import (
    MarkedArcSet,
    Triangulation,
    a_coords,
    all_arcs,
    all_triangulations,
    compatible_pair,
    complete_a0,
    doubled_has_parity,
    exchange_from_triangulation,
    flip,
    flip_word,
    msw_g_vector,
    normalize_doubled,
    path_to_arc,
    perfect_matchings,
    random_a0_arcs,
    random_disk_lamination,
    snake_graph,
    x_coords,
)
from .quantum import (
    QTElem,
    QSeries,
    ad_psi,
    arc_data,
    atlas_for,
    d_torus,
    ia_classical,
    ia_q,
    id_classical,
    id_q,
    initial_quantum_state,
    mu_prime_image,
    mu_q_closed,
    mu_sharp_closed,
    ordered_monomial,
    psi_truncated,
    quantum_arc_data,
    quantum_mutate_seed,
    quantum_mutate_word,
    star,
    x_torus,
)
from .seed import (
    LatticeSeed,
    Seed,
    mutate_integer_matrix,
    mutate_lattice,
    mutate_matrix,
    mutate_pair,
    principal_pair,
)
from .tropical import (
    pl_compose_hinged,
    pl_equal,
    pl_eval,
    random_point,
    trop_d_mutation_hinged,
    trop_mutate_a,
    trop_mutate_d,
    trop_mutate_x,
)

LEVELS = ("desk", "quick")


@dataclass
class SuiteResult:
    name: str
    passed: bool
    seconds: float
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"suite": self.name, "passed": self.passed, "seconds": round(self.seconds, 3), "detail": self.detail}

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name} ({self.seconds:.1f}s) {self.detail}"


def _size(level: str, desk: int, quick: int, trials: int | None) -> int:
    if trials is not None:
        return trials
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    return desk if level == "desk" else quick


@lru_cache(maxsize=None)
def _triangulations(n: int) -> tuple[Triangulation, ...]:
    return tuple(all_triangulations(n))


def _random_triangulation(rng: random.Random, n: int) -> Triangulation:
    ts = _triangulations(n)
    return ts[rng.randrange(len(ts))]


def _random_skew(rng: random.Random, m: int, bound: int = 3) -> list[list[int]]:
    eps = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            e = rng.randint(-bound, bound)
            eps[i][j], eps[j][i] = e, -e
    return eps


def _random_seed(rng: random.Random, m: int, bound: int = 3) -> Seed:
    frozen = {i for i in range(1, m) if rng.random() < 0.25}
    return Seed(_random_skew(rng, m, bound), frozenset(frozen))


# 1. involutivity

def _involution_cases(rng: random.Random, trials: int) -> dict[str, int]:
    failures = {key: 0 for key in (
        "matrix", "lattice", "labeled_seed", "x_chart", "d_chart",
        "tropical_a", "tropical_x", "tropical_d", "compatible_pair", "quantum_seed",
    )}
    for _ in range(trials):
        m = rng.randint(1, 8)
        seed = _random_seed(rng, m)
        k = rng.choice(seed.mutable)
        eps = seed.eps
        eps2 = mutate_integer_matrix(eps, k)

        failures["matrix"] += mutate_matrix(mutate_matrix(seed, k), k) != seed

        # e''_i = e_i + eps_ik e_k: the seed and the form come back, the basis by a shear
        ls = LatticeSeed.standard(seed)
        ls = _apply(ls, mutate_lattice, [rng.choice(seed.mutable) for _ in range(rng.randint(0, 3))])
        base = ls.to_seed()
        back = mutate_lattice(mutate_lattice(ls, k), k)
        sheared = all(
            back.vector(i) == tuple(a + (base.eps[i][k] if i != k else 0) * b
                                    for a, b in zip(ls.vector(i), ls.vector(k)))
            for i in range(m)
        )
        failures["lattice"] += not (back.to_seed() == base and back.form == ls.form and sheared)

        if m <= 6:
            sigma = principal_seed(seed)
            twice = mutate_labeled(mutate_labeled(sigma, k), k)
            failures["labeled_seed"] += not (
                twice.seed == sigma.seed
                and all(sfr_equal(a, b) for a, b in zip(twice.x, sigma.x))
                and twice.y == sigma.y
            )

        X = symbolic_chart(m)
        X2 = mutate_x_chart(mutate_x_chart(X, k, eps), k, eps2)
        failures["x_chart"] += not all(sfr_equal(a, b) for a, b in zip(X, X2))

        V = symbolic_chart(2 * m)
        B1, Y1 = mutate_d_chart(V[:m], V[m:], k, eps)
        B2, Y2 = mutate_d_chart(B1, Y1, k, eps2)
        failures["d_chart"] += not all(sfr_equal(a, b) for a, b in zip(V, B2 + Y2))

        a = random_point(rng, m)
        failures["tropical_a"] += trop_mutate_a(trop_mutate_a(a, k, eps), k, eps2) != a
        x = random_point(rng, m)
        failures["tropical_x"] += trop_mutate_x(trop_mutate_x(x, k, eps), k, eps2) != x
        b = random_point(rng, m)
        b1, x1 = trop_mutate_d(b, x, k, eps)
        failures["tropical_d"] += trop_mutate_d(b1, x1, k, eps2) != (b, x)

        n = rng.randint(1, 4)
        pair = principal_pair(_random_skew(rng, n, 2), rng.randint(1, 4))
        for j in [rng.randrange(n) for _ in range(rng.randint(0, 2))]:
            pair = mutate_pair(pair, j, rng.choice((1, -1)))
        kk = rng.randrange(n)
        s1, s2 = rng.choice((1, -1)), rng.choice((1, -1))
        failures["compatible_pair"] += mutate_pair(mutate_pair(pair, kk, s1), kk, s2) != pair

        qn = rng.randint(1, 4)
        qpair = principal_pair(_random_skew(rng, qn, 2), 1)
        st = quantum_mutate_word(initial_quantum_state(qpair), [rng.randrange(qn) for _ in range(rng.randint(0, 2))])
        kq = rng.randrange(qn)
        st2 = quantum_mutate_seed(quantum_mutate_seed(st, kq), kq)
        failures["quantum_seed"] += not (st2.pair == st.pair and st2.variables == st.variables)
    return failures


def _apply(obj, fn, word):
    for k in word:
        obj = fn(obj, k)
    return obj


def suite_involution(level="desk", seed=0, trials=None) -> SuiteResult:
    t = time.perf_counter()
    size = _size(level, 500, 40, trials)
    failures = _involution_cases(random.Random(seed), size)
    return SuiteResult("involution", not any(failures.values()), time.perf_counter() - t,
                       {"trials": size, "failures": failures})


# 2. flip-graph census

def suite_census(level="desk", seed=0, trials=None) -> SuiteResult:
    t = time.perf_counter()
    top = 10 if level == "desk" else 8
    counts = {n: len(all_triangulations(n)) for n in range(4, top + 1)}
    catalan = {n: math.comb(2 * (n - 2), n - 2) // (n - 1) for n in counts}
    return SuiteResult("census", counts == catalan, time.perf_counter() - t,
                       {"counts": counts, "catalan": catalan})


# 3. Laurent positivity

def _positive_laurent(x: SFRat) -> bool:
    if not x.is_laurent():
        return False
    return all(Fraction(c).denominator == 1 and c > 0 for _, c in x.as_laurent().items())


def suite_laurent(level="desk", seed=0, trials=None) -> SuiteResult:
    """Every arc in every initial chart, then random words of length 12.

    For n <= 9 the flip graph has diameter at most 12, so the first pass
    covers every seed reachable by such words.
    """
    t = time.perf_counter()
    rng = random.Random(seed)
    words = _size(level, 25, 3, trials)
    top = 9 if level == "desk" else 7
    checked = 0
    bad = []
    for n in range(4, top + 1):
        for T in _triangulations(n):
            sigma0 = initial_labeled_seed(exchange_from_triangulation(T))
            for c in all_arcs(n):
                if T.has_edge(c):
                    continue
                path = path_to_arc(T, c)
                x = _apply(sigma0, mutate_labeled, path).x[flip_word(T, path).index(c)]
                checked += 1
                if not _positive_laurent(x):
                    bad.append((n, T.to_json(), c))
    for n in range(4, top + 1):
        for _ in range(words):
            T = _random_triangulation(rng, n)
            s = exchange_from_triangulation(T)
            sigma = initial_labeled_seed(s)
            for _ in range(12):
                k = rng.randrange(n - 3)
                sigma = mutate_labeled(sigma, k)
                checked += 1
                if not _positive_laurent(sigma.x[k]):
                    bad.append((n, T.to_json()))
    return SuiteResult("laurent", not bad, time.perf_counter() - t,
                       {"variables_checked": checked, "failures": len(bad)})


# 4. separation formula

def suite_separation(level="desk", seed=0, trials=None) -> SuiteResult:
    """Direct mutation with universal coefficients against F(y_hat)/F|(y) x^g."""
    t = time.perf_counter()
    rng = random.Random(seed)
    top = 9 if level == "desk" else 6
    checked = 0
    bad = []
    charts = 0
    for n in range(4, top + 1):
        if n <= 7:
            Ts = list(_triangulations(n))
        else:
            Ts = [Triangulation.fan(n)] + [_random_triangulation(rng, n) for _ in range(9)]
        for T in Ts:
            charts += 1
            s = exchange_from_triangulation(T)
            sf = UniversalSemifield(n - 3)
            ys = [sf.generator(i) for i in range(n - 3)]
            sigma0 = initial_labeled_seed(s, sf, ys + [sf.one()] * (T.m - (n - 3)))
            for c in all_arcs(n):
                if T.has_edge(c):
                    continue
                path = path_to_arc(T, c)
                direct = _apply(sigma0, mutate_labeled, path).x[flip_word(T, path).index(c)]
                F, g = arc_data(T, c)
                rebuilt = separation_reconstruct(F, g, s, sf, ys, sigma0.x)
                checked += 1
                if not sfr_equal(direct, rebuilt):
                    bad.append((n, T.to_json(), c))
    return SuiteResult("separation", not bad, time.perf_counter() - t,
                       {"charts": charts, "arcs_checked": checked, "failures": bad[:3]})


# 5. snake graphs

def suite_snake(level="desk", seed=0, trials=None) -> SuiteResult:
    t = time.perf_counter()
    top = 8 if level == "desk" else 6
    checked = 0
    bad = []
    for n in range(4, top + 1):
        for T in _triangulations(n):
            for c in all_arcs(n):
                if T.has_edge(c):
                    continue
                F, g = arc_data(T, c)
                count = len(perfect_matchings(snake_graph(T, c)))
                checked += 1
                if count != sum(coef for _, coef in F.items()) or msw_g_vector(T, c) != g:
                    bad.append((n, T.to_json(), c))
    arc_data.cache_clear()
    return SuiteResult("snake", not bad, time.perf_counter() - t,
                       {"pairs_checked": checked, "failures": bad[:3]})


# 6. tropical mutation against recomputed crossing numbers

def suite_tropical(level="desk", seed=0, trials=None) -> SuiteResult:
    t = time.perf_counter()
    rng = random.Random(seed)
    size = _size(level, 1000, 100, trials)
    bad = 0
    for _ in range(size):
        n = rng.randint(4, 10)
        T = flip_word(Triangulation.fan(n), [rng.randrange(n - 3) for _ in range(3 * n)])
        k = rng.randrange(n - 3)
        T2 = flip(T, k)
        lam = random_disk_lamination(rng, n, rng.randint(1, 6))
        s = exchange_from_triangulation(T)
        a_ok = trop_mutate_a(a_coords(lam, T), k, s.eps) == a_coords(lam, T2)
        x_ok = trop_mutate_x(x_coords(lam, T), k, s.principal_part()) == x_coords(lam, T2)
        bad += not (a_ok and x_ok)
    return SuiteResult("tropical", bad == 0, time.perf_counter() - t, {"cases": size, "failures": bad})


# 7. quantum dilogarithm identities

def _psi_functional_equation(order: int) -> bool:
    """Psi(q^2 x) = (1 + q x) Psi(x) on truncated series."""
    psi = psi_truncated(order)
    torus = psi.num.torus
    scaled = QTElem(torus, {e: c.shift(8 * e[0]) for e, c in psi.num.items()})
    lhs = QSeries(scaled, psi.den, 0, 0, order)
    factor = QTElem.one(torus) + QTElem.monomial(torus, (1,), OmegaScalar.q(1))
    rhs = QSeries(factor, OmegaScalar({0: 1}), 0, 0, order) * psi
    return lhs.matches(rhs)


def _closed_form_cases(level: str):
    bound = 3 if level == "desk" else 1
    for e in range(-bound, bound + 1):
        yield [[0, e], [-e, 0]]
    if level == "desk":
        # rank three: the B-image depends on a whole row of eps
        for e1, e2 in ((1, -2), (-3, 2), (2, 3)):
            yield [[0, e1, e2], [-e1, 0, 1], [-e2, -1, 0]]


def suite_dilogarithm(level="desk", seed=0, trials=None) -> SuiteResult:
    t = time.perf_counter()
    order = 10 if level == "desk" else 6
    eq_order = 12 if level == "desk" else 8
    detail = {"functional_equation": _psi_functional_equation(eq_order)}
    bad = []
    checked = 0
    for eps in _closed_form_cases(level):
        n = len(eps)
        for sig in ("x", "d"):
            torus = x_torus(eps) if sig == "x" else d_torus(eps)
            V = symbolic_chart(n if sig == "x" else 2 * n)
            for gen in (("X",) if sig == "x" else ("X", "B")):
                for i in range(n):
                    for k in range(n):
                        if n == 3 and (gen, sig) != ("B", "d") and i != 0:
                            continue
                        g = QTElem.generator(torus, i if gen == "X" else n + i)
                        sharp = ad_psi(g, k, order, sig).matches(mu_sharp_closed(gen, i, k, eps, sig).expand(k, order))
                        full_form = mu_q_closed(gen, i, k, eps, sig)
                        full = ad_psi(mu_prime_image(gen, i, k, eps, sig), k, order, sig).matches(full_form.expand(k, order))
                        if sig == "x":
                            ref = mutate_x_chart(V, k, eps)[i]
                        else:
                            B2, X2 = mutate_d_chart(V[n:], V[:n], k, eps)
                            ref = (X2 if gen == "X" else B2)[i]
                        limit = sfr_equal(full_form.at_one(), ref)
                        checked += 1
                        if not (sharp and full and limit):
                            bad.append((eps, sig, gen, i, k, sharp, full, limit))
    detail.update({"closed_forms_checked": checked, "order": order, "failures": bad[:3]})
    return SuiteResult("dilogarithm", detail["functional_equation"] and not bad, time.perf_counter() - t, detail)


# 8. compatibility of the polygon pairs

def suite_compatibility(level="desk", seed=0, trials=None) -> SuiteResult:
    t = time.perf_counter()
    rng = random.Random(seed)
    top = 9 if level == "desk" else 7
    checked = 0
    bad = 0
    for n in range(4, top + 1):
        for T in _triangulations(n):
            p = compatible_pair(T)
            want = tuple(tuple(4 if i == j else 0 for i in range(T.m)) for j in range(n - 3))
            checked += 1
            bad += p.compatibility_product() != want
    size = _size(level, 100, 20, trials)
    sign_bad = 0
    for _ in range(size):
        if rng.random() < 0.5:
            p = compatible_pair(_random_triangulation(rng, rng.randint(4, 9)))
        else:
            nn = rng.randint(1, 4)
            p = principal_pair(_random_skew(rng, nn, 3), rng.randint(1, 3))
        for j in [rng.randrange(p.n) for _ in range(rng.randint(0, 4))]:
            p = mutate_pair(p, j)
        k = rng.randrange(p.n)
        sign_bad += mutate_pair(p, k, 1) != mutate_pair(p, k, -1)
    return SuiteResult("compatibility", bad == 0 and sign_bad == 0, time.perf_counter() - t,
                       {"triangulations": checked, "law_failures": bad, "sign_cases": size, "sign_failures": sign_bad})


# 9. quantum F-polynomials

def suite_quantum_f(level="desk", seed=0, trials=None) -> SuiteResult:
    t = time.perf_counter()
    rng = random.Random(seed)
    top = 8 if level == "desk" else 6
    checked = 0
    bad = []
    for n in range(4, top + 1):
        for T in {Triangulation.fan(n), _random_triangulation(rng, n)}:
            atlas = atlas_for(T)
            for c in all_arcs(n):
                if T.has_edge(c):
                    continue
                try:
                    Fq, gq = quantum_arc_data(T, c, atlas)
                except AssertionError as exc:
                    bad.append((n, c, str(exc)))
                    continue
                F, g = arc_data(T, c)
                checked += 1
                if not (Fq.has_positive_q_coefficients() and Fq.at_one() == F and tuple(gq) == tuple(g)):
                    bad.append((n, c))
    return SuiteResult("quantum_f", not bad, time.perf_counter() - t, {"arcs_checked": checked, "failures": bad[:3]})


# 10. quantum duality for A-laminations

def highest_term_ok(x: QTElem) -> bool:
    """One dominant exponent a, and its term is the Weyl-ordered monomial X^a."""
    exps = list(x.terms)
    top = [e for e in exps if all(all(p >= q for p, q in zip(e, f)) for f in exps)]
    if len(top) != 1:
        return False
    a = top[0]
    if x.coefficient(a) != OmegaScalar({0: 1}):
        return False
    eps = x.torus.form
    s = sum(eps[i][j] * a[i] * a[j] for i in range(len(a)) for j in range(i + 1, len(a)))
    return ordered_monomial(x.torus, a).scale(OmegaScalar.q(-s)) == QTElem.monomial(x.torus, a)


def _ia_ok(lam: MarkedArcSet, T: Triangulation, atlas) -> bool:
    x = ia_q(lam, T, atlas)
    return (x.has_positive_q_coefficients() and star(x) == x and highest_term_ok(x)
            and sfr_equal(SFRat(x.at_one()), ia_classical(lam, T)))


def suite_ia(level="desk", seed=0, trials=None) -> SuiteResult:
    t = time.perf_counter()
    rng = random.Random(seed)
    top = 8 if level == "desk" else 6
    total = _size(level, 200, 15, trials)
    ns = list(range(4, top + 1))
    singles = 0
    outside = 0
    bad = []
    for n in ns:
        T = Triangulation.fan(n)
        atlas = atlas_for(T)
        for c in all_arcs(n):
            try:
                lam = complete_a0(n, {c: 1})
            except ValueError:
                # even n: an arc joining vertices of equal parity has no A0 completion
                outside += 1
                continue
            singles += 1
            if not _ia_ok(lam, T, atlas):
                bad.append((n, c))
    for i in range(total):
        n = ns[i % len(ns)]
        T = _random_triangulation(rng, n)
        lam = random_a0_arcs(rng, n, 2)
        if not _ia_ok(lam, T, atlas_for(T)):
            bad.append(lam.to_json())
    return SuiteResult("ia", not bad, time.perf_counter() - t,
                       {"single_arcs": singles, "without_completion": outside, "random": total, "failures": bad[:3]})


# 11. duality for doubled laminations

def pullback_agrees(C: MarkedArcSet, C_mirror: MarkedArcSet, T: Triangulation, form) -> bool:
    """Substitute B = A_mirror / A and X = A^eps and compare with [C_mirror](A_mirror) / [C](A)."""
    m = T.m
    n = T.n - 3
    s = exchange_from_triangulation(T)
    eps = s.eps
    nv = m + n
    A = [SFRat.var(nv, i) for i in range(m)]
    A_mirror = [SFRat.var(nv, m + j) for j in range(n)] + A[n:]
    B = [A_mirror[j] / A[j] for j in range(n)]

    def x_of(vals):
        out = []
        for j in range(n):
            v = SFRat.const(nv, 1)
            for i in range(m):
                if eps[j][i]:
                    v = v * vals[i] ** eps[j][i]
            out.append(v)
        return out

    XA = x_of(A)
    r = form.to_sfrat(s.principal_part())
    value = substitute(r.num, B + XA) / substitute(r.den, B + XA)

    def arc_product(lam, vals):
        v = SFRat.const(nv, 1)
        xs = x_of(vals)
        for c, w in lam.arcs:
            F, g = arc_data(T, c)
            term = substitute(F, xs)
            for i, gi in enumerate(g):
                if gi:
                    term = term * vals[i] ** gi
            v = v * term ** int(w)
        return v

    return sfr_equal(value, arc_product(C_mirror, A_mirror) / arc_product(C, A))


def _random_doubled(rng: random.Random, n: int):
    C = random_a0_arcs(rng, n, 2, half_integral=True)
    C_mirror = random_a0_arcs(rng, n, 2, half_integral=True)
    return C, C_mirror


def _chart_independent(rng: random.Random, C, C_mirror, T: Triangulation, k: int) -> tuple[bool, bool]:
    T2 = flip(T, k)
    e1 = exchange_from_triangulation(T).principal_part()
    e2 = exchange_from_triangulation(T2).principal_part()
    E1 = id_classical(C, C_mirror, T).tropical(e1)
    E2 = id_classical(C, C_mirror, T2).tropical(e2)
    composed = pl_compose_hinged(E2, *trop_d_mutation_hinged(e1, k))
    envelope = pl_equal(E1, composed)
    pointwise = True
    n = T.n - 3
    for _ in range(5):
        b = random_point(rng, n)
        x = random_point(rng, n)
        b2, x2 = trop_mutate_d(b, x, k, e1)
        pointwise &= pl_eval(E1, b + x) == pl_eval(E2, b2 + x2)
    return envelope, pointwise


def suite_id(level="desk", seed=0, trials=None) -> SuiteResult:
    t = time.perf_counter()
    rng = random.Random(seed)
    total = _size(level, 100, 8, trials)
    shape_cases = _size(level, 40, 6, None if trials is None else max(1, trials // 2))
    ns = [4, 5, 6, 7]
    shape_bad = 0
    parity = {"agree": 0, "disagree": 0}
    shape_done = 0
    while shape_done < shape_cases:
        n = rng.choice(ns)
        T = _random_triangulation(rng, n)
        C, C_mirror = normalize_doubled(*_random_doubled(rng, n))
        form = id_classical(C, C_mirror, T)
        parity["agree" if doubled_has_parity(C, C_mirror) == form.has_integral_x_exp() else "disagree"] += 1
        if not form.has_integral_x_exp():
            try:
                id_q(C, C_mirror, T)
                shape_bad += 1
            except DomainError as exc:
                shape_bad += exc.code != "a0_parity"
            continue
        shape_done += 1
        quantum = id_q(C, C_mirror, T).at_one()
        structural = (
            [f[0] for f in form.num_factors] == sorted(C_mirror.diagonal_arcs())
            and [f[0] for f in form.den_factors] == sorted(C.diagonal_arcs())
            and all(F == arc_data(T, c)[0] for c, _, F in form.num_factors + form.den_factors)
            and form.omega_exp == 0
        )
        same = (quantum.num_product == form.num_product and quantum.den_product == form.den_product
                and quantum.b_exp == form.b_exp and quantum.x_exp_doubled == form.x_exp_doubled)
        shape_bad += not (structural and same and pullback_agrees(C, C_mirror, T, form))
    chart_bad = 0
    for _ in range(total):
        n = rng.choice(ns)
        T = _random_triangulation(rng, n)
        C, C_mirror = normalize_doubled(*_random_doubled(rng, n))
        form = id_classical(C, C_mirror, T)
        parity["agree" if doubled_has_parity(C, C_mirror) == form.has_integral_x_exp() else "disagree"] += 1
        envelope, pointwise = _chart_independent(rng, C, C_mirror, T, rng.randrange(n - 3))
        chart_bad += not (envelope and pointwise)
    ok = shape_bad == 0 and parity["disagree"] == 0 and chart_bad == 0
    return SuiteResult("id", ok, time.perf_counter() - t,
                       {"shape_cases": shape_cases, "shape_failures": shape_bad, "parity": parity,
                        "chart_cases": total, "chart_failures": chart_bad})


# 12. hyperbolic oracle

def suite_hyperbolic(level="desk", seed=0, trials=None) -> SuiteResult:
    t = time.perf_counter()
    rng = random.Random(seed)
    size = _size(level, 1000, 100, trials)
    worst = {"ptolemy": 0.0, "cross_ratio": 0.0, "a_flip": 0.0, "x_flip": 0.0, "d_flip": 0.0,
             "moebius": 0.0, "quadrature": 0.0}

    def record(key, value):
        worst[key] = max(worst[key], value)

    for trial in range(size):
        n = rng.randint(4, 8)
        P = random_polygon(rng, n, rng.random() < 0.3)
        Q = random_redecoration(rng, P)
        T = _random_triangulation(rng, n)
        k = rng.randrange(n - 3)
        record("ptolemy", ptolemy_check(P, quadrilateral(T, k)))
        record("cross_ratio", max(cross_ratio_check(P, T, k), cross_ratio_check(Q, T, k)))
        record("a_flip", a_flip_check(P, T, k))
        record("x_flip", x_flip_check(P, T, k))
        record("d_flip", double_b_check(P, Q, T, k))
        i, j = rng.sample(range(n), 2)
        M = P.moebius(*random_moebius(rng))
        record("moebius", abs(M.lambda_length(i, j) - P.lambda_length(i, j)) / P.lambda_length(i, j))
        if trial % 5 == 0:
            record("quadrature", abs(integrated_lambda_length(P, i, j) - P.lambda_length(i, j)) / P.lambda_length(i, j))
    ok = all(v < 1e-9 for v in worst.values())
    return SuiteResult("hyperbolic", ok, time.perf_counter() - t,
                       {"configurations": size, "max_residual": {k: float(f"{v:.3e}") for k, v in worst.items()}})


SUITES = {
    "involution": suite_involution,
    "census": suite_census,
    "laurent": suite_laurent,
    "separation": suite_separation,
    "snake": suite_snake,
    "tropical": suite_tropical,
    "dilogarithm": suite_dilogarithm,
    "compatibility": suite_compatibility,
    "quantum_f": suite_quantum_f,
    "ia": suite_ia,
    "id": suite_id,
    "hyperbolic": suite_hyperbolic,
}


def run_suite(name: str, level: str = "desk", seed: int = 0, trials: int | None = None) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    return SUITES[name](level=level, seed=seed, trials=trials)


def _run_packed(args) -> SuiteResult:
    return run_suite(*args)


def run_all(level: str = "desk", seed: int = 0, trials: int | None = None,
            workers: int | None = None) -> list[SuiteResult]:
    """Every suite, in parallel processes when workers > 1 (default: CPU count, capped by CE_THREADS)."""
    if workers is None:
        workers = os.cpu_count() or 1
        cap = os.environ.get("CE_THREADS")
        if cap:
            workers = min(workers, int(cap))
    jobs = [(name, level, seed, trials) for name in sorted(SUITES)]
    if workers <= 1:
        return [_run_packed(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_packed, jobs))
