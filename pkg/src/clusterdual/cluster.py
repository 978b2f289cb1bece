"""Classical cluster dynamics over exact fractions.

Conventions: the exchange matrix of a seed is ``eps``; coefficient formulas
use ``b_ij = eps_ji``. Cluster variables live in the field of fractions of
the initial variables x_1..x_m (frozen ones included) together with the
generators of the coefficient semifield.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import LaurentPoly, SFRat, substitute
from .seed import Seed, mutate_matrix


def _pos(x: int) -> int:
    return x if x > 0 else 0


def _sgn(x: int) -> int:
    return (x > 0) - (x < 0)


# coefficient semifields

class TropicalSemifield:
    """Trop(u_1..u_p): Laurent monomials with u^a (+) u^b = u^min(a,b)."""

    laurent = True

    def __init__(self, ngens: int):
        self.ngens = ngens

    def one(self):
        return (0,) * self.ngens

    def generator(self, i: int):
        e = [0] * self.ngens
        e[i] = 1
        return tuple(e)

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def power(self, a, k: int):
        return tuple(k * x for x in a)

    def add(self, a, b):
        return tuple(min(x, y) for x, y in zip(a, b))

    def embed(self, a, offset: int, nvars: int) -> SFRat:
        e = [0] * nvars
        e[offset:offset + self.ngens] = a
        return SFRat.monomial(e)

    def eval_poly(self, F: LaurentPoly, ys: Sequence):
        if not F.has_nonnegative_coefficients():
            raise ValueError("semifield evaluation needs nonnegative coefficients")
        out = None
        for e, _ in F.items():
            t = self.one()
            for y, k in zip(ys, e):
                t = self.mul(t, self.power(y, k))
            out = t if out is None else self.add(out, t)
        return out

    def __eq__(self, other):
        return isinstance(other, TropicalSemifield) and other.ngens == self.ngens


class TrivialSemifield:
    """The one-element semifield {1}."""

    laurent = True
    ngens = 0

    def one(self):
        return ()

    def mul(self, a, b):
        return ()

    def power(self, a, k):
        return ()

    def add(self, a, b):
        return ()

    def embed(self, a, offset, nvars) -> SFRat:
        return SFRat.const(nvars, 1)

    def eval_poly(self, F, ys):
        return ()

    def __eq__(self, other):
        return isinstance(other, TrivialSemifield)


class UniversalSemifield:
    """Subtraction-free rational functions in ngens variables."""

    laurent = False

    def __init__(self, ngens: int):
        self.ngens = ngens

    def one(self):
        return SFRat.const(self.ngens, 1)

    def generator(self, i: int):
        return SFRat.var(self.ngens, i)

    def mul(self, a, b):
        return (a * b).cancelled()

    def power(self, a, k):
        return a ** k

    def add(self, a, b):
        return (a + b).cancelled()

    def embed(self, a: SFRat, offset: int, nvars: int) -> SFRat:
        binds = [SFRat.var(nvars, offset + i) for i in range(self.ngens)]
        return substitute(a.num, binds) / substitute(a.den, binds)

    def eval_poly(self, F: LaurentPoly, ys):
        if not F.has_nonnegative_coefficients():
            raise ValueError("semifield evaluation needs nonnegative coefficients")
        return substitute(F, list(ys))

    def __eq__(self, other):
        return isinstance(other, UniversalSemifield) and other.ngens == self.ngens


@dataclass(frozen=True)
class LabeledSeed:
    """Cluster x (all indices), coefficients y (mutable indices carry data) and the seed."""

    x: tuple
    y: tuple
    seed: Seed
    semifield: object

    @property
    def nvars(self) -> int:
        return self.x[0].nvars

    @property
    def nx(self) -> int:
        return self.seed.m


def initial_labeled_seed(seed: Seed, semifield=None, y=None) -> LabeledSeed:
    """Initial variables x_1..x_m, followed by the semifield generators."""
    semifield = semifield or TrivialSemifield()
    m = seed.m
    nvars = m + semifield.ngens
    xs = tuple(SFRat.var(nvars, i) for i in range(m))
    if y is None:
        y = [semifield.one()] * m
    return LabeledSeed(xs, tuple(y), seed, semifield)


def principal_seed(seed: Seed) -> LabeledSeed:
    """Principal coefficients: one tropical generator per mutable index."""
    mut = seed.mutable
    sf = TropicalSemifield(len(mut))
    y = [sf.one()] * seed.m
    for pos, j in enumerate(mut):
        y[j] = sf.generator(pos)
    return initial_labeled_seed(seed, sf, y)


def mutate_labeled(sigma: LabeledSeed, k: int, reduce: bool = True) -> LabeledSeed:
    seed = sigma.seed
    if k in seed.frozen or not 0 <= k < seed.m:
        raise ValueError(f"cannot mutate at index {k}")
    sf = sigma.semifield
    eps = seed.eps
    nvars = sigma.nvars
    off = seed.m
    yk = sigma.y[k]
    yk_plus = sf.add(yk, sf.one())
    pos = SFRat.const(nvars, 1)
    neg = SFRat.const(nvars, 1)
    for i in range(seed.m):
        b_ik = eps[k][i]
        if b_ik > 0:
            pos = pos * sigma.x[i] ** b_ik
        elif b_ik < 0:
            neg = neg * sigma.x[i] ** (-b_ik)
    new_xk = (sf.embed(yk, off, nvars) * pos + neg) / (sf.embed(yk_plus, off, nvars) * sigma.x[k])
    if reduce and sf.laurent:
        new_xk = new_xk.laurent_reduced()
    elif reduce:
        new_xk = new_xk.cancelled()
    xs = list(sigma.x)
    xs[k] = new_xk
    ys = list(sigma.y)
    for j in seed.mutable:
        if j == k:
            ys[j] = sf.power(yk, -1)
            continue
        b_kj = eps[j][k]
        val = sf.mul(sigma.y[j], sf.power(yk, _pos(b_kj)))
        ys[j] = sf.mul(val, sf.power(yk_plus, -b_kj))
    return LabeledSeed(tuple(xs), tuple(ys), mutate_matrix(seed, k), sf)


def mutate_labeled_word(sigma: LabeledSeed, word: Sequence[int]) -> LabeledSeed:
    for k in word:
        sigma = mutate_labeled(sigma, k)
    return sigma


# chart mutations (the argument entries may be numbers or SFRat)

def mutate_x_chart(X: Sequence, k: int, eps) -> tuple:
    """X'_k = 1/X_k and X'_i = X_i (1 + X_k^(-sgn eps_ik))^(-eps_ik)."""
    out = []
    xk = X[k]
    for i, xi in enumerate(X):
        if i == k:
            out.append(1 / xk if not isinstance(xk, SFRat) else xk.inverse())
            continue
        e = eps[i][k]
        if e == 0:
            out.append(xi)
        else:
            base = 1 + (xk ** (-_sgn(e)))
            out.append(xi * base ** (-e))
    return tuple(out)


def mutate_d_chart(B: Sequence, X: Sequence, k: int, eps) -> tuple[tuple, tuple]:
    """B'_k = (X_k prod B_j^[eps_kj]_+ + prod B_j^[-eps_kj]_+) / ((1 + X_k) B_k)."""
    pos = 1
    neg = 1
    for j, bj in enumerate(B):
        e = eps[k][j]
        if e > 0:
            pos = pos * bj ** e
        elif e < 0:
            neg = neg * bj ** (-e)
    new_bk = (X[k] * pos + neg) / ((1 + X[k]) * B[k])
    Bn = list(B)
    Bn[k] = new_bk
    return tuple(Bn), mutate_x_chart(X, k, eps)


def mutate_a_chart(A: Sequence, k: int, eps) -> tuple:
    """Exchange relation A_k A'_k = prod A_j^[eps_kj]_+ + prod A_j^[-eps_kj]_+."""
    pos = 1
    neg = 1
    for j, aj in enumerate(A):
        e = eps[k][j]
        if e > 0:
            pos = pos * aj ** e
        elif e < 0:
            neg = neg * aj ** (-e)
    out = list(A)
    out[k] = (pos + neg) / A[k]
    return tuple(out)


def symbolic_chart(nvars: int, offset: int = 0, count: int | None = None) -> tuple[SFRat, ...]:
    count = nvars - offset if count is None else count
    return tuple(SFRat.var(nvars, offset + i) for i in range(count))


# F-polynomials and g-vectors

def _laurent_of(x: SFRat) -> LaurentPoly:
    return x.as_laurent()


def grading_degree(exp: Sequence[int], seed: Seed) -> tuple[int, ...]:
    """deg x_i = e_i, deg y_j = -(column j of b) for the principal grading."""
    m = seed.m
    deg = list(exp[:m])
    for pos, j in enumerate(seed.mutable):
        c = exp[m + pos]
        if c:
            for i in range(m):
                deg[i] -= c * seed.eps[j][i]
    return tuple(deg)


class NonHomogeneousError(AssertionError):
    pass


def f_polynomial(seed: Seed, path: Sequence[int], l: int) -> tuple[LaurentPoly, tuple[int, ...]]:
    """F-polynomial and (extended) g-vector of x_l after mutating along path."""
    sigma = mutate_labeled_word(principal_seed(seed), path)
    return f_and_g_from_principal(sigma.x[l], seed)


def f_and_g_from_principal(x: SFRat, seed: Seed) -> tuple[LaurentPoly, tuple[int, ...]]:
    poly = _laurent_of(x)
    m = seed.m
    n = len(seed.mutable)
    degrees = {grading_degree(e, seed) for e in poly.terms}
    if len(degrees) != 1:
        raise NonHomogeneousError("principal-coefficient cluster variable is not homogeneous")
    g = degrees.pop()
    F: dict = {}
    for e, c in poly.items():
        key = tuple(e[m:m + n])
        F[key] = F.get(key, 0) + c
    return LaurentPoly(n, F), g


def y_hat(seed: Seed, y_values: Sequence[SFRat], x_values: Sequence[SFRat]) -> list[SFRat]:
    """y_hat_j = y_j prod_i x_i^(b_ij), one entry per mutable index."""
    out = []
    for pos, j in enumerate(seed.mutable):
        val = y_values[pos]
        for i in range(seed.m):
            b_ij = seed.eps[j][i]
            if b_ij:
                val = val * x_values[i] ** b_ij
        out.append(val)
    return out


def separation_reconstruct(F: LaurentPoly, g: Sequence[int], seed: Seed, semifield, y_values: Sequence, x_values: Sequence[SFRat]) -> SFRat:
    """F(y_hat) / F|_P(y) * x^g, with y_values one semifield element per mutable index."""
    nvars = x_values[0].nvars
    off = seed.m
    y_field = [semifield.embed(y, off, nvars) for y in y_values]
    num = substitute(F, y_hat(seed, y_field, x_values))
    den = semifield.embed(semifield.eval_poly(F, y_values), off, nvars)
    mono = SFRat.const(nvars, 1)
    for xi, gi in zip(x_values, g):
        if gi:
            mono = mono * xi ** gi
    return num / den * mono


def f_in_x(F: LaurentPoly, nvars: int | None = None) -> LaurentPoly:
    """Read an F-polynomial in y_j as a polynomial in the X_j."""
    return F if nvars is None else LaurentPoly(nvars, F.terms)


# canonical maps between cluster varieties

def _monomial_product(values: Sequence, exps: Sequence[int]):
    out = None
    for v, e in zip(values, exps):
        if e:
            t = v ** e
            out = t if out is None else out * t
    if out is None:
        return 1 if not values or not isinstance(values[0], SFRat) else SFRat.const(values[0].nvars, 1)
    return out


def canonical_map(name: str, coords, eps) -> tuple:
    """Pull back coordinates along p, phi, pi, j or iota.

    * ``p``: A -> X, input A, output X.
    * ``phi``: (A, A°) -> D, input (A, A°), output (B, X).
    * ``pi``: D -> X x X, input (B, X), output (X, X°).
    * ``j``: X -> D, input X, output (B, X) with B = 1.
    * ``iota``: D -> D, input (B, X), output (B', X').
    """
    m = len(eps)
    if name == "p":
        A = tuple(coords)
        if len(A) != m:
            raise ValueError("p expects one A-coordinate per index")
        return tuple(_monomial_product(A, eps[i]) for i in range(m))
    if name == "phi":
        A, A0 = coords
        if len(A) != m or len(A0) != m:
            raise ValueError("phi expects a pair of A-charts")
        return tuple(A0[i] / A[i] for i in range(m)), canonical_map("p", A, eps)
    if name == "pi":
        B, X = coords
        if len(B) != m or len(X) != m:
            raise ValueError("pi expects a (B, X) chart")
        return tuple(X), tuple(X[i] * _monomial_product(B, eps[i]) for i in range(m))
    if name == "j":
        X = tuple(coords)
        if len(X) != m:
            raise ValueError("j expects an X-chart")
        one = SFRat.const(X[0].nvars, 1) if isinstance(X[0], SFRat) else 1
        return tuple(one for _ in range(m)), X
    if name == "iota":
        B, X = coords
        if len(B) != m or len(X) != m:
            raise ValueError("iota expects a (B, X) chart")
        return tuple(1 / b if not isinstance(b, SFRat) else b.inverse() for b in B), tuple(
            X[i] * _monomial_product(B, eps[i]) for i in range(m)
        )
    raise ValueError(f"unknown canonical map {name!r}")


# Poisson brackets

def poisson_bracket(f: SFRat, g: SFRat, form) -> SFRat:
    """{f, g} = sum_ij form_ij (x_i d_i f)(x_j d_j g) for a log-canonical bracket."""
    nv = f.nvars
    df = [f.euler_derivative(i) for i in range(nv)]
    dg = [g.euler_derivative(j) for j in range(nv)]
    total = SFRat.const(nv, 0)
    for i in range(nv):
        if not df[i].num:
            continue
        for j in range(nv):
            c = form[i][j]
            if c and dg[j].num:
                total = total + df[i] * dg[j] * c
    return total


def d_chart_form(eps) -> list[list[int]]:
    """Bracket matrix on (X_1..X_n, B_1..B_n): {X_i,X_j}=eps_ij, {X_i,B_j}=delta_ij, {B,B}=0."""
    n = len(eps)
    out = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            out[i][j] = eps[i][j]
        out[i][n + i] = 1
        out[n + i][i] = -1
    return out


# monodromy

def monodromy_matrix(word: Sequence[tuple[int, str]], nvars: int) -> list[list[LaurentPoly]]:
    """Product of the left/right turn matrices over the doubled exponent lattice.

    Variable i of the result stands for X_i^(1/2).
    """
    one = LaurentPoly.const(nvars, 1)
    zero = LaurentPoly.zero(nvars)
    mat = [[one, zero], [zero, one]]
    for edge, turn in word:
        up = LaurentPoly.var(nvars, edge, 1)
        down = LaurentPoly.var(nvars, edge, -1)
        if turn == "R":
            step = [[up, up], [zero, down]]
        elif turn == "L":
            step = [[up, zero], [down, down]]
        else:
            raise ValueError(f"turn must be 'L' or 'R', not {turn!r}")
        mat = [
            [mat[0][0] * step[0][0] + mat[0][1] * step[1][0], mat[0][0] * step[0][1] + mat[0][1] * step[1][1]],
            [mat[1][0] * step[0][0] + mat[1][1] * step[1][0], mat[1][0] * step[0][1] + mat[1][1] * step[1][1]],
        ]
    return mat


def monodromy_trace(word: Sequence[tuple[int, str]], power: int, nvars: int) -> LaurentPoly:
    """Trace of the k-th power of the monodromy, exponents doubled."""
    mat = monodromy_matrix(word, nvars)
    one = LaurentPoly.const(nvars, 1)
    zero = LaurentPoly.zero(nvars)
    acc = [[one, zero], [zero, one]]
    for _ in range(power):
        acc = [
            [acc[0][0] * mat[0][0] + acc[0][1] * mat[1][0], acc[0][0] * mat[0][1] + acc[0][1] * mat[1][1]],
            [acc[1][0] * mat[0][0] + acc[1][1] * mat[1][0], acc[1][0] * mat[0][1] + acc[1][1] * mat[1][1]],
        ]
    return acc[0][0] + acc[1][1]


def halve_exponents(p: LaurentPoly) -> LaurentPoly:
    """Return p in the undoubled lattice; raises when a half-integer exponent remains."""
    if any(v % 2 for e in p.terms for v in e):
        raise ValueError("half-integer exponent present")
    return p.map_exponents(lambda e: [v // 2 for v in e])


def rational(x) -> Fraction:
    return Fraction(x)
