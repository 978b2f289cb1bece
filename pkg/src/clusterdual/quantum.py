"""Quantum tori, quantum seeds and the duality maps for a polygon.

All coefficients live in Z[w, w^-1] with q = w^4. A quantum torus multiplies
basis elements by ``Y_u Y_v = w^(scale * form(u, v)) Y_{u+v}``, so elements are
stored in the (Weyl) basis ``Y_v`` and there is no ordering ambiguity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .cluster import f_polynomial
from .errors import DomainError
from .exact import LaurentPoly, NotDivisibleError, OmegaScalar, SFRat, rational_left_inverse, solve_full_rank
from .polygon import (
    Chord,
    MarkedArcSet,
    Triangulation,
    b_matrix,
    chord,
    compatible_pair,
    exchange_from_triangulation,
    flip,
    flip_word,
    is_side,
    complete_a0,
    path_to_arc,
    weighted_noncrossing_diagonals,
)
from .seed import CompatiblePair, mutate_pair
from .tropical import PLExpr, pl_compose_linear, tropicalize

Exponent = tuple[int, ...]
ONE = OmegaScalar({0: 1})


def _pos(x: int) -> int:
    return x if x > 0 else 0


def _vadd(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def _vsub(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))


# quantum tori

@dataclass(frozen=True)
class QTorus:
    """Rank-m quantum torus with skew form ``form``; ``scale`` is the w-exponent per form unit."""

    form: tuple[tuple[int, ...], ...]
    scale: int = 1
    _rows: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        form = tuple(tuple(int(v) for v in row) for row in self.form)
        object.__setattr__(self, "form", form)
        m = len(form)
        for i in range(m):
            if len(form[i]) != m:
                raise ValueError("form must be square")
            for j in range(m):
                if form[i][j] != -form[j][i]:
                    raise ValueError("form must be skew-symmetric")
        sparse = tuple(tuple((j, self.scale * v) for j, v in enumerate(row) if v) for row in form)
        object.__setattr__(self, "_rows", sparse)

    @property
    def rank(self) -> int:
        return len(self.form)

    def row_image(self, u: Sequence[int]) -> list[int]:
        """The covector v -> scale * form(u, v)."""
        out = [0] * self.rank
        for i, ui in enumerate(u):
            if ui:
                for j, v in self._rows[i]:
                    out[j] += ui * v
        return out

    def pair(self, u: Sequence[int], v: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(self.row_image(u), v))


def x_torus(eps) -> QTorus:
    """Generators X_j with X_i X_j = q^(2 eps_ij) X_j X_i."""
    return QTorus(eps, 4)


def d_torus(eps) -> QTorus:
    """Coordinates (X_1..X_n, B_1..B_n) with form [[eps, I], [-I, 0]] in q-units."""
    n = len(eps)
    rows = []
    for i in range(n):
        rows.append(list(eps[i]) + [int(i == j) for j in range(n)])
    for i in range(n):
        rows.append([-int(i == j) for j in range(n)] + [0] * n)
    return QTorus(rows, 4)


def frame_torus(lam) -> QTorus:
    """Torus of a toric frame: M(u) M(v) = w^(-lam(u, v)) M(u + v)."""
    return QTorus([[-v for v in row] for row in lam], 1)


class QTElem:
    """Finite sum of basis elements Y_v with Z[w] coefficients."""

    __slots__ = ("torus", "_terms")

    def __init__(self, torus: QTorus, terms=None):
        self.torus = torus
        clean = {}
        if terms:
            for e, c in terms.items():
                c = OmegaScalar.coerce(c)
                if c:
                    e = tuple(int(v) for v in e)
                    if len(e) != torus.rank:
                        raise ValueError("exponent length does not match the torus rank")
                    clean[e] = c
        self._terms = clean

    @classmethod
    def _raw(cls, torus: QTorus, terms: dict) -> "QTElem":
        obj = cls.__new__(cls)
        obj.torus = torus
        obj._terms = terms
        return obj

    @classmethod
    def monomial(cls, torus: QTorus, exp: Sequence[int], coef=1) -> "QTElem":
        return cls(torus, {tuple(exp): coef})

    @classmethod
    def one(cls, torus: QTorus) -> "QTElem":
        return cls.monomial(torus, (0,) * torus.rank)

    @classmethod
    def zero(cls, torus: QTorus) -> "QTElem":
        return cls._raw(torus, {})

    @classmethod
    def generator(cls, torus: QTorus, i: int, power: int = 1) -> "QTElem":
        e = [0] * torus.rank
        e[i] = power
        return cls.monomial(torus, e)

    @property
    def terms(self) -> dict[Exponent, OmegaScalar]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def coefficient(self, exp: Sequence[int]) -> OmegaScalar:
        return self._terms.get(tuple(exp), OmegaScalar())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def _check(self, other: "QTElem") -> None:
        if self.torus != other.torus:
            raise ValueError("elements of different quantum tori")

    def __add__(self, other) -> "QTElem":
        if not isinstance(other, QTElem):
            other = QTElem.one(self.torus).scale(other)
        self._check(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e)
            v = c if v is None else v + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return QTElem._raw(self.torus, out)

    __radd__ = __add__

    def __neg__(self) -> "QTElem":
        return QTElem._raw(self.torus, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "QTElem":
        if not isinstance(other, QTElem):
            other = QTElem.one(self.torus).scale(other)
        return self + (-other)

    def scale(self, c) -> "QTElem":
        c = OmegaScalar.coerce(c)
        if not c:
            return QTElem.zero(self.torus)
        return QTElem._raw(self.torus, {e: v * c for e, v in self._terms.items()})

    def __mul__(self, other) -> "QTElem":
        if not isinstance(other, QTElem):
            return self.scale(other)
        self._check(other)
        torus = self.torus
        out: dict[Exponent, OmegaScalar] = {}
        for e1, c1 in self._terms.items():
            row = torus.row_image(e1)
            for e2, c2 in other._terms.items():
                s = sum(a * b for a, b in zip(row, e2))
                key = _vadd(e1, e2)
                val = (c1 * c2).shift(s)
                prev = out.get(key)
                val = val if prev is None else prev + val
                if val:
                    out[key] = val
                else:
                    out.pop(key, None)
        return QTElem._raw(torus, out)

    def __rmul__(self, other) -> "QTElem":
        return self.scale(other)

    def __pow__(self, k: int) -> "QTElem":
        if k < 0:
            return self.inverse() ** (-k)
        out = QTElem.one(self.torus)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "QTElem":
        """Inverse of a unit monomial c Y_v (c a signed power of w)."""
        if not self.is_monomial():
            raise ValueError("only monomials are invertible in the quantum torus")
        (e, c), = self._terms.items()
        cinv = c ** -1
        return QTElem._raw(self.torus, {tuple(-v for v in e): cinv})

    def __eq__(self, other) -> bool:
        if not isinstance(other, QTElem):
            return NotImplemented
        return self.torus == other.torus and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.torus, frozenset(self._terms.items())))

    def leading_term(self):
        e = max(self._terms)
        return e, self._terms[e]

    def map_coefficients(self, fn) -> "QTElem":
        return QTElem(self.torus, {e: fn(c) for e, c in self._terms.items()})

    def bar(self) -> "QTElem":
        """w -> w^-1 on coefficients; on the Weyl basis this is the bar (star) involution."""
        return self.map_coefficients(lambda c: c.bar())

    def shift(self, k: int) -> "QTElem":
        return QTElem._raw(self.torus, {e: c.shift(k) for e, c in self._terms.items()})

    def reexpress(self, torus: QTorus, fn) -> "QTElem":
        """Move every term to ``fn(exponent)`` in another torus, keeping coefficients."""
        out: dict[Exponent, OmegaScalar] = {}
        for e, c in self._terms.items():
            key = tuple(fn(e))
            out[key] = out[key] + c if key in out else c
        return QTElem(torus, out)

    def at_one(self) -> LaurentPoly:
        """The classical limit w = 1."""
        return LaurentPoly(self.torus.rank, {e: c.at_one() for e, c in self._terms.items()})

    def has_positive_q_coefficients(self) -> bool:
        return all(c.is_nonnegative() and c.in_q_ring() for c in self._terms.values())

    def grade_range(self, index: int) -> tuple[int, int]:
        vals = [e[index] for e in self._terms]
        return min(vals), max(vals)

    def to_json(self) -> list[dict]:
        return [{"exp": list(e), "coef": {"omega": c.to_json()}} for e, c in self.items()]

    @classmethod
    def from_json(cls, torus: QTorus, data) -> "QTElem":
        return cls(torus, {tuple(t["exp"]): OmegaScalar.from_json(t["coef"]["omega"]) for t in data})

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.items():
            mono = "*".join(f"Y{i}^{v}" if v != 1 else f"Y{i}" for i, v in enumerate(e) if v)
            coef = repr(c)
            if len(c.terms) > 1:
                coef = f"({coef})"
            parts.append(f"{coef}*{mono}" if mono else coef)
        return " + ".join(parts)


def qt_mul(a: QTElem, b: QTElem) -> QTElem:
    return a * b


def ordered_monomial(torus: QTorus, exps: Sequence[int]) -> QTElem:
    """The ordered product Y_{e_1}^{a_1} ... Y_{e_m}^{a_m}."""
    out = QTElem.one(torus)
    for i, a in enumerate(exps):
        if a:
            out = out * QTElem.generator(torus, i, a)
    return out


def star(x: QTElem) -> QTElem:
    """Anti-involution fixing each generator and sending w to w^-1.

    Each term is rewritten as an ordered product of generators, the factors
    are reversed, w is inverted and the product is multiplied out again.
    """
    torus = x.torus
    out = QTElem.zero(torus)
    for e, c in x.items():
        forward = ordered_monomial(torus, e)
        # Y_e = w^s * ordered product; s read off the single term
        (_, oc), = forward._terms.items()
        weight = c.divide(oc)  # coefficient of the ordered product
        rev = QTElem.one(torus)
        for i in reversed(range(torus.rank)):
            if e[i]:
                rev = rev * QTElem.generator(torus, i, e[i])
        out = out + rev.scale(weight.bar())
    return out


def left_divide(a: QTElem, n: QTElem) -> QTElem:
    """The z with a * z == n, by lexicographic leading-term elimination."""
    a._check(n)
    if not a:
        raise ZeroDivisionError("division by zero")
    if not n:
        return QTElem.zero(a.torus)
    if a.is_monomial():
        return a.inverse() * n
    torus = a.torus
    lead, lc = a.leading_term()
    bound = _vsub(min(n._terms), min(a._terms))
    a_items = list(a._terms.items())
    rem = dict(n._terms)
    quotient: dict[Exponent, OmegaScalar] = {}
    while rem:
        top = max(rem)
        ez = _vsub(top, lead)
        if ez < bound:
            raise NotDivisibleError("left division in the quantum torus leaves a remainder")
        c = rem[top].divide(lc.shift(torus.pair(lead, ez)))
        quotient[ez] = c
        for e, ce in a_items:
            key = _vadd(e, ez)
            sub = (ce * c).shift(torus.pair(e, ez))
            v = rem.get(key)
            v = -sub if v is None else v - sub
            if v:
                rem[key] = v
            else:
                rem.pop(key, None)
    return QTElem(torus, quotient)


# truncated series in one generator

def _q_scalar(k: int, coef: int = 1) -> OmegaScalar:
    return OmegaScalar({4 * k: coef})


def _denominator(order: int) -> OmegaScalar:
    """prod_{j=1}^{order-1} (1 - q^(2j)), a common denominator for the series coefficients."""
    out = ONE
    for j in range(1, order):
        out = out * (ONE - _q_scalar(2 * j))
    return out


@dataclass(frozen=True)
class QSeries:
    """num / den with den a central scalar; terms of grade >= base + order are dropped.

    The grade of a term is its exponent at ``index``.
    """

    num: QTElem
    den: OmegaScalar
    index: int
    base: int
    order: int

    def __post_init__(self):
        object.__setattr__(self, "num", _truncate(self.num, self.index, self.base + self.order))

    def __mul__(self, other: "QSeries") -> "QSeries":
        if other.index != self.index:
            raise ValueError("series graded by different generators")
        order = min(self.order, other.order)
        base = self.base + other.base
        limit = base + order
        torus = self.num.torus
        k = self.index
        out: dict[Exponent, OmegaScalar] = {}
        for e1, c1 in self.num._terms.items():
            row = torus.row_image(e1)
            for e2, c2 in other.num._terms.items():
                if e1[k] + e2[k] >= limit:
                    continue
                key = _vadd(e1, e2)
                val = (c1 * c2).shift(sum(x * y for x, y in zip(row, e2)))
                prev = out.get(key)
                val = val if prev is None else prev + val
                if val:
                    out[key] = val
                else:
                    out.pop(key, None)
        return QSeries(QTElem._raw(torus, out), self.den * other.den, k, base, order)

    def matches(self, other: "QSeries") -> bool:
        """Equality of the truncated series (cross-multiplied by the central denominators)."""
        order = min(self.order, other.order)
        base = min(self.base, other.base)
        if self.base != other.base:
            return False
        lhs = _truncate(self.num.scale(other.den), self.index, base + order)
        rhs = _truncate(other.num.scale(self.den), self.index, base + order)
        return lhs == rhs


def _truncate(x: QTElem, index: int, limit: int) -> QTElem:
    return QTElem._raw(x.torus, {e: c for e, c in x._terms.items() if e[index] < limit})


def series_of(x: QTElem, index: int, order: int, base: int | None = None) -> QSeries:
    if base is None:
        base = x.grade_range(index)[0] if x else 0
    return QSeries(x, ONE, index, base, order)


def psi_coefficients(order: int, inverse: bool = False) -> list[OmegaScalar]:
    """den * c_n for n < order, den = prod_{j<order}(1 - q^(2j)).

    Psi(x) = sum_n (-q)^n x^n / prod_{j<=n}(1 - q^(2j)) and
    Psi(x)^-1 = sum_n q^(n^2) x^n / prod_{j<=n}(1 - q^(2j)).
    """
    out = []
    for n in range(order):
        head = _q_scalar(n * n) if inverse else _q_scalar(n, (-1) ** n)
        tail = ONE
        for j in range(n + 1, order):
            tail = tail * (ONE - _q_scalar(2 * j))
        out.append(head * tail)
    return out


def psi_series(torus: QTorus, exp: Sequence[int], index: int, order: int, inverse: bool = False) -> QSeries:
    """Truncated Psi(Y_exp) (or its inverse); Y_exp must have grade 1 at index."""
    exp = tuple(exp)
    if exp[index] != 1:
        raise ValueError("the series variable must have grade one")
    coeffs = psi_coefficients(order, inverse)
    terms = {tuple(n * v for v in exp): c for n, c in enumerate(coeffs)}
    return QSeries(QTElem(torus, terms), _denominator(order), index, 0, order)


def psi_truncated(order: int, inverse: bool = False) -> QSeries:
    """Psi^q(x) in one commuting variable, up to x^(order-1)."""
    if order > 16:
        raise ValueError("truncation order is capped at 16")
    torus = QTorus(((0,),), 1)
    return psi_series(torus, (1,), 0, order, inverse)


def _x_hat_exponent(torus: QTorus, k: int) -> Exponent:
    n = torus.rank // 2
    eps_row = [torus.form[k][j] for j in range(n)]
    return tuple(int(i == k) for i in range(n)) + tuple(eps_row)


def ad_psi(gen: QTElem, k: int, order: int, signature: str = "x") -> QSeries:
    """Truncated Psi(X_k) gen Psi(X_k)^-1, or conjugation by Psi(X_k)/Psi(X_hat_k) when signature is 'd'.

    For 'x' the torus is an X torus of rank n; for 'd' it is the D torus of
    rank 2n with coordinates (X, B).
    """
    if order > 16:
        raise ValueError("truncation order is capped at 16")
    torus = gen.torus
    g = series_of(gen, k, order)
    xk = tuple(int(i == k) for i in range(torus.rank))
    if signature == "x":
        left = psi_series(torus, xk, k, order)
        right = psi_series(torus, xk, k, order, inverse=True)
        return left * g * right
    if signature == "d":
        xh = _x_hat_exponent(torus, k)
        left = psi_series(torus, xk, k, order) * psi_series(torus, xh, k, order, inverse=True)
        right = psi_series(torus, xh, k, order) * psi_series(torus, xk, k, order, inverse=True)
        return left * g * right
    raise ValueError("signature must be 'x' or 'd'")


# closed forms of the quantum mutation

@dataclass(frozen=True)
class ClosedForm:
    """numerator * f_1^p_1 * f_2^p_2 ... with each f a binomial 1 + c Y_v or Y_v + c, p = +-1."""

    numerator: QTElem
    factors: tuple[tuple[QTElem, int], ...] = ()

    def expand(self, index: int, order: int) -> QSeries:
        out = series_of(self.numerator, index, order)
        for f, p in self.factors:
            out = out * _binomial_series(f, p, index, order)
        return out

    def at_one(self) -> SFRat:
        val = SFRat(self.numerator.at_one())
        for f, p in self.factors:
            val = val * SFRat(f.at_one()) ** p
        return val


def _binomial_series(f: QTElem, power: int, index: int, order: int) -> QSeries:
    if power == 1:
        return series_of(f, index, order)
    if power != -1:
        raise ValueError("factor powers are +1 or -1")
    (lo_e, lo_c), (hi_e, hi_c) = sorted(f._terms.items(), key=lambda t: t[0][index])
    if hi_e[index] - lo_e[index] != 1:
        raise ValueError("binomial factors must differ by one step in the graded generator")
    # f = lo (1 + lo^-1 hi); both parts are unit monomials
    lo = QTElem.monomial(f.torus, lo_e, lo_c)
    ratio = lo.inverse() * QTElem.monomial(f.torus, hi_e, hi_c)
    (r_e, r_c), = ratio._terms.items()
    torus = f.torus
    terms = {}
    power_term = QTElem.one(torus)
    for n in range(order):
        (pe, pc), = power_term._terms.items()
        terms[pe] = pc if n % 2 == 0 else -pc
        power_term = power_term * ratio
    geo = QSeries(QTElem(torus, terms), ONE, index, 0, order)
    return geo * series_of(lo.inverse(), index, order)


def _unit(torus: QTorus, exp: Sequence[int], qpow: int = 0) -> QTElem:
    return QTElem.monomial(torus, exp, _q_scalar(qpow))


def _basis(rank: int, i: int, scale: int = 1) -> list[int]:
    v = [0] * rank
    v[i] = scale
    return v


def mu_sharp_closed(gen: str, i: int, k: int, eps, signature: str = "x") -> ClosedForm:
    """Closed forms of the automorphism part (conjugation by the dilogarithm)."""
    n = len(eps)
    torus = x_torus(eps) if signature == "x" else d_torus(eps)
    rank = torus.rank
    xk = _basis(rank, k)
    one = [0] * rank
    if gen == "X":
        num = QTElem.generator(torus, i)
        if i == k:
            return ClosedForm(num)
        e = eps[i][k]
        factors = []
        if e <= 0:
            for p in range(1, -e + 1):
                factors.append((_unit(torus, one) + _unit(torus, xk, 2 * p - 1), 1))
        else:
            for p in range(1, e + 1):
                factors.append((_unit(torus, one) + _unit(torus, xk, 1 - 2 * p), -1))
        return ClosedForm(num, tuple(factors))
    if gen == "B":
        if signature != "d":
            raise ValueError("B generators live in the D torus")
        num = QTElem.generator(torus, n + i)
        if i != k:
            return ClosedForm(num)
        xh = list(_x_hat_exponent(torus, k))
        return ClosedForm(
            num,
            (
                (_unit(torus, one) + _unit(torus, xk, 1), 1),
                (_unit(torus, one) + _unit(torus, xh, 1), -1),
            ),
        )
    raise ValueError("generator must be 'X' or 'B'")


def mu_prime_image(gen: str, i: int, k: int, eps, signature: str = "x") -> QTElem:
    """The monomial part of the mutation applied to a generator of the mutated torus."""
    n = len(eps)
    torus = x_torus(eps) if signature == "x" else d_torus(eps)
    rank = torus.rank
    if gen == "X":
        if i == k:
            return QTElem.generator(torus, k, -1)
        v = _basis(rank, i)
        v[k] += _pos(eps[i][k])
        return QTElem.monomial(torus, v)
    if gen == "B":
        if signature != "d":
            raise ValueError("B generators live in the D torus")
        if i != k:
            return QTElem.generator(torus, n + i)
        v = [0] * rank
        v[n + k] = -1
        for j in range(n):
            v[n + j] += _pos(-eps[k][j])
        return QTElem.monomial(torus, v)
    raise ValueError("generator must be 'X' or 'B'")


def _b_monomial(torus: QTorus, k: int, eps, sign: int) -> QTElem:
    n = len(eps)
    v = [0] * torus.rank
    for j in range(n):
        e = sign * eps[k][j]
        if e > 0:
            v[n + j] = e
    return QTElem.monomial(torus, v)


def mu_q_closed(gen: str, i: int, k: int, eps, signature: str = "x") -> ClosedForm:
    """Images of X'_i (and B'_i in the D torus) under the quantum mutation in direction k."""
    n = len(eps)
    if not (0 <= i < n and 0 <= k < n):
        raise IndexError("generator index out of range")
    torus = x_torus(eps) if signature == "x" else d_torus(eps)
    rank = torus.rank
    one = [0] * rank
    xk = _basis(rank, k)
    if gen == "X":
        if i == k:
            return ClosedForm(QTElem.generator(torus, k, -1))
        e = eps[i][k]
        if e <= 0:
            factors = tuple((_unit(torus, one) + _unit(torus, xk, 2 * p + 1), 1) for p in range(-e))
            return ClosedForm(QTElem.generator(torus, i), factors)
        num = QTElem.generator(torus, i) * QTElem.generator(torus, k, e)
        factors = tuple((_unit(torus, xk) + _unit(torus, one, 2 * p + 1), -1) for p in range(e))
        return ClosedForm(num, factors)
    if gen == "B":
        if signature != "d":
            raise ValueError("B generators live in the D torus")
        if i != k:
            return ClosedForm(QTElem.generator(torus, n + i))
        top = _unit(torus, xk, 1) * _b_monomial(torus, k, eps, 1) + _b_monomial(torus, k, eps, -1)
        num = top * QTElem.generator(torus, n + k, -1)
        return ClosedForm(num, ((_unit(torus, one) + _unit(torus, xk, -1), -1),))
    raise ValueError("generator must be 'X' or 'B'")


def _mutate_eps(eps, k: int):
    from .seed import mutate_integer_matrix

    return mutate_integer_matrix(eps, k)


def mu_q_involution_holds(gen: str, i: int, k: int, eps) -> bool:
    """Mutating twice in direction k returns the generator, checked with cleared denominators."""
    n = len(eps)
    eps2 = _mutate_eps(eps, k)
    if gen == "X":
        if i == k:
            return True
        # both images are X_i times a rational function of X_k; compose those functions
        def part(e: int, inverted: bool) -> tuple[LaurentPoly, LaurentPoly]:
            # returns (numerator, denominator) in t = X_k (or X_k^-1 when inverted)
            s = -1 if inverted else 1
            num = LaurentPoly.const(1, ONE)
            den = LaurentPoly.const(1, ONE)
            t = LaurentPoly.monomial((s,), ONE)
            if e <= 0:
                for p in range(-e):
                    num = num * (LaurentPoly.const(1, ONE) + t.scale(_q_scalar(2 * p + 1)))
            else:
                num = num * t ** e
                for p in range(e):
                    den = den * (t + LaurentPoly.const(1, _q_scalar(2 * p + 1)))
            return num, den

        n1, d1 = part(eps[i][k], False)
        n2, d2 = part(eps2[i][k], True)
        return n1 * n2 == d1 * d2
    if gen == "B":
        if i != k:
            return True
        torus = d_torus(eps)
        one = [0] * torus.rank
        xk = _basis(torus.rank, k)
        bp = _b_monomial(torus, k, eps, 1)
        bm = _b_monomial(torus, k, eps, -1)
        bk = QTElem.generator(torus, n + k)
        # second step written in the first chart: X'_k = X_k^-1, B-monomials swap roles
        lhs = (_unit(torus, [-v for v in xk], 1) * bm + bp) * (_unit(torus, one) + _unit(torus, xk, -1)) * bk
        rhs = bk * (_unit(torus, one) + _unit(torus, [-v for v in xk], -1)) * (_unit(torus, xk, 1) * bp + bm)
        return lhs == rhs
    raise ValueError("generator must be 'X' or 'B'")


# quantum seeds

@dataclass(frozen=True)
class QuantumSeedState:
    """A compatible pair and its cluster variables, written in the initial frame torus."""

    pair: CompatiblePair
    variables: tuple[QTElem, ...]

    @property
    def torus(self) -> QTorus:
        return self.variables[0].torus


def initial_quantum_state(pair: CompatiblePair) -> QuantumSeedState:
    torus = frame_torus(pair.lam)
    return QuantumSeedState(pair, tuple(QTElem.generator(torus, i) for i in range(pair.m)))


def frame_monomial(st: QuantumSeedState, u: Sequence[int]) -> QTElem:
    """M_t(u) = w^(sum_{i<j} lam(e_i, e_j) u_i u_j) A_1^u_1 ... A_m^u_m."""
    lam = st.pair.lam
    m = st.pair.m
    s = 0
    for i in range(m):
        if u[i]:
            for j in range(i + 1, m):
                s += lam[i][j] * u[i] * u[j]
    out = QTElem.one(st.torus)
    for i in range(m):
        if u[i]:
            if u[i] < 0 and not st.variables[i].is_monomial():
                raise ValueError("negative power of a non-monomial cluster variable")
            out = out * st.variables[i] ** u[i]
    return out.shift(s)


def quantum_mutate_seed(st: QuantumSeedState, k: int) -> QuantumSeedState:
    pair = st.pair
    if not 0 <= k < pair.n:
        raise IndexError(f"mutation direction {k} out of range")
    lam = pair.lam
    up = [_pos(pair.b[i][k]) for i in range(pair.m)]
    down = [_pos(-pair.b[i][k]) for i in range(pair.m)]

    def lam_k(u):
        return sum(lam[k][j] * u[j] for j in range(pair.m))

    rhs = frame_monomial(st, up).shift(-lam_k(up)) + frame_monomial(st, down).shift(-lam_k(down))
    new_var = left_divide(st.variables[k], rhs)
    variables = list(st.variables)
    variables[k] = new_var
    return QuantumSeedState(mutate_pair(pair, k, 1), tuple(variables))


def quantum_mutate_word(st: QuantumSeedState, word: Iterable[int]) -> QuantumSeedState:
    for k in word:
        st = quantum_mutate_seed(st, k)
    return st


class QuantumPositivityError(AssertionError):
    pass


def _exponent_converter(pair: CompatiblePair):
    left = rational_left_inverse(pair.b)

    def convert(v: Sequence[int]) -> tuple[int, ...] | None:
        h = solve_full_rank(pair.b, v, left)
        if h is None or any(x.denominator != 1 for x in h):
            return None
        return tuple(int(x) for x in h)

    return convert


def coefficient_torus(pair: CompatiblePair) -> QTorus:
    """Torus of Y_j = M_0(b^j): the form is -B restricted to the mutable rows, in d-units."""
    if len(set(pair.d)) != 1:
        raise ValueError("quantum F-polynomials need a uniform skew-symmetrizer")
    n = pair.n
    return QTorus([[-pair.b[i][j] for j in range(n)] for i in range(n)], pair.d[0])


def split_f_and_g(elem: QTElem, pair: CompatiblePair, reading: str = "product") -> tuple[QTElem, tuple[int, ...], int]:
    """Write elem = w^shift F(Y) M_0(g) with F a polynomial with constant term 1.

    With ``reading="weyl"`` the coefficient of Y^n is instead the coefficient
    of the frame monomial M_0(g + B n) itself; the two readings differ by the
    factor q^(n . g) on each term.
    """
    if reading not in ("product", "weyl"):
        raise ValueError("reading must be 'product' or 'weyl'")
    convert = _exponent_converter(pair)
    exps = sorted(elem.terms)
    g = None
    for cand in exps:
        if all((n := convert(_vsub(v, cand))) is not None and min(n) >= 0 for v in exps):
            g = cand
            break
    if g is None:
        raise QuantumPositivityError("no g-vector: the element is not a cluster variable")
    torus = frame_torus(pair.lam)
    if reading == "product":
        shifted = elem * QTElem.monomial(torus, tuple(-v for v in g))
    else:
        shifted = QTElem(torus, {_vsub(v, g): c for v, c in elem.terms.items()})
    ytorus = coefficient_torus(pair)
    F = shifted.reexpress(ytorus, lambda v: convert(v))
    const = F.coefficient((0,) * pair.n)
    if not const.is_monomial() or const.at_one() != 1:
        raise QuantumPositivityError("constant term of the F-polynomial is not a power of w")
    (shift, _), = const.items()
    return F.shift(-shift), tuple(g), shift


def quantum_f_polynomial(pair: CompatiblePair, path: Sequence[int], l: int, reading: str = "product") -> tuple[QTElem, tuple[int, ...], int]:
    """Quantum F-polynomial, g-vector and w-shift of A_l after mutating along path."""
    st = quantum_mutate_word(initial_quantum_state(pair), path)
    F, g, shift = split_f_and_g(st.variables[l], pair, reading)
    if not F.has_positive_q_coefficients():
        raise QuantumPositivityError("F-polynomial coefficients fall outside Z>=0[q, q^-1]")
    return F, g, shift


# the polygon atlas

class QuantumAtlas:
    """Quantum seeds of every triangulation of the polygon, in the frame of a base triangulation."""

    def __init__(self, base: Triangulation):
        self.base = base
        self.pair = compatible_pair(base)
        start = initial_quantum_state(self.pair)
        self._states: dict[frozenset, tuple[Triangulation, QuantumSeedState]] = {base.key(): (base, start)}
        self._arcs: dict[Chord, QTElem] = dict(zip(base.edges, start.variables))
        self._queue = [base.key()]

    def _expand_until(self, done) -> None:
        while self._queue and not done():
            key = self._queue.pop(0)
            T, st = self._states[key]
            for k in range(T.n - 3):
                U = flip(T, k)
                if U.key() in self._states:
                    continue
                nst = quantum_mutate_seed(st, k)
                self._states[U.key()] = (U, nst)
                self._arcs.setdefault(U.diagonals[k], nst.variables[k])
                self._queue.append(U.key())

    def state(self, T: Triangulation) -> tuple[Triangulation, QuantumSeedState]:
        """The triangulation as reached from the base (edge order matters) and its quantum seed."""
        key = T.key()
        self._expand_until(lambda: key in self._states)
        return self._states[key]

    def variable(self, c: Chord) -> QTElem:
        c = chord(*c)
        self._expand_until(lambda: c in self._arcs)
        if c not in self._arcs:
            raise ValueError(f"{c} is not an arc of the polygon")
        return self._arcs[c]


@lru_cache(maxsize=32)
def atlas_for(T: Triangulation) -> QuantumAtlas:
    return QuantumAtlas(T)


class XSolver:
    """Rewrites frame exponents v as X-exponents h with eps^t h = v (v = b h)."""

    def __init__(self, T: Triangulation):
        self.T = T
        self.b = b_matrix(T)
        self.left = rational_left_inverse(self.b)
        eps = exchange_from_triangulation(T).principal_part()
        self.torus = x_torus(eps)

    def solve(self, v: Sequence) -> tuple[Fraction, ...] | None:
        return solve_full_rank(self.b, v, self.left)

    def integral(self, v: Sequence) -> tuple[int, ...]:
        h = self.solve(v)
        if h is None:
            raise DomainError("a0_condition", "the exponent is not a combination of X-monomials; vertex sums must vanish")
        if any(x.denominator != 1 for x in h):
            raise DomainError("a0_parity", f"half-integral X-exponent {[str(x) for x in h]}")
        return tuple(int(x) for x in h)


@lru_cache(maxsize=32)
def x_solver(T: Triangulation) -> XSolver:
    return XSolver(T)


def h_exponent_solve(s: Sequence, T: Triangulation) -> tuple[Fraction, ...]:
    """Rational h with eps^t h = s over all edges; raises a0_condition when inconsistent."""
    h = x_solver(T).solve(s)
    if h is None:
        raise DomainError("a0_condition", "eps^t h = s has no solution; vertex sums must vanish")
    return h


def frame_to_x(elem: QTElem, T: Triangulation) -> QTElem:
    solver = x_solver(T)
    return elem.reexpress(solver.torus, solver.integral)


def _check_weights(l: MarkedArcSet, T: Triangulation, quantum: bool) -> None:
    for c, w in l.arcs:
        if is_side(c, l.n):
            if quantum and w.denominator != 1:
                raise DomainError("a0_parity", f"side {c} carries the non-integral weight {w}")
            continue
        if w.denominator != 1:
            raise DomainError("a0_parity", f"arc {c} carries the non-integral weight {w}")
        if w < 0 and not T.has_edge(c):
            raise DomainError("negative_weight", f"arc {c} is not an edge of the triangulation and has weight {w}")


def quantum_arc_product(l: MarkedArcSet, T: Triangulation, atlas: QuantumAtlas | None = None) -> QTElem:
    """M_{T_l}(w) = w^alpha prod A_i^w_i, written in the frame torus of T."""
    if l.n != T.n:
        raise ValueError("lamination and triangulation live on different polygons")
    _check_weights(l, T, quantum=True)
    atlas = atlas or atlas_for(T)
    reached, st = atlas.state(l.triangulation())
    w = [int(x) for x in l.weight_vector(reached)]
    return frame_monomial(st, w)


def ia_q(l: MarkedArcSet, T: Triangulation, atlas: QuantumAtlas | None = None) -> QTElem:
    """Quantum duality function of an arc system, as a Laurent element of the X torus of T."""
    out = frame_to_x(quantum_arc_product(l, T, atlas), T)
    if not out.has_positive_q_coefficients():
        raise QuantumPositivityError("expansion has coefficients outside Z>=0[q, q^-1]")
    return out


@lru_cache(maxsize=4096)
def arc_data(T: Triangulation, c: Chord) -> tuple[LaurentPoly, tuple[int, ...]]:
    """Classical F-polynomial (in X_1..X_n) and extended g-vector of the arc c in the chart T."""
    c = chord(*c)
    n = T.n - 3
    if T.has_edge(c):
        g = [0] * T.m
        g[T.index(c)] = 1
        return LaurentPoly.const(n, 1), tuple(g)
    path = path_to_arc(T, c)
    S = flip_word(T, path)
    return f_polynomial(exchange_from_triangulation(T), path, S.index(c))


def quantum_arc_data(T: Triangulation, c: Chord, atlas: QuantumAtlas | None = None) -> tuple[QTElem, tuple[int, ...]]:
    """Quantum F-polynomial (in the X torus of T) and g-vector of the arc c."""
    atlas = atlas or atlas_for(T)
    F, g, shift = split_f_and_g(atlas.variable(c), atlas.pair)
    if shift != 0:
        raise QuantumPositivityError(f"nonzero w-shift {shift}")
    return F.reexpress(x_solver(T).torus, lambda e: e), g


def _g_sum(l: MarkedArcSet, T: Triangulation) -> list[Fraction]:
    s = [Fraction(0)] * T.m
    for c, w in l.arcs:
        _, g = arc_data(T, c)
        for i, gi in enumerate(g):
            s[i] += w * gi
    return s


def ia_classical(l: MarkedArcSet, T: Triangulation, doubled: bool = False) -> SFRat:
    """prod F_c(X)^w_c times X^h with eps^t h = sum w_c g_c.

    With ``doubled`` the result is written in Z_j = X_j^(1/2), which allows
    half-integral h.
    """
    if l.n != T.n:
        raise ValueError("lamination and triangulation live on different polygons")
    _check_weights(l, T, quantum=False)
    h = h_exponent_solve(_g_sum(l, T), T)
    n = T.n - 3
    if not doubled and any(x.denominator != 1 for x in h):
        raise DomainError("a0_parity", f"half-integral X-exponent {[str(x) for x in h]}")
    val = SFRat.const(n, 1)
    for c, w in l.arcs:
        if is_side(c, l.n) or T.has_edge(c):
            continue
        F, _ = arc_data(T, c)
        if doubled:
            F = F.map_exponents(lambda e: [2 * v for v in e])
        val = val * SFRat(F) ** int(w)
    scale = 2 if doubled else 1
    mono = tuple(int(x * scale) for x in h)
    return val * SFRat.monomial(mono)


# the doubled duality map

@dataclass(frozen=True)
class DoubleCanonicalForm:
    """w^omega_exp * num(X_hat) * B^b * X^h * den(X)^-1.

    ``num_factors``/``den_factors`` list (arc, weight, F) sorted by arc; the
    products ``num_product``/``den_product`` are the exact combined factors
    (for the quantum form they include the frame reorderings). B^b and X^h are
    Weyl monomials; ``x_exp_doubled`` stores 2h.
    """

    n: int
    omega_exp: int
    num_factors: tuple
    den_factors: tuple
    b_exp: tuple[int, ...]
    x_exp_doubled: tuple[int, ...]
    num_product: object
    den_product: object
    quantum: bool = False

    @property
    def x_exp(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(v, 2) for v in self.x_exp_doubled)

    def has_integral_x_exp(self) -> bool:
        return all(v % 2 == 0 for v in self.x_exp_doubled)

    def _x_hat_images(self, eps, nvars: int, doubled: bool) -> list[SFRat]:
        n = self.n
        s = 2 if doubled else 1
        out = []
        for i in range(n):
            e = [0] * nvars
            e[n + i] = s
            for j in range(n):
                e[j] += eps[i][j]
            out.append(SFRat.monomial(e))
        return out

    def to_sfrat(self, eps, doubled: bool = False) -> SFRat:
        """The classical function in variables (B_1..B_n, X_1..X_n), or (B, X^(1/2)) when doubled."""
        if self.quantum:
            raise ValueError("use the classical form")
        n = self.n
        nv = 2 * n
        s = 2 if doubled else 1
        if not doubled and not self.has_integral_x_exp():
            raise DomainError("a0_parity", "half-integral X-exponent; use the doubled variables")
        xs = [SFRat.monomial(_basis(nv, n + i, s)) for i in range(n)]
        xhat = self._x_hat_images(eps, nv, doubled)
        num = self.num_product
        den = self.den_product
        val = _sub_sfrat(num, xhat, nv) / _sub_sfrat(den, xs, nv)
        mono = [0] * nv
        for i in range(n):
            mono[i] = self.b_exp[i]
            mono[n + i] = self.x_exp_doubled[i] * s // 2
        return val * SFRat.monomial(mono)

    def tropical(self, eps) -> PLExpr:
        """Tropicalization as a piecewise-linear function of (b_1..b_n, x_1..x_n)."""
        if self.quantum:
            raise ValueError("use the classical form")
        n = self.n
        nv = 2 * n
        xs = [PLExpr.linear(_basis(nv, n + i)) for i in range(n)]
        xhat = []
        for i in range(n):
            v = _basis(nv, n + i)
            for j in range(n):
                v[j] += eps[i][j]
            xhat.append(PLExpr.linear(v))
        lin = [Fraction(b) for b in self.b_exp] + list(self.x_exp)
        out = PLExpr.linear(lin)
        for _, w, F in self.num_factors:
            if len(F) > 1:
                out = out + pl_compose_linear(tropicalize(F), xhat).scale(int(w))
        for _, w, F in self.den_factors:
            if len(F) > 1:
                out = out - pl_compose_linear(tropicalize(F), xs).scale(int(w))
        return out

    def d_numerator(self, eps) -> QTElem:
        """w^omega * num(X_hat) * B^b * X^h in the D torus (quantum form only)."""
        if not self.quantum:
            raise ValueError("use the quantum form")
        if not self.has_integral_x_exp():
            raise DomainError("a0_parity", "half-integral X-exponent")
        torus = d_torus(eps)
        n = self.n

        def hat(e):
            out = list(e) + [0] * n
            for i in range(n):
                for j in range(n):
                    out[n + j] += e[i] * eps[i][j]
            return out

        num = self.num_product.reexpress(torus, hat)
        b = QTElem.monomial(torus, [0] * n + list(self.b_exp))
        x = QTElem.monomial(torus, [v // 2 for v in self.x_exp_doubled] + [0] * n)
        return (num * b * x).shift(self.omega_exp)

    def d_denominator(self, eps) -> QTElem:
        torus = d_torus(eps)
        n = self.n
        return self.den_product.reexpress(torus, lambda e: list(e) + [0] * n)

    def at_one(self) -> "DoubleCanonicalForm":
        if not self.quantum:
            return self

        def lim(factors):
            return tuple((c, w, F.at_one()) for c, w, F in factors)

        return DoubleCanonicalForm(
            self.n, 0, lim(self.num_factors), lim(self.den_factors), self.b_exp, self.x_exp_doubled,
            self.num_product.at_one(), self.den_product.at_one(), False,
        )

    def to_json(self) -> dict:
        def poly(p):
            return p.to_json()

        def factors(fs):
            return [{"arc": list(c), "weight": int(w), "poly": poly(F)} for c, w, F in fs]

        return {
            "quantum": self.quantum,
            "coeff_ring": "Z[w,w^-1], q = w^4" if self.quantum else "Z",
            "omega_exp": self.omega_exp,
            "num_factors": factors(self.num_factors),
            "den_factors": factors(self.den_factors),
            "b_exp": list(self.b_exp),
            "x_exp": [str(x) for x in self.x_exp],
            "num_product": poly(self.num_product),
            "den_product": poly(self.den_product),
        }


def _sub_sfrat(p: LaurentPoly, images: Sequence[SFRat], nvars: int) -> SFRat:
    val = SFRat.const(nvars, 0)
    for e, c in p.items():
        term = SFRat.const(nvars, c)
        for img, v in zip(images, e):
            if v:
                term = term * img ** v
        val = val + term
    return val


def _doubled_common(C: MarkedArcSet, C_mirror: MarkedArcSet, T: Triangulation, quantum: bool):
    if C.n != T.n or C_mirror.n != T.n:
        raise ValueError("lamination and triangulation live on different polygons")
    for half in (C, C_mirror):
        for c, w in half.diagonal_arcs().items():
            if w.denominator != 1:
                raise DomainError("a0_parity", f"arc {c} carries the non-integral weight {w}")
            if w < 0:
                raise DomainError("negative_weight", f"arc {c} has negative weight {w}")
    g = _g_sum(C, T)
    g_m = _g_sum(C_mirror, T)
    h = h_exponent_solve([a - b for a, b in zip(g_m, g)], T)
    if quantum and any(x.denominator != 1 for x in h):
        raise DomainError("a0_parity", f"half-integral X-exponent {[str(x) for x in h]}")
    b = [g_m[j] for j in T.mutable]
    if any(x.denominator != 1 for x in b):
        raise DomainError("a0_parity", "non-integral B-exponent")
    return g, g_m, h, tuple(int(x) for x in b)


def id_classical(C: MarkedArcSet, C_mirror: MarkedArcSet, T: Triangulation) -> DoubleCanonicalForm:
    """Classical duality function of the doubled lamination (C on S, C_mirror on the mirror surface)."""
    _, _, h, b = _doubled_common(C, C_mirror, T, quantum=False)
    n = T.n - 3

    def factors(l):
        out = []
        prod = LaurentPoly.const(n, 1)
        for c, w in sorted(l.diagonal_arcs().items()):
            F, _ = arc_data(T, c)
            out.append((c, int(w), F))
            prod = prod * F ** int(w)
        return tuple(out), prod

    num_f, num_p = factors(C_mirror)
    den_f, den_p = factors(C)
    return DoubleCanonicalForm(n, 0, num_f, den_f, b, tuple(int(2 * x) for x in h), num_p, den_p, False)


def id_q(C: MarkedArcSet, C_mirror: MarkedArcSet, T: Triangulation, atlas: QuantumAtlas | None = None) -> DoubleCanonicalForm:
    """Quantum duality function w^(-N) [C]^-1 (x) [C_mirror] written as a canonical form."""
    g, g_m, h, b = _doubled_common(C, C_mirror, T, quantum=True)
    for half in (C, C_mirror):
        _check_weights(half, T, quantum=True)
    atlas = atlas or atlas_for(T)
    n = T.n - 3
    frame = frame_torus(atlas.pair.lam)
    lam = atlas.pair.lam
    gi = [int(x) for x in g]
    gmi = [int(x) for x in g_m]

    def polynomial_part(l: MarkedArcSet, gv: list[int]) -> QTElem:
        prod = quantum_arc_product(l, T, atlas)
        return frame_to_x(prod * QTElem.monomial(frame, [-v for v in gv]), T)

    den_p = polynomial_part(C, gi)
    num_p = polynomial_part(C_mirror, gmi).bar()

    def factors(l, mirror: bool):
        out = []
        for c, w in sorted(l.diagonal_arcs().items()):
            F, _ = quantum_arc_data(T, c, atlas)
            out.append((c, int(w), F.bar() if mirror else F))
        return tuple(out)

    pairing = sum(gi[i] * lam[i][j] * gmi[j] for i in range(T.m) for j in range(T.m))
    return DoubleCanonicalForm(
        n, -2 * pairing, factors(C_mirror, True), factors(C, False), b,
        tuple(int(2 * x) for x in h), num_p, den_p, True,
    )


# canonical basis and structure constants

def highest_exponent(x: QTElem) -> Exponent:
    """The exponent dominating every other exponent of x componentwise."""
    exps = list(x.terms)
    top = [e for e in exps if all(all(a >= b for a, b in zip(e, f)) for f in exps)]
    if len(top) != 1:
        raise ValueError("no componentwise highest term")
    return top[0]


def _maximal_exponents(x: QTElem) -> list[Exponent]:
    exps = list(x.terms)
    return [e for e in exps if not any(f != e and all(a >= b for a, b in zip(f, e)) for f in exps)]


class CanonicalBasis:
    """ia_q elements over T indexed by highest exponent, built on demand.

    Candidates are A0 laminations whose diagonal weights total at most
    max_total.  For even n the side weights have a free direction, which
    multiplies the element by a frozen monomial, so lookups are made modulo
    that direction.
    """

    def __init__(self, T: Triangulation, max_total: int, atlas: QuantumAtlas | None = None):
        self.T = T
        self.n = T.n
        self.atlas = atlas or atlas_for(T)
        self.max_total = max_total
        self._cache: dict[MarkedArcSet, QTElem] = {}
        self.direction: Exponent | None = None
        if self.n % 2 == 0:
            self.direction = highest_exponent(self.element(complete_a0(self.n, {}, 1)))
            self._pivot = next(i for i, v in enumerate(self.direction) if v)
        self._index: dict[tuple, tuple[dict, Exponent]] = {}
        for diags in weighted_noncrossing_diagonals(self.n, max_total):
            try:
                x = self.element(complete_a0(self.n, diags))
            except (ValueError, DomainError):
                continue
            a = highest_exponent(x)
            self._index.setdefault(self._key(a), (diags, a))

    def _key(self, a: Exponent) -> tuple:
        if self.direction is None:
            return tuple(a)
        t = Fraction(a[self._pivot], self.direction[self._pivot])
        return tuple(Fraction(v) - t * d for v, d in zip(a, self.direction))

    def element(self, l: MarkedArcSet) -> QTElem:
        if l not in self._cache:
            self._cache[l] = ia_q(l, self.T, self.atlas)
        return self._cache[l]

    def lamination_with_highest(self, a: Exponent) -> MarkedArcSet | None:
        hit = self._index.get(self._key(a))
        if hit is None:
            return None
        diags, base = hit
        if self.direction is None:
            return complete_a0(self.n, diags)
        shift = Fraction(a[self._pivot] - base[self._pivot], self.direction[self._pivot])
        if shift.denominator != 1:
            return None
        return complete_a0(self.n, diags, shift)


def expand_in_basis(x: QTElem, basis: CanonicalBasis, max_steps: int = 10_000) -> dict[MarkedArcSet, OmegaScalar]:
    """Coefficients c_l with x = sum c_l ia_q(l), peeling off maximal exponents.

    Raises ValueError when some maximal exponent is not the highest term of a
    basis element within the search bound.
    """
    coeffs: dict[MarkedArcSet, OmegaScalar] = {}
    rest = x
    for _ in range(max_steps):
        if not rest.terms:
            return coeffs
        a = _maximal_exponents(rest)[0]
        l = basis.lamination_with_highest(a)
        if l is None:
            raise ValueError(f"no basis element with highest exponent {a}")
        elem = basis.element(l)
        if highest_exponent(elem) != a:
            raise ValueError("basis index is inconsistent")
        c = rest.coefficient(a)
        coeffs[l] = coeffs.get(l, OmegaScalar()) + c
        rest = rest - elem.scale(c)
    raise ValueError("expansion did not terminate")


def structure_constants(l1: MarkedArcSet, l2: MarkedArcSet, T: Triangulation,
                        basis: CanonicalBasis | None = None) -> dict[MarkedArcSet, OmegaScalar]:
    """Expand ia_q(l1) ia_q(l2) in the canonical basis over T."""
    if basis is None:
        total = sum(l1.diagonal_arcs().values()) + sum(l2.diagonal_arcs().values())
        basis = CanonicalBasis(T, int(total))
    return expand_in_basis(basis.element(l1) * basis.element(l2), basis)


def in_laurent_q(c: OmegaScalar) -> bool:
    """Whether an omega-polynomial lies in Z[q, q^-1] with q = omega^4."""
    return all(k % 4 == 0 for k in c.terms)
