"""Exact arithmetic: Laurent polynomials, omega-scalars and subtraction-free fractions.

Coefficients are Python ints, ``Fraction`` values or :class:`OmegaScalar`
elements of Z[w, w^-1]. Every value is immutable once built.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np
from sympy import ZZ
from sympy.polys.rings import ring as sympy_ring

Exponent = tuple[int, ...]


def _vadd(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def _vsub(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))


def _coef_str(c) -> str:
    if isinstance(c, Fraction):
        return str(c) if c.denominator != 1 else str(c.numerator)
    return str(c)


class NotDivisibleError(ArithmeticError):
    """Raised when an exact division has a nonzero remainder."""


def _dense_product(a: dict[int, int], b: dict[int, int]):
    """Product by integer convolution when it provably fits in 64 bits."""
    lo_a, hi_a = min(a), max(a)
    lo_b, hi_b = min(b), max(b)
    bound = max(abs(v) for v in a.values()) * max(abs(v) for v in b.values()) * min(len(a), len(b))
    if bound >= 2 ** 62 or (hi_a - lo_a) + (hi_b - lo_b) > 50 * (len(a) + len(b)):
        return None
    va = np.zeros(hi_a - lo_a + 1, dtype=np.int64)
    vb = np.zeros(hi_b - lo_b + 1, dtype=np.int64)
    for e, c in a.items():
        va[e - lo_a] = c
    for e, c in b.items():
        vb[e - lo_b] = c
    conv = np.convolve(va, vb)
    nz = np.nonzero(conv)[0]
    return OmegaScalar({int(i) + lo_a + lo_b: int(conv[i]) for i in nz})


class OmegaScalar:
    """Element of Z[w, w^-1], stored as a map from w-exponent to integer."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | None = None):
        clean = {}
        if terms:
            for e, c in terms.items():
                if c:
                    clean[int(e)] = int(c)
        self._terms = clean
        self._hash = None

    @classmethod
    def omega(cls, k: int = 1, coef: int = 1) -> "OmegaScalar":
        return cls({k: coef})

    @classmethod
    def q(cls, k: int = 1) -> "OmegaScalar":
        return cls({4 * k: 1})

    @classmethod
    def coerce(cls, value) -> "OmegaScalar":
        if isinstance(value, OmegaScalar):
            return value
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise TypeError("Z[w] coefficients must be integral")
            value = value.numerator
        return cls({0: int(value)})

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = OmegaScalar.coerce(other)
        if not isinstance(other, OmegaScalar):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other) -> "OmegaScalar":
        other = OmegaScalar.coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return OmegaScalar(out)

    __radd__ = __add__

    def __neg__(self) -> "OmegaScalar":
        return OmegaScalar({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "OmegaScalar":
        return self + (-OmegaScalar.coerce(other))

    def __rsub__(self, other) -> "OmegaScalar":
        return OmegaScalar.coerce(other) - self

    def __mul__(self, other) -> "OmegaScalar":
        other = OmegaScalar.coerce(other)
        if len(self._terms) * len(other._terms) > 400:
            dense = _dense_product(self._terms, other._terms)
            if dense is not None:
                return dense
        out: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return OmegaScalar(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "OmegaScalar":
        if k < 0:
            if len(self._terms) != 1:
                raise ValueError("negative power of a non-monomial omega-scalar")
            (e, c), = self._terms.items()
            if abs(c) != 1:
                raise ValueError("non-unit omega-scalar has no inverse")
            return OmegaScalar({e * k: c ** (-k)})
        out = OmegaScalar({0: 1})
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> "OmegaScalar":
        """Multiply by w^k."""
        return OmegaScalar({e + k: c for e, c in self._terms.items()})

    def bar(self) -> "OmegaScalar":
        """The involution w -> w^-1."""
        return OmegaScalar({-e: c for e, c in self._terms.items()})

    def at_one(self) -> int:
        return sum(self._terms.values())

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_nonnegative(self) -> bool:
        return all(c > 0 for c in self._terms.values())

    def in_q_ring(self) -> bool:
        """True when only powers of q = w^4 occur."""
        return all(e % 4 == 0 for e in self._terms)

    def divide(self, other: "OmegaScalar") -> "OmegaScalar":
        """Exact quotient in Z[w, w^-1]; raises NotDivisibleError otherwise."""
        other = OmegaScalar.coerce(other)
        if not other:
            raise ZeroDivisionError("division by zero omega-scalar")
        rem = dict(self._terms)
        top_d = max(other._terms)
        lc = other._terms[top_d]
        low_d = min(other._terms)
        quotient: dict[int, int] = {}
        low_p = min(rem) if rem else 0
        while rem:
            top = max(rem)
            e = top - top_d
            if e + low_d < low_p:
                raise NotDivisibleError("omega-scalar division leaves a remainder")
            c, r = divmod(rem[top], lc)
            if r:
                raise NotDivisibleError("omega-scalar division leaves a remainder")
            quotient[e] = c
            for e2, c2 in other._terms.items():
                key = e + e2
                val = rem.get(key, 0) - c * c2
                if val:
                    rem[key] = val
                else:
                    rem.pop(key, None)
        return OmegaScalar(quotient)

    def to_json(self) -> list[list[int]]:
        return [[e, c] for e, c in self.items()]

    @classmethod
    def from_json(cls, data) -> "OmegaScalar":
        return cls({int(e): int(c) for e, c in data})

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.items():
            if e == 0:
                parts.append(str(c))
            else:
                parts.append(f"{c}*w^{e}" if c != 1 else f"w^{e}")
        return " + ".join(parts)


class LaurentPoly:
    """Sparse multivariate Laurent polynomial with exact coefficients."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for e, c in terms.items():
                if c:
                    e = tuple(e)
                    if len(e) != nvars:
                        raise ValueError("exponent length does not match variable count")
                    clean[e] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj._terms = terms
        obj._hash = None
        return obj

    # constructors
    @classmethod
    def zero(cls, nvars: int) -> "LaurentPoly":
        return cls._raw(nvars, {})

    @classmethod
    def const(cls, nvars: int, c=1) -> "LaurentPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, exp: Sequence[int], c=1) -> "LaurentPoly":
        exp = tuple(int(v) for v in exp)
        return cls(len(exp), {exp: c})

    @classmethod
    def var(cls, nvars: int, i: int, power: int = 1) -> "LaurentPoly":
        e = [0] * nvars
        e[i] = power
        return cls.monomial(e)

    # access
    @property
    def terms(self) -> dict[Exponent, object]:
        return dict(self._terms)

    def items(self):
        """Terms in canonical (lexicographic) exponent order."""
        return sorted(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, exp: Sequence[int]):
        return self._terms.get(tuple(exp), 0)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and (0,) * self.nvars in self._terms)

    def leading_term(self):
        e = max(self._terms)
        return e, self._terms[e]

    def trailing_term(self):
        e = min(self._terms)
        return e, self._terms[e]

    def min_exponents(self) -> Exponent:
        return tuple(min(col) for col in zip(*self._terms)) if self._terms else (0,) * self.nvars

    def max_exponents(self) -> Exponent:
        return tuple(max(col) for col in zip(*self._terms)) if self._terms else (0,) * self.nvars

    def is_polynomial(self) -> bool:
        return all(v >= 0 for v in self.min_exponents())

    def has_nonnegative_coefficients(self) -> bool:
        for c in self._terms.values():
            if isinstance(c, OmegaScalar):
                if not c.is_nonnegative():
                    return False
            elif c < 0:
                return False
        return True

    # arithmetic
    def _check(self, other: "LaurentPoly") -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"variable-count mismatch: {self.nvars} vs {other.nvars}")

    def _lift(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, OmegaScalar)):
            return LaurentPoly.const(self.nvars, other)
        return NotImplemented

    def __add__(self, other) -> "LaurentPoly":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e)
            v = c if v is None else v + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction, OmegaScalar)):
            if not other:
                return LaurentPoly.zero(self.nvars)
            return LaurentPoly(self.nvars, {e: c * other for e, c in self._terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check(other)
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return LaurentPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            if len(self._terms) != 1:
                raise ValueError("negative power of a multi-term Laurent polynomial")
            (e, c), = self._terms.items()
            inv = Fraction(1, 1) / c if not isinstance(c, OmegaScalar) else c ** -1
            if isinstance(inv, Fraction) and inv.denominator == 1:
                inv = inv.numerator
            return LaurentPoly(self.nvars, {tuple(k * v for v in e): inv ** (-k)})
        out = LaurentPoly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, exp: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial x^exp."""
        exp = tuple(exp)
        return LaurentPoly._raw(self.nvars, {_vadd(e, exp): c for e, c in self._terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(self.nvars, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # maps
    def map_coefficients(self, fn) -> "LaurentPoly":
        return LaurentPoly(self.nvars, {e: fn(c) for e, c in self._terms.items()})

    def map_exponents(self, fn, nvars: int | None = None) -> "LaurentPoly":
        """Apply a linear map to exponents, merging colliding terms."""
        nv = self.nvars if nvars is None else nvars
        out: dict = {}
        for e, c in self._terms.items():
            f = tuple(fn(e))
            out[f] = out[f] + c if f in out else c
        return LaurentPoly(nv, out)

    def derivative_euler(self, i: int) -> "LaurentPoly":
        """x_i * d/dx_i, which keeps the Laurent support."""
        return LaurentPoly(self.nvars, {e: c * e[i] for e, c in self._terms.items()})

    def evaluate(self, values: Sequence):
        """Evaluate at a point; values may be numbers or ring elements."""
        total = 0
        for e, c in self._terms.items():
            t = c
            for v, k in zip(values, e):
                if k:
                    t = t * (v ** k)
            total = total + t
        return total

    def integer_content(self) -> Fraction:
        """Positive gcd of rational coefficients (1 for omega coefficients)."""
        num = 0
        den = 1
        for c in self._terms.values():
            if isinstance(c, OmegaScalar):
                return Fraction(1)
            c = Fraction(c)
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den) if num else Fraction(1)

    def scale(self, c) -> "LaurentPoly":
        return self * c

    def to_json(self) -> list[dict]:
        out = []
        for e, c in self.items():
            coef = {"omega": c.to_json()} if isinstance(c, OmegaScalar) else _coef_str(c)
            out.append({"exp": list(e), "coef": coef})
        return out

    @classmethod
    def from_json(cls, nvars: int, data: Iterable[dict]) -> "LaurentPoly":
        terms = {}
        for item in data:
            coef = item["coef"]
            if isinstance(coef, dict):
                c = OmegaScalar.from_json(coef["omega"])
            else:
                c = Fraction(coef)
                if c.denominator == 1:
                    c = c.numerator
            terms[tuple(item["exp"])] = c
        return cls(nvars, terms)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.items():
            mono = "*".join(
                (f"x{i}" if v == 1 else f"x{i}^{v}") for i, v in enumerate(e) if v
            )
            cs = f"({c})" if isinstance(c, OmegaScalar) else _coef_str(c)
            parts.append(cs if not mono else (mono if cs == "1" else f"{cs}*{mono}"))
        return " + ".join(parts)


def poly_arith(op: str, p: LaurentPoly, q=None) -> LaurentPoly:
    """Dispatch for add/mul/pow/neg, the operation names used by the CLI."""
    if op == "add":
        return p + q
    if op == "mul":
        return p * q
    if op == "pow":
        return p ** int(q)
    if op == "neg":
        return -p
    raise ValueError(f"unknown polynomial operation {op!r}")


def _coef_divide(a, b):
    if isinstance(a, OmegaScalar) or isinstance(b, OmegaScalar):
        return OmegaScalar.coerce(a).divide(OmegaScalar.coerce(b))
    r = Fraction(a) / Fraction(b)
    return r.numerator if r.denominator == 1 else r


def exact_divide(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Return r with q*r == p, by lexicographic leading-term elimination."""
    p._check(q)
    if not q:
        raise ZeroDivisionError("division by the zero polynomial")
    if not p:
        return LaurentPoly.zero(p.nvars)
    if q.is_monomial():
        (e, c), = q._terms.items()
        return LaurentPoly(p.nvars, {_vsub(f, e): _coef_divide(d, c) for f, d in p._terms.items()})
    q_lead, q_lc = q.leading_term()
    # degrees in each variable add under multiplication, so a quotient lives in this box
    lo = _vsub(p.min_exponents(), q.min_exponents())
    hi = _vsub(p.max_exponents(), q.max_exponents())
    if any(a > b for a, b in zip(lo, hi)):
        raise NotDivisibleError("polynomial division leaves a remainder")
    rem = dict(p._terms)
    quotient: dict = {}
    q_items = list(q._terms.items())
    while rem:
        top = max(rem)
        e = _vsub(top, q_lead)
        if any(v < a or v > b for v, a, b in zip(e, lo, hi)):
            raise NotDivisibleError("polynomial division leaves a remainder")
        c = _coef_divide(rem[top], q_lc)
        quotient[e] = c
        for e2, c2 in q_items:
            key = _vadd(e, e2)
            v = rem.get(key)
            v = -c * c2 if v is None else v - c * c2
            if v:
                rem[key] = v
            else:
                rem.pop(key, None)
    return LaurentPoly(p.nvars, quotient)


class SFRat:
    """Ratio num/den of Laurent polynomials, compared by cross-multiplication.

    Normalization removes a common monomial, the integer content and makes
    the lexicographically leading coefficient of the denominator positive.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly | None = None, normalize: bool = True):
        if den is None:
            den = LaurentPoly.const(num.nvars, 1)
        num._check(den)
        if not den:
            raise ZeroDivisionError("SFRat with zero denominator")
        if normalize:
            num, den = _normalize_pair(num, den)
        self.num = num
        self.den = den

    @property
    def nvars(self) -> int:
        return self.num.nvars

    @classmethod
    def const(cls, nvars: int, c=1) -> "SFRat":
        return cls(LaurentPoly.const(nvars, c))

    @classmethod
    def var(cls, nvars: int, i: int) -> "SFRat":
        return cls(LaurentPoly.var(nvars, i))

    @classmethod
    def monomial(cls, exp: Sequence[int]) -> "SFRat":
        return cls(LaurentPoly.monomial(exp))

    def _lift(self, other) -> "SFRat":
        if isinstance(other, SFRat):
            return other
        if isinstance(other, LaurentPoly):
            return SFRat(other)
        if isinstance(other, (int, Fraction, OmegaScalar)):
            return SFRat.const(self.nvars, other)
        return NotImplemented

    def __add__(self, other) -> "SFRat":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return SFRat(self.num + other.num, self.den)
        return SFRat(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "SFRat":
        return SFRat(-self.num, self.den, normalize=False)

    def __sub__(self, other) -> "SFRat":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "SFRat":
        return (-self) + other

    def __mul__(self, other) -> "SFRat":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return SFRat(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "SFRat":
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return SFRat(self.den, self.num)

    def __truediv__(self, other) -> "SFRat":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other) -> "SFRat":
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int) -> "SFRat":
        if k < 0:
            return self.inverse() ** (-k)
        return SFRat(self.num ** k, self.den ** k)

    def __eq__(self, other) -> bool:
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return sfr_equal(self, other)

    __hash__ = None

    def is_laurent(self) -> bool:
        return self.den.is_monomial()

    def laurent_reduced(self) -> "SFRat":
        """Divide the denominator out when it divides the numerator exactly."""
        if self.den.is_monomial():
            return self
        try:
            quotient = exact_divide(self.num, self.den)
        except NotDivisibleError:
            return self
        return SFRat(quotient)

    def as_laurent(self) -> LaurentPoly:
        """The Laurent polynomial equal to self; requires a monomial denominator."""
        red = self.laurent_reduced()
        if not red.den.is_monomial():
            raise NotDivisibleError("not a Laurent polynomial")
        return exact_divide(red.num, red.den)

    def cancelled(self) -> "SFRat":
        """Divide numerator and denominator by their gcd (integer coefficients only)."""
        if self.den.is_monomial() or self.num.is_monomial():
            return self
        pair = _cancel_gcd(self.num, self.den)
        return self if pair is None else SFRat(*pair)

    def evaluate(self, values: Sequence):
        return self.num.evaluate(values) / self.den.evaluate(values)

    def euler_derivative(self, i: int) -> "SFRat":
        """x_i * d/dx_i of the fraction."""
        n, d = self.num, self.den
        return SFRat(n.derivative_euler(i) * d - n * d.derivative_euler(i), d * d)

    def __repr__(self) -> str:
        if self.den.is_constant() and self.den.coefficient((0,) * self.nvars) == 1:
            return repr(self.num)
        return f"({self.num}) / ({self.den})"


def _normalize_pair(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    if not num:
        return num, LaurentPoly.const(num.nvars, 1)
    lo = tuple(min(a, b) for a, b in zip(num.min_exponents(), den.min_exponents()))
    if any(lo):
        neg = tuple(-v for v in lo)
        num = num.shift(neg)
        den = den.shift(neg)
    cn = num.integer_content()
    cd = den.integer_content()
    if cn != 1 or cd != 1:
        g = Fraction(math.gcd(cn.numerator, cd.numerator), cn.denominator * cd.denominator // math.gcd(cn.denominator, cd.denominator))
        if g != 1:
            inv = 1 / g
            inv = inv.numerator if inv.denominator == 1 else inv
            num = num * inv
            den = den * inv
    _, lc = den.leading_term()
    negative = lc.at_one() < 0 if isinstance(lc, OmegaScalar) else lc < 0
    if negative:
        num, den = -num, -den
    return num, den


@lru_cache(maxsize=None)
def _gcd_ring(nvars: int):
    return sympy_ring([f"v{i}" for i in range(nvars)], ZZ)[0]


def _cancel_gcd(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly] | None:
    """Cofactors of num and den after removing their polynomial gcd, or None when not applicable."""
    if any(not isinstance(c, int) for p in (num, den) for _, c in p.items()):
        return None
    lo = tuple(min(a, b) for a, b in zip(num.min_exponents(), den.min_exponents()))
    R = _gcd_ring(num.nvars)
    p = R.from_dict({_vsub(e, lo): c for e, c in num.items()})
    q = R.from_dict({_vsub(e, lo): c for e, c in den.items()})
    _, cp, cq = p.cofactors(q)

    def back(f) -> LaurentPoly:
        return LaurentPoly._raw(num.nvars, {tuple(e): int(c) for e, c in f.items()})

    return back(cp), back(cq)


def sfr_equal(r1: SFRat, r2: SFRat) -> bool:
    """Equality of fractions by cross-multiplication."""
    if r1.nvars != r2.nvars:
        raise ValueError("variable-count mismatch")
    return r1.num * r2.den == r2.num * r1.den


def substitute(p: LaurentPoly, bindings: Sequence[SFRat]) -> SFRat:
    """Compose p with the given fractions, one per variable of p."""
    if len(bindings) != p.nvars:
        raise ValueError("every variable must be bound")
    if not bindings:
        raise ValueError("cannot substitute into a polynomial with no variables")
    nv = bindings[0].nvars
    if not p:
        return SFRat(LaurentPoly.zero(nv))
    hi = p.max_exponents()
    lo = p.min_exponents()
    pos_max = [max(v, 0) for v in hi]
    neg_max = [max(-v, 0) for v in lo]
    cache: dict = {}

    def power(poly: LaurentPoly, k: int) -> LaurentPoly:
        key = (id(poly), k)
        if key not in cache:
            cache[key] = poly ** k
        return cache[key]

    for i, b in enumerate(bindings):
        if neg_max[i] and not b.num:
            raise ZeroDivisionError(f"variable {i} bound to zero appears with a negative exponent")
    common = LaurentPoly.const(nv, 1)
    for i, b in enumerate(bindings):
        if pos_max[i]:
            common = common * power(b.den, pos_max[i])
        if neg_max[i]:
            common = common * power(b.num, neg_max[i])
    total = LaurentPoly.zero(nv)
    for e, c in p._terms.items():
        term = LaurentPoly.const(nv, c)
        for i, b in enumerate(bindings):
            v = e[i]
            up = max(v, 0) + neg_max[i] - max(-v, 0)
            down = max(-v, 0) + pos_max[i] - max(v, 0)
            if up:
                term = term * power(b.num, up)
            if down:
                term = term * power(b.den, down)
        total = total + term
    if not common:
        raise ZeroDivisionError("substitution produced a zero denominator")
    return SFRat(total, common)


def rational_left_inverse(matrix: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    """L with L A = I for a matrix A of full column rank, as (A^t A)^-1 A^t over Q."""
    a = [[Fraction(v) for v in row] for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    gram = [[sum((a[r][i] * a[r][j] for r in range(rows)), Fraction(0)) for j in range(cols)] for i in range(cols)]
    aug = [gram[i] + [Fraction(int(i == j)) for j in range(cols)] for i in range(cols)]
    for c in range(cols):
        piv = next((r for r in range(c, cols) if aug[r][c] != 0), None)
        if piv is None:
            raise ValueError("matrix does not have full column rank")
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [v / p for v in aug[c]]
        for r in range(cols):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    inv = [row[cols:] for row in aug]
    return [[sum((inv[i][k] * a[r][k] for k in range(cols)), Fraction(0)) for r in range(rows)] for i in range(cols)]


def solve_full_rank(matrix: Sequence[Sequence[int]], rhs: Sequence, left_inverse=None) -> tuple[Fraction, ...] | None:
    """The unique rational solution of A h = rhs, or None when the system is inconsistent."""
    left = left_inverse if left_inverse is not None else rational_left_inverse(matrix)
    rhs = [Fraction(v) for v in rhs]
    h = tuple(sum((row[r] * rhs[r] for r in range(len(rhs))), Fraction(0)) for row in left)
    for r, arow in enumerate(matrix):
        if sum((arow[j] * h[j] for j in range(len(h))), Fraction(0)) != rhs[r]:
            return None
    return h
