"""Max-plus tropical points, tropical mutation rules and piecewise-linear functions."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog
from typing import Iterable, Sequence

from .exact import LaurentPoly, OmegaScalar, SFRat

Vector = tuple[Fraction, ...]


def _frac_vec(v: Iterable) -> Vector:
    return tuple(Fraction(x) for x in v)


@dataclass(frozen=True)
class TropPoint:
    kind: str  # "a", "x" or "d"; a d-point stores b-coordinates then x-coordinates
    coords: Vector

    def __post_init__(self):
        if self.kind not in ("a", "x", "d"):
            raise ValueError("tropical point kind must be a, x or d")
        object.__setattr__(self, "coords", _frac_vec(self.coords))
        if self.kind == "d" and len(self.coords) % 2:
            raise ValueError("a d-point has 2n coordinates")

    def split(self) -> tuple[Vector, Vector]:
        h = len(self.coords) // 2
        return self.coords[:h], self.coords[h:]

    def to_json(self) -> dict:
        return {"type": self.kind, "coords": [str(c) for c in self.coords]}

    @classmethod
    def from_json(cls, data: dict) -> "TropPoint":
        return cls(data["type"], tuple(Fraction(str(c)) for c in data["coords"]))


def trop_mutate_a(a: Sequence, k: int, eps) -> Vector:
    a = _frac_vec(a)
    pos = sum((eps[k][j] * a[j] for j in range(len(a)) if eps[k][j] > 0), Fraction(0))
    neg = sum((-eps[k][j] * a[j] for j in range(len(a)) if eps[k][j] < 0), Fraction(0))
    out = list(a)
    out[k] = max(pos, neg) - a[k]
    return tuple(out)


def trop_mutate_x(x: Sequence, k: int, eps) -> Vector:
    x = _frac_vec(x)
    xk = x[k]
    out = []
    for i, xi in enumerate(x):
        if i == k:
            out.append(-xk)
            continue
        e = eps[k][i]
        if e > 0:
            out.append(xi + e * max(Fraction(0), xk))
        elif e < 0:
            out.append(xi + e * max(Fraction(0), -xk))
        else:
            out.append(xi)
    return tuple(out)


def trop_mutate_d(b: Sequence, x: Sequence, k: int, eps) -> tuple[Vector, Vector]:
    b = _frac_vec(b)
    x = _frac_vec(x)
    pos = sum((eps[k][j] * b[j] for j in range(len(b)) if eps[k][j] > 0), Fraction(0))
    neg = sum((-eps[k][j] * b[j] for j in range(len(b)) if eps[k][j] < 0), Fraction(0))
    out = list(b)
    out[k] = max(x[k] + pos, neg) - max(Fraction(0), x[k]) - b[k]
    return tuple(out), trop_mutate_x(x, k, eps)


def trop_mutate(pt: TropPoint, k: int, eps) -> TropPoint:
    if pt.kind == "a":
        return TropPoint("a", trop_mutate_a(pt.coords, k, eps))
    if pt.kind == "x":
        return TropPoint("x", trop_mutate_x(pt.coords, k, eps))
    b, x = pt.split()
    nb, nx = trop_mutate_d(b, x, k, eps)
    return TropPoint("d", nb + nx)


# piecewise-linear functions

Form = tuple[Fraction, ...]  # linear coefficients followed by a constant


@dataclass(frozen=True)
class PLExpr:
    """max(pos) - max(neg) over finite sets of affine forms."""

    nvars: int
    pos: frozenset
    neg: frozenset

    def __post_init__(self):
        if not self.pos or not self.neg:
            raise ValueError("both form sets must be nonempty")

    @classmethod
    def linear(cls, coeffs: Sequence, const=0) -> "PLExpr":
        n = len(coeffs)
        form = _frac_vec(coeffs) + (Fraction(const),)
        return cls(n, frozenset([form]), frozenset([(Fraction(0),) * (n + 1)]))

    @classmethod
    def maximum(cls, forms: Iterable[Sequence], nvars: int) -> "PLExpr":
        fs = frozenset(_frac_vec(f) for f in forms)
        return cls(nvars, fs, frozenset([(Fraction(0),) * (nvars + 1)]))

    def __add__(self, other: "PLExpr") -> "PLExpr":
        if self.nvars != other.nvars:
            raise ValueError("arity mismatch")
        return PLExpr(self.nvars, _minkowski(self.pos, other.pos), _minkowski(self.neg, other.neg))

    def __neg__(self) -> "PLExpr":
        return PLExpr(self.nvars, self.neg, self.pos)

    def __sub__(self, other: "PLExpr") -> "PLExpr":
        return self + (-other)

    def scale(self, k: int) -> "PLExpr":
        """Multiply by an integer; negative k swaps the parts."""
        if k < 0:
            return (-self).scale(-k)
        if k == 0:
            z = frozenset([(Fraction(0),) * (self.nvars + 1)])
            return PLExpr(self.nvars, z, z)
        out = self
        for _ in range(k - 1):
            out = out + self
        return out

    def dilate(self, k) -> "PLExpr":
        """Multiply by a positive rational k by scaling every form."""
        k = Fraction(k)
        if k <= 0:
            raise ValueError("dilation factor must be positive")
        return PLExpr(
            self.nvars,
            frozenset(tuple(k * c for c in f) for f in self.pos),
            frozenset(tuple(k * c for c in f) for f in self.neg),
        )

    def reduced(self) -> "PLExpr":
        return PLExpr(self.nvars, frozenset(envelope_vertices(self.pos)), frozenset(envelope_vertices(self.neg)))

    def __repr__(self) -> str:
        def show(fs):
            return "max(" + ", ".join(str(tuple(str(c) for c in f)) for f in sorted(fs)) + ")"
        return f"{show(self.pos)} - {show(self.neg)}"


def _minkowski(s1: frozenset, s2: frozenset) -> frozenset:
    s1 = envelope_vertices(s1)
    s2 = envelope_vertices(s2)
    return frozenset(tuple(a + b for a, b in zip(f, g)) for f in s1 for g in s2)


def _eval_form(f: Form, pt: Sequence[Fraction]) -> Fraction:
    return sum((c * p for c, p in zip(f, pt)), Fraction(0)) + f[-1]


def pl_eval(e: PLExpr, pt) -> Fraction:
    coords = pt.coords if isinstance(pt, TropPoint) else _frac_vec(pt)
    if len(coords) != e.nvars:
        raise ValueError(f"point has {len(coords)} coordinates, expression needs {e.nvars}")
    return max(_eval_form(f, coords) for f in e.pos) - max(_eval_form(f, coords) for f in e.neg)


def _terms_to_forms(p: LaurentPoly) -> frozenset:
    forms = []
    for e, c in p.items():
        positive = c.is_nonnegative() if isinstance(c, OmegaScalar) else c > 0
        if not positive:
            raise ValueError("tropicalization needs a subtraction-free expression")
        forms.append(tuple(Fraction(v) for v in e) + (Fraction(0),))
    return frozenset(forms)


def tropicalize(r) -> PLExpr:
    """Monomials become linear forms, sums become max and quotients differences."""
    if isinstance(r, LaurentPoly):
        r = SFRat(r)
    if not r.num:
        raise ValueError("the zero function has no tropicalization")
    return PLExpr(r.nvars, _terms_to_forms(r.num), _terms_to_forms(r.den))


# exact comparison of upper envelopes
#
# A form is redundant in max(forms) iff a convex combination of the others has
# the same slope and at least its constant.  Floating-point LPs (HiGHS) only
# propose an answer; "kept" is confirmed by an exact witness point, "redundant"
# by an exact simplex over the proposed support.

def _dominated_exact(target: Form, others: Sequence[Form]) -> bool:
    n = len(target) - 1
    # rows: slope equations, simplex equation; variables: lambdas and one slack for the constant
    rows = []
    rhs = []
    for i in range(n):
        rows.append([f[i] for f in others] + [Fraction(0)])
        rhs.append(target[i])
    rows.append([Fraction(1)] * len(others) + [Fraction(0)])
    rhs.append(Fraction(1))
    rows.append([f[n] for f in others] + [Fraction(-1)])
    rhs.append(target[n])
    return _feasible(rows, rhs)


def _feasible(rows: list[list[Fraction]], rhs: list[Fraction]) -> bool:
    """Exact phase-one simplex for {A z = b, z >= 0}, Bland's rule."""
    m = len(rows)
    nv = len(rows[0])
    tab = []
    for i in range(m):
        row = list(rows[i])
        b = rhs[i]
        if b < 0:
            row = [-v for v in row]
            b = -b
        art = [Fraction(int(i == j)) for j in range(m)]
        tab.append(row + art + [b])
    basis = [nv + i for i in range(m)]
    width = nv + m
    cost = [Fraction(0)] * nv + [Fraction(1)] * m + [Fraction(0)]
    # reduced cost row for the artificial objective
    obj = list(cost)
    for i in range(m):
        obj = [o - t for o, t in zip(obj, tab[i])]
    while True:
        enter = next((j for j in range(width) if obj[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            break
        _, r = best
        piv = tab[r][enter]
        tab[r] = [v / piv for v in tab[r]]
        for i in range(m):
            if i != r and tab[i][enter]:
                f = tab[i][enter]
                tab[i] = [a - f * b for a, b in zip(tab[i], tab[r])]
        if obj[enter]:
            f = obj[enter]
            obj = [a - f * b for a, b in zip(obj, tab[r])]
        basis[r] = enter
    return obj[-1] == 0


class _FormTable:
    """A set of forms with denominators cleared once, for repeated LP queries."""

    def __init__(self, forms: list[Form]):
        self.forms = forms
        self.nvars = len(forms[0]) - 1
        den = math.lcm(*(c.denominator for f in forms for c in f))
        self.ints = np.array([[int(c * den) for c in f] for f in forms], dtype=np.int64)
        self.floats = self.ints.astype(float)

    def sample_winners(self, samples: int = 256) -> set[int]:
        """Indices of forms that are the strict maximum at some sample point."""
        n = self.nvars
        rng = np.random.default_rng(len(self.forms) * 131 + n)
        pts = np.vstack([rng.normal(scale=10.0, size=(samples, n)), np.eye(n) * 10.0, -np.eye(n) * 10.0,
                         np.zeros((1, n))])
        vals = pts @ self.floats[:, :n].T + self.floats[:, n]
        if len(self.forms) == 1:
            return {0}
        top2 = np.argsort(vals, axis=1)[:, -2:]
        rows = np.arange(len(pts))
        gap = vals[rows, top2[:, 1]] - vals[rows, top2[:, 0]]
        return {int(i) for i in top2[gap > 1e-7, 1]}

    def beats_exactly(self, i: int, others: np.ndarray, point: np.ndarray) -> bool:
        n = self.nvars
        for bits in (10, 20, 30):
            scale = 1 << bits
            grid = np.round(point * scale).astype(np.int64)
            vals = self.ints[:, :n] @ grid + self.ints[:, n] * scale
            if np.all(vals[others] < vals[i]):
                return True
        return False

    def witness(self, i: int, others: np.ndarray) -> bool:
        """A point where form i is strictly above all others, found numerically and checked exactly."""
        n = self.nvars
        t = self.floats[i]
        g = self.floats[others]
        # variables (p, delta): maximize delta subject to (g - t)(p) + delta <= 0, delta <= 1
        a_ub = np.hstack([g[:, :n] - t[:n], np.ones((len(others), 1))])
        b_ub = t[n] - g[:, n]
        cost = np.zeros(n + 1)
        cost[-1] = -1.0
        res = linprog(cost, A_ub=a_ub, b_ub=b_ub, bounds=[(-1e4, 1e4)] * n + [(None, 1.0)], method="highs")
        if res.status != 0 or -res.fun < 1e-9:
            return False
        return self.beats_exactly(i, others, res.x[:n])

    def support_hint(self, i: int, others: np.ndarray) -> list[int] | None:
        n = self.nvars
        g = self.floats[others]
        a_eq = np.vstack([g[:, :n].T, np.ones((1, len(others)))])
        b_eq = np.append(self.floats[i, :n], 1.0)
        res = linprog(-g[:, n], A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * len(others), method="highs")
        if res.status != 0:
            return None
        return [int(others[j]) for j, v in enumerate(res.x) if v > 1e-9]

    def redundant(self, i: int) -> bool:
        others = np.array([j for j in range(len(self.forms)) if j != i])
        target = self.forms[i]
        if len(others) <= 3:
            return _dominated_exact(target, [self.forms[j] for j in others])
        if self.witness(i, others):
            return False
        hint = self.support_hint(i, others)
        if hint and _dominated_exact(target, [self.forms[j] for j in hint]):
            return True
        return _dominated_exact(target, [self.forms[j] for j in others])


def _dominated(target: Form, others: Sequence[Form]) -> bool:
    """Whether some convex combination of others has the same slope and a constant >= target's."""
    if not others:
        return False
    table = _FormTable([tuple(target), *others])
    return table.redundant(0)


def envelope_vertices(forms) -> list[Form]:
    """Forms not dominated by the convex hull of the others (duplicates collapsed)."""
    best: dict[tuple, Form] = {}
    for f in forms:
        slope = f[:-1]
        if slope not in best or f[-1] > best[slope][-1]:
            best[slope] = f
    forms = sorted(best.values())
    if len(forms) <= 1:
        return forms
    table = _FormTable(forms)
    certain = table.sample_winners()
    return [f for i, f in enumerate(forms) if i in certain or not table.redundant(i)]


def envelope_equal(s1, s2) -> bool:
    # the irredundant pieces of a convex PL function are unique
    return set(envelope_vertices(s1)) == set(envelope_vertices(s2))


def pl_equal(e1: PLExpr, e2: PLExpr) -> bool:
    """max P1 - max N1 == max P2 - max N2 iff max(P1 + N2) == max(P2 + N1)."""
    if e1.nvars != e2.nvars:
        return False
    return envelope_equal(_minkowski(e1.pos, e2.neg), _minkowski(e2.pos, e1.neg))


def pl_compose_linear(e: PLExpr, images: Sequence[PLExpr]) -> PLExpr:
    """Substitute PL expressions for the variables of e (each form must have integer slopes)."""
    nv = images[0].nvars

    def form_value(f: Form) -> PLExpr:
        total = PLExpr.linear([0] * nv, f[-1])
        for c, img in zip(f, images):
            if c.denominator != 1:
                raise ValueError("composition needs integer slopes")
            if c:
                total = total + img.scale(int(c))
        return total

    def maximum(parts: list[PLExpr]) -> PLExpr:
        # max_i (P_i - N_i) = max_i (P_i + sum_{j != i} N_j) - sum_j N_j
        pos = set()
        for i, p in enumerate(parts):
            acc = p.pos
            for j, q in enumerate(parts):
                if j != i:
                    acc = _minkowski(acc, q.neg)
            pos |= acc
        neg = parts[0].neg
        for q in parts[1:]:
            neg = _minkowski(neg, q.neg)
        return PLExpr(nv, frozenset(pos), frozenset(neg))

    top = maximum([form_value(f) for f in e.pos])
    bottom = maximum([form_value(f) for f in e.neg])
    return top - bottom


def trop_p_map(a: Sequence, eps) -> Vector:
    """x_i = sum_j eps_ij a_j."""
    a = _frac_vec(a)
    return tuple(sum((eps[i][j] * a[j] for j in range(len(a))), Fraction(0)) for i in range(len(eps)))


def random_point(rng, n: int, lo: int = -6, hi: int = 6, den: int = 2) -> Vector:
    return tuple(Fraction(rng.randint(lo * den, hi * den), den) for _ in range(n))


def all_words(n: int, length: int):
    return itertools.product(range(n), repeat=length)


def _expand_hinges(base: Form, coeffs: Sequence[Fraction], hinges: Sequence[Form]) -> list[Form]:
    """base + sum c_j max(0, h_j) with c_j >= 0, written as a max of affine forms."""
    out = []
    for pick in itertools.product((False, True), repeat=len(hinges)):
        f = list(base)
        for on, c, h in zip(pick, coeffs, hinges):
            if on and c:
                f = [a + c * b for a, b in zip(f, h)]
        out.append(tuple(f))
    return out


def pl_compose_hinged(e: PLExpr, linear: Sequence[Form], hinges: Sequence[Form], weights) -> PLExpr:
    """Substitute variable i -> linear[i] + sum_j weights[i][j] max(0, hinges[j]).

    Forms in e may have rational slopes; the result stays small because every
    nonlinearity is routed through the shared hinge functions.
    """
    nv = len(linear[0]) - 1
    nh = len(hinges)

    def image(f: Form):
        lin = [Fraction(0)] * nv + [f[-1]]
        for c, li in zip(f, linear):
            if c:
                lin = [a + c * b for a, b in zip(lin, li)]
        hw = [sum((c * Fraction(weights[i][j]) for i, c in enumerate(f[:-1])), Fraction(0)) for j in range(nh)]
        return lin, hw

    def side(forms):
        parts = [image(f) for f in forms]
        lift = [max([Fraction(0)] + [-hw[j] for _, hw in parts]) for j in range(nh)]
        expanded = []
        for lin, hw in parts:
            expanded.extend(_expand_hinges(lin, [h + l for h, l in zip(hw, lift)], hinges))
        return frozenset(expanded), lift

    pos, lift_pos = side(e.pos)
    neg, lift_neg = side(e.neg)
    zero = (Fraction(0),) * (nv + 1)
    # (max P' - sum lift_pos) - (max N' - sum lift_neg)
    add_pos = frozenset(_expand_hinges(zero, lift_neg, hinges))
    add_neg = frozenset(_expand_hinges(zero, lift_pos, hinges))
    return PLExpr(nv, _minkowski(pos, add_pos), _minkowski(neg, add_neg))


def trop_d_mutation_hinged(eps, k: int):
    """Tropical (b, x) mutation at k as (linear images, hinge forms, hinge weights)."""
    n = len(eps)
    nv = 2 * n

    def unit(i, c=1):
        v = [Fraction(0)] * (nv + 1)
        v[i] = Fraction(c)
        return v

    gain = unit(n + k)
    loss = [Fraction(0)] * (nv + 1)
    for j in range(n):
        if eps[k][j] > 0:
            gain[j] += eps[k][j]
        elif eps[k][j] < 0:
            loss[j] += -eps[k][j]
    hinges = [tuple(unit(n + k)), tuple(a - b for a, b in zip(gain, loss))]
    linear = []
    weights = []
    for i in range(n):
        if i == k:
            linear.append(tuple(a - b for a, b in zip(loss, unit(k))))
            weights.append((-1, 1))
        else:
            linear.append(tuple(unit(i)))
            weights.append((0, 0))
    for i in range(n):
        e = eps[k][i]
        if i == k:
            linear.append(tuple(unit(n + k, -1)))
            weights.append((0, 0))
        elif e < 0:
            linear.append(tuple(a - e * b for a, b in zip(unit(n + i), unit(n + k))))
            weights.append((e, 0))
        else:
            linear.append(tuple(unit(n + i)))
            weights.append((e, 0))
    return linear, hinges, weights
