"""Seeds, lattice seeds, doubled lattices and compatible pairs, with their mutations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

Matrix = tuple[tuple[int, ...], ...]


def _as_matrix(rows) -> Matrix:
    return tuple(tuple(int(v) for v in row) for row in rows)


def _pos(x: int) -> int:
    return x if x > 0 else 0


def mutate_integer_matrix(b: Sequence[Sequence[int]], k: int) -> Matrix:
    """Matrix mutation in direction k; rows may outnumber columns."""
    rows = len(b)
    cols = len(b[0]) if rows else 0
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            if i == k or j == k:
                row.append(-b[i][j])
            else:
                bik, bkj = b[i][k], b[k][j]
                row.append(b[i][j] + (abs(bik) * bkj + bik * abs(bkj)) // 2)
        out.append(tuple(row))
    return tuple(out)


@dataclass(frozen=True)
class Seed:
    """Skew-symmetric exchange matrix on an index set with a frozen subset."""

    eps: Matrix
    frozen: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "eps", _as_matrix(self.eps))
        object.__setattr__(self, "frozen", frozenset(int(i) for i in self.frozen))
        m = len(self.eps)
        if any(len(row) != m for row in self.eps):
            raise ValueError("exchange matrix must be square")
        for i in range(m):
            for j in range(m):
                if self.eps[i][j] != -self.eps[j][i]:
                    raise ValueError("exchange matrix must be skew-symmetric")
        if any(i < 0 or i >= m for i in self.frozen):
            raise ValueError("frozen index out of range")

    @property
    def m(self) -> int:
        return len(self.eps)

    @property
    def mutable(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.m) if i not in self.frozen)

    def matrix(self) -> np.ndarray:
        return np.array(self.eps, dtype=np.int64).reshape(self.m, self.m)

    def principal_part(self) -> Matrix:
        idx = self.mutable
        return tuple(tuple(self.eps[i][j] for j in idx) for i in idx)

    def b_matrix(self) -> Matrix:
        """The I x J matrix b_ij = eps_ji used by coefficient and quantum rules."""
        idx = self.mutable
        return tuple(tuple(self.eps[j][i] for j in idx) for i in range(self.m))

    def to_json(self) -> dict:
        return {"m": self.m, "frozen": sorted(self.frozen), "eps": [list(r) for r in self.eps]}

    @classmethod
    def from_json(cls, data: dict) -> "Seed":
        seed = cls(data["eps"], frozenset(data.get("frozen", ())))
        if "m" in data and int(data["m"]) != seed.m:
            raise ValueError("declared size does not match the matrix")
        return seed


def _check_direction(seed: Seed, k: int) -> None:
    if not 0 <= k < seed.m:
        raise IndexError(f"mutation direction {k} out of range")
    if k in seed.frozen:
        raise ValueError(f"cannot mutate at frozen index {k}")


def mutate_matrix(seed: Seed, k: int) -> Seed:
    _check_direction(seed, k)
    return Seed(mutate_integer_matrix(seed.eps, k), seed.frozen)


def mutate_word(seed: Seed, word: Sequence[int]) -> Seed:
    for k in word:
        seed = mutate_matrix(seed, k)
    return seed


@dataclass(frozen=True)
class LatticeSeed:
    """A basis {e_i} of Z^m (columns), a skew form on Z^m and the dual basis {f_i}."""

    basis: Matrix
    form: Matrix
    frozen: frozenset = field(default_factory=frozenset)
    dual: Matrix | None = None

    def __post_init__(self):
        object.__setattr__(self, "basis", _as_matrix(self.basis))
        object.__setattr__(self, "form", _as_matrix(self.form))
        object.__setattr__(self, "frozen", frozenset(self.frozen))
        e = np.array(self.basis, dtype=object)
        if round(abs(float(np.linalg.det(np.array(self.basis, dtype=float))))) != 1:
            raise ValueError("basis is not unimodular")
        if self.dual is None:
            inv = np.linalg.inv(np.array(self.basis, dtype=float))
            object.__setattr__(self, "dual", _as_matrix(np.rint(inv)))
        else:
            object.__setattr__(self, "dual", _as_matrix(self.dual))
        f = np.array(self.dual, dtype=object)
        if not (f.dot(e) == np.eye(self.m, dtype=int)).all():
            raise ValueError("dual basis does not pair to the identity")

    @property
    def m(self) -> int:
        return len(self.basis)

    def vector(self, i: int) -> tuple[int, ...]:
        return tuple(row[i] for row in self.basis)

    def covector(self, i: int) -> tuple[int, ...]:
        return self.dual[i]

    def pairing(self, u: Sequence[int], v: Sequence[int]) -> int:
        return int(sum(u[a] * self.form[a][b] * v[b] for a in range(self.m) for b in range(self.m)))

    def to_seed(self) -> Seed:
        vs = [self.vector(i) for i in range(self.m)]
        return Seed([[self.pairing(vs[i], vs[j]) for j in range(self.m)] for i in range(self.m)], self.frozen)

    @classmethod
    def standard(cls, seed: Seed) -> "LatticeSeed":
        m = seed.m
        ident = [[int(i == j) for j in range(m)] for i in range(m)]
        return cls(ident, seed.eps, seed.frozen, ident)


def mutate_lattice(ls: LatticeSeed, k: int) -> LatticeSeed:
    """e'_k = -e_k, e'_i = e_i + [eps_ik]_+ e_k; f'_k = -f_k + sum_j [-eps_kj]_+ f_j."""
    seed = ls.to_seed()
    _check_direction(seed, k)
    eps = seed.eps
    m = ls.m
    vs = [list(ls.vector(i)) for i in range(m)]
    ek = vs[k]
    new_vs = []
    for i in range(m):
        if i == k:
            new_vs.append([-x for x in ek])
        else:
            c = _pos(eps[i][k])
            new_vs.append([a + c * b for a, b in zip(vs[i], ek)])
    fs = [list(ls.covector(i)) for i in range(m)]
    new_fs = [list(f) for f in fs]
    fk = [-x for x in fs[k]]
    for j in range(m):
        c = _pos(-eps[k][j])
        if c:
            fk = [a + c * b for a, b in zip(fk, fs[j])]
    new_fs[k] = fk
    basis = [[new_vs[j][i] for j in range(m)] for i in range(m)]
    return LatticeSeed(basis, ls.form, ls.frozen, new_fs)


@dataclass(frozen=True)
class DoubledLattice:
    """The lattice Z^m + (Z^m)^dual with basis e_1..e_m, f_1..f_m and its skew form."""

    form: Matrix

    @property
    def rank(self) -> int:
        return len(self.form)

    def pair(self, u: Sequence[int], v: Sequence[int]) -> int:
        n = self.rank
        return int(sum(u[a] * self.form[a][b] * v[b] for a in range(n) for b in range(n)))


def doubled_form_value(eps, v1, phi1, v2, phi2) -> int:
    """((v1, phi1), (v2, phi2)) = (v1, v2) + phi2(v1) - phi1(v2)."""
    m = len(eps)
    base = sum(v1[a] * eps[a][b] * v2[b] for a in range(m) for b in range(m))
    return int(base + sum(p * v for p, v in zip(phi2, v1)) - sum(p * v for p, v in zip(phi1, v2)))


def double_seed(seed: Seed) -> DoubledLattice:
    """Gram matrix [[eps, I], [-I, 0]] of the doubled form in the basis {e_i, f_i}."""
    m = seed.m
    rows = []
    for i in range(m):
        rows.append(list(seed.eps[i]) + [int(i == j) for j in range(m)])
    for i in range(m):
        rows.append([-int(i == j) for j in range(m)] + [0] * m)
    return DoubledLattice(_as_matrix(rows))


class IncompatiblePairError(ValueError):
    pass


@dataclass(frozen=True)
class CompatiblePair:
    """Skew form Lambda (m x m) and exchange matrix B (m x n) with B^t Lambda = (D | 0).

    The first n indices are the mutable ones.
    """

    lam: Matrix
    b: Matrix
    d: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "lam", _as_matrix(self.lam))
        object.__setattr__(self, "b", _as_matrix(self.b))
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        m, n = self.m, self.n
        if any(len(r) != m for r in self.lam) or any(len(r) != n for r in self.b):
            raise IncompatiblePairError("matrix shapes do not match")
        if len(self.d) != n or any(x <= 0 for x in self.d):
            raise IncompatiblePairError("d must be a positive n-vector")
        for i in range(m):
            for j in range(m):
                if self.lam[i][j] != -self.lam[j][i]:
                    raise IncompatiblePairError("Lambda is not skew-symmetric")
        if self.compatibility_product() != self.expected_product():
            raise IncompatiblePairError("B^t Lambda differs from (D | 0)")

    @property
    def m(self) -> int:
        return len(self.lam)

    @property
    def n(self) -> int:
        return len(self.b[0]) if self.b else 0

    def compatibility_product(self) -> Matrix:
        bt = np.array(self.b, dtype=object).T
        return _as_matrix(bt.dot(np.array(self.lam, dtype=object)))

    def expected_product(self) -> Matrix:
        return tuple(
            tuple(self.d[j] if i == j else 0 for i in range(self.m)) for j in range(self.n)
        )

    def to_json(self) -> dict:
        return {"lambda": [list(r) for r in self.lam], "b": [list(r) for r in self.b], "d": list(self.d)}

    @classmethod
    def from_json(cls, data: dict) -> "CompatiblePair":
        return cls(data["lambda"], data["b"], data["d"])


def e_matrix(b: Matrix, k: int, sign: int) -> np.ndarray:
    m = len(b)
    e = np.eye(m, dtype=object)
    e[k, k] = -1
    for i in range(m):
        if i != k:
            e[i, k] = _pos(-sign * b[i][k])
    return e


def mutate_pair(p: CompatiblePair, k: int, sign: int = 1) -> CompatiblePair:
    if not 0 <= k < p.n:
        raise IndexError(f"mutation direction {k} out of range")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    e = e_matrix(p.b, k, sign)
    lam = e.T.dot(np.array(p.lam, dtype=object)).dot(e)
    return CompatiblePair(_as_matrix(lam), mutate_integer_matrix(p.b, k), p.d)


def principal_pair(eps: Sequence[Sequence[int]], d: int = 1) -> CompatiblePair:
    """Compatible pair for B = [eps; I] with Lambda = d [[0, -I], [I, -eps]]."""
    n = len(eps)
    b = [list(r) for r in eps] + [[int(i == j) for j in range(n)] for i in range(n)]
    lam = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        lam[i][n + i] = -d
        lam[n + i][i] = d
        for j in range(n):
            lam[n + i][n + j] = -d * eps[i][j]
    return CompatiblePair(lam, b, [d] * n)
