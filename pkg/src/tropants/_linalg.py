"""Exact linear algebra over the rationals.

Small dense helpers (determinant, row reduction, kernels, inverses, inertia)
plus a sparse incremental echelon basis used for the larger rank problems.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vec = tuple
Matrix = list


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def to_matrix(rows: Iterable[Iterable]) -> list[list[Fraction]]:
    return [[frac(x) for x in row] for row in rows]


def det(rows: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-free elimination (Bareiss) when integral."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in m):
        raise ValueError("determinant of a non-square matrix")
    integral = all(isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1) for r in m for x in r)
    if not integral:
        a = to_matrix(m)
        sign = 1
        out = Fraction(1)
        for c in range(n):
            p = next((r for r in range(c, n) if a[r][c] != 0), None)
            if p is None:
                return Fraction(0)
            if p != c:
                a[c], a[p] = a[p], a[c]
                sign = -sign
            out *= a[c][c]
            for r in range(c + 1, n):
                if a[r][c]:
                    f = a[r][c] / a[c][c]
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return sign * out
    a = [[int(x) for x in r] for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            p = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if p is None:
                return Fraction(0)
            a[k], a[p] = a[p], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return Fraction(sign * a[n - 1][n - 1])


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    a = to_matrix(rows)
    if not a:
        return a, []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : A x = 0}."""
    if not rows:
        if ncols is None:
            raise ValueError("need ncols for an empty matrix")
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    ncols = len(rows[0])
    red, piv = rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, p in enumerate(piv):
            x[p] = -red[i][f]
        basis.append(x)
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One solution of A x = b, or None if inconsistent."""
    n = len(a[0]) if a else 0
    aug = [list(r) + [bi] for r, bi in zip(a, b)]
    red, piv = rref(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for i, p in enumerate(piv):
        x[p] = red[i][n]
    return x


def inverse(a: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(a)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(a)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red[:n]]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def matmul(a, b):
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def dot(u: Sequence, v: Sequence):
    return sum((x * y for x, y in zip(u, v)), 0)


def quad(g: Sequence[Sequence], u: Sequence, v: Sequence | None = None):
    """u . g v"""
    if v is None:
        v = u
    return dot(u, matvec(g, v))


def inertia(q: Sequence[Sequence]) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of a symmetric rational matrix.

    Symmetric elimination by congruence; Sylvester's law makes the counts exact.
    """
    a = to_matrix(q)
    n = len(a)
    for i in range(n):
        for j in range(n):
            if a[i][j] != a[j][i]:
                raise ValueError("matrix is not symmetric")
    pos = neg = 0
    idx = list(range(n))
    while idx:
        p = next((i for i in idx if a[i][i] != 0), None)
        if p is None:
            pair = next(((i, j) for i in idx for j in idx if i < j and a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # row/col i += row/col j makes the diagonal entry 2 a_ij
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            p = i
        d = a[p][p]
        if d > 0:
            pos += 1
        else:
            neg += 1
        rest = [i for i in idx if i != p]
        for i in rest:
            f = a[i][p] / d
            if f:
                for k in rest:
                    a[i][k] -= f * a[p][k]
        for i in rest:
            a[i][p] = a[p][i] = Fraction(0)
        idx = rest
    return pos, neg, n - pos - neg


def is_positive_definite(q) -> bool:
    pos, _, _ = inertia(q)
    return pos == len(q)


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b) if a and b else 0


def primitive(v: Sequence) -> tuple[int, ...]:
    """Primitive integer vector on the ray through a nonzero rational vector."""
    fr = [frac(x) for x in v]
    den = 1
    for x in fr:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        raise ValueError("zero vector has no primitive direction")
    return tuple(x // g for x in ints)


def affine_rank(points: Sequence[Sequence]) -> int:
    if len(points) <= 1:
        return 0
    p0 = points[0]
    return rank([[frac(a) - frac(b) for a, b in zip(p, p0)] for p in points[1:]])


class EchelonBasis:
    """Incremental row-echelon basis of sparse rational vectors.

    Vectors are dicts {index: value}. Each stored row has a distinct pivot
    equal to its smallest key, so reduction terminates left to right.
    With ``track=True`` every stored row remembers which inserted vectors
    it combines, and dependencies found by ``add`` are returned.
    """

    def __init__(self, track: bool = False):
        self.rows: dict = {}
        self.track = track
        self.combo: dict = {}
        self.count = 0

    def _reduce(self, vec: dict, combo: dict | None):
        vec = {k: frac(x) for k, x in vec.items() if x}
        while vec:
            p = min(vec)
            row = self.rows.get(p)
            if row is None:
                return vec, p, combo
            f = vec[p] / row[p]
            for k, x in row.items():
                y = vec.get(k, 0) - f * x
                if y:
                    vec[k] = y
                else:
                    vec.pop(k, None)
            if combo is not None:
                for k, x in self.combo[p].items():
                    y = combo.get(k, 0) - f * x
                    if y:
                        combo[k] = y
                    else:
                        combo.pop(k, None)
        return vec, None, combo

    def add(self, vec: dict):
        """Insert a vector. Returns True if it was independent.

        With tracking, a dependent vector returns its relation instead:
        a dict {insertion index: coefficient} summing to zero.
        """
        combo = {self.count: Fraction(1)} if self.track else None
        self.count += 1
        red, p, combo = self._reduce(vec, combo)
        if p is None:
            return combo if self.track else False
        self.rows[p] = red
        if self.track:
            self.combo[p] = combo
        return True

    def contains(self, vec: dict) -> bool:
        red, _, _ = self._reduce(vec, None)
        return not red

    @property
    def rank(self) -> int:
        return len(self.rows)


def sparse_rank(vectors: Iterable[dict]) -> int:
    eb = EchelonBasis()
    for v in vectors:
        eb.add(v)
    return eb.rank
