"""Exact linear algebra over the integers and rationals.

Dense immutable square matrices with `int` or `fractions.Fraction` entries,
exact determinants and inverses, Hermite normal form, and primitive
projective vectors.  Everything here is pure and deterministic; no floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NotUnimodular, PointAtInfinity, SingularMatrix

Entry = int | Fraction


def _coerce(x) -> Entry:
    if isinstance(x, bool):
        raise TypeError("bool is not a matrix entry")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else x
    raise TypeError(f"matrix entries must be int or Fraction, got {type(x).__name__}")


@dataclass(frozen=True)
class Mat:
    """Immutable square matrix with exact entries.

    Integer matrices keep `int` entries (integral Fractions are demoted on
    construction), so structural equality doubles as value equality.
    """

    rows: tuple[tuple[Entry, ...], ...]

    @staticmethod
    def from_rows(rows: Iterable[Iterable]) -> "Mat":
        rs = tuple(tuple(_coerce(x) for x in row) for row in rows)
        if not rs or any(len(r) != len(rs) for r in rs):
            raise ValueError("matrix must be square and nonempty")
        return Mat(rs)

    @staticmethod
    def identity(n: int) -> "Mat":
        return Mat(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __matmul__(self, other: "Mat") -> "Mat":
        n = self.dim
        if other.dim != n:
            raise ValueError("dimension mismatch")
        cols = tuple(zip(*other.rows))
        return Mat(
            tuple(
                tuple(_coerce(Fraction(sum(a * b for a, b in zip(row, col)))) for col in cols)
                for row in self.rows
            )
        )

    def matvec(self, v: Sequence) -> tuple:
        if len(v) != self.dim:
            raise ValueError("dimension mismatch")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.rows)

    def col(self, j: int) -> tuple:
        return tuple(row[j] for row in self.rows)

    def transpose(self) -> "Mat":
        return Mat(tuple(zip(*self.rows)))

    def is_integer(self) -> bool:
        return all(isinstance(x, int) for row in self.rows for x in row)

    def to_int(self) -> "Mat":
        """Cast to integer entries; fails if any entry is a proper fraction."""
        if not self.is_integer():
            raise ValueError("matrix has non-integer entries")
        return self

    def scale_col(self, j: int, c) -> "Mat":
        return Mat(
            tuple(
                tuple(_coerce(Fraction(x * c)) if k == j else x for k, x in enumerate(row))
                for row in self.rows
            )
        )

    def det(self) -> Fraction:
        """Exact determinant by fraction Gaussian elimination."""
        n = self.dim
        a = [[Fraction(x) for x in row] for row in self.rows]
        det = Fraction(1)
        for k in range(n):
            piv = next((i for i in range(k, n) if a[i][k] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != k:
                a[k], a[piv] = a[piv], a[k]
                det = -det
            det *= a[k][k]
            inv = 1 / a[k][k]
            for i in range(k + 1, n):
                f = a[i][k] * inv
                if f:
                    a[i] = [x - f * y for x, y in zip(a[i], a[k])]
        return det

    def inverse(self) -> "Mat":
        """Exact inverse over the rationals (Gauss-Jordan)."""
        n = self.dim
        a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
             for i, row in enumerate(self.rows)]
        for k in range(n):
            piv = next((i for i in range(k, n) if a[i][k] != 0), None)
            if piv is None:
                raise SingularMatrix("matrix is singular")
            a[k], a[piv] = a[piv], a[k]
            inv = 1 / a[k][k]
            a[k] = [x * inv for x in a[k]]
            for i in range(n):
                if i != k and a[i][k]:
                    f = a[i][k]
                    a[i] = [x - f * y for x, y in zip(a[i], a[k])]
        return Mat.from_rows([row[n:] for row in a])

    def json_rows(self) -> list[list[str]]:
        return [[str(Fraction(x)) for x in row] for row in self.rows]


def hnf(a: Mat) -> Mat:
    """Row Hermite normal form H = X*A with det(X) = +-1.

    H is upper triangular with positive diagonal and 0 <= H[i][j] < H[j][j]
    above it.  Column-pivot Euclidean reduction; input must be a nonsingular
    integer matrix.
    """
    m = a.to_int()
    n = m.dim
    if m.det() == 0:
        raise SingularMatrix("HNF requires a nonsingular matrix")
    h = [list(row) for row in m.rows]
    for j in range(n):
        while True:
            nonzero = [i for i in range(j, n) if h[i][j] != 0]
            if not nonzero:
                raise SingularMatrix("HNF reduction hit a zero column")
            piv = min(nonzero, key=lambda i: abs(h[i][j]))
            if piv != j:
                h[j], h[piv] = h[piv], h[j]
            done = True
            for i in range(j + 1, n):
                if h[i][j]:
                    q = h[i][j] // h[j][j]
                    h[i] = [x - q * y for x, y in zip(h[i], h[j])]
                    if h[i][j]:
                        done = False
            if done:
                break
        if h[j][j] < 0:
            h[j] = [-x for x in h[j]]
    for j in range(n):
        for i in range(j):
            q = h[i][j] // h[j][j]
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[j])]
    return Mat.from_rows(h)


def unimodular_inverse(a: Mat) -> Mat:
    """Integer inverse of a determinant +-1 integer matrix."""
    m = a.to_int()
    if abs(m.det()) != 1:
        raise NotUnimodular("matrix determinant is not +-1")
    return m.inverse().to_int()


def normalize_proj(v: Sequence[int]) -> tuple[int, ...]:
    """Primitive projective coordinates: divide by the gcd, make the last
    coordinate positive.  The last coordinate must be nonzero."""
    w = tuple(int(x) for x in v)
    if len(w) < 2 or all(x == 0 for x in w):
        raise ValueError("need a nonzero vector of length >= 2")
    if w[-1] == 0:
        raise PointAtInfinity("last projective coordinate is zero")
    g = math.gcd(*w)
    w = tuple(x // g for x in w)
    if w[-1] < 0:
        w = tuple(-x for x in w)
    return w


def primitive_proj_of_point(p: Sequence[Fraction]) -> tuple[int, ...]:
    """Lift an affine rational point to its primitive projective vector."""
    fracs = [Fraction(x) for x in p]
    d = math.lcm(*(f.denominator for f in fracs)) if fracs else 1
    return normalize_proj(tuple(int(f * d) for f in fracs) + (d,))
