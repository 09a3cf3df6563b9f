"""Rational simplexes and the two families of cylinder simplexes.

The ambient simplex is the order simplex 1 >= x_1 >= ... >= x_n >= 0,
given projectively by the columns of the matrix V(n).  Depth-t cylinders
come in two flavours: the piecewise-fractional side (columns of
V*A_{a_0}*...*A_{a_{t-1}}, unimodular) and the piecewise-affine tent side
(columns of V*B_{a_0}*...*B_{a_{t-1}}, column-stochastic).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence, Union

from .errors import (
    DegenerateSimplex,
    InvalidDimension,
    InvalidProjectiveFrame,
)
from .exact import Mat, normalize_proj, primitive_proj_of_point

Point = tuple[Fraction, ...]


def as_point(coords: Sequence) -> Point:
    return tuple(Fraction(x) for x in coords)


def check_word(word: str) -> str:
    if any(c not in "01" for c in word):
        raise ValueError(f"word must consist of '0'/'1' digits: {word!r}")
    return word


class BaseMatrices(NamedTuple):
    V: Mat
    A0: Mat
    A1: Mat
    B0: Mat
    B1: Mat


@lru_cache(maxsize=None)
def base_matrices(n: int) -> BaseMatrices:
    """The five defining (n+1)x(n+1) matrices for dimension n.

    V has 1 at (i,j) iff i = n+1 or (j >= 2 and i+j <= n+2); A_a has 1 at
    (1,1) for a=0 / (2,1) for a=1, at (1,n+1), (2,n+1), and at (j+1,j) for
    2 <= j <= n.  B_a equals A_a with the two last-column 1's halved.
    """
    if n < 1:
        raise InvalidDimension("dimension must be >= 1")
    d = n + 1
    v = [[0] * d for _ in range(d)]
    for i in range(1, d + 1):
        for j in range(1, d + 1):
            if i == d or (j >= 2 and i + j <= n + 2):
                v[i - 1][j - 1] = 1

    def a_mat(a: int, half_last: bool) -> Mat:
        one = Fraction(1, 2) if half_last else 1
        m = [[0] * d for _ in range(d)]
        m[0 if a == 0 else 1][0] = 1
        m[0][d - 1] = one
        m[1][d - 1] = one
        for j in range(2, n + 1):
            m[j][j - 1] = 1
        return Mat.from_rows(m)

    return BaseMatrices(
        V=Mat.from_rows(v),
        A0=a_mat(0, False),
        A1=a_mat(1, False),
        B0=a_mat(0, True),
        B1=a_mat(1, True),
    )


def word_product(n: int, word: str, side: str) -> Mat:
    """V times the product of A- (side 'farey') or B- (side 'tent') matrices
    indexed by the digits of `word`."""
    check_word(word)
    if side not in ("farey", "tent"):
        raise ValueError(f"unknown side {side!r}")
    base = base_matrices(n)
    factors = (base.A0, base.A1) if side == "farey" else (base.B0, base.B1)
    m = base.V
    for c in word:
        m = m @ factors[int(c)]
    return m


@dataclass(frozen=True)
class UniSimplex:
    """Simplex whose vertices are the columns of a unimodular integer matrix
    with positive last row (primitive projective coordinates)."""

    columns: Mat

    def __post_init__(self):
        m = self.columns.to_int()
        if abs(m.det()) != 1:
            raise InvalidProjectiveFrame("vertex matrix is not unimodular")
        if any(x <= 0 for x in m.rows[-1]):
            raise InvalidProjectiveFrame("last row must be positive")

    @property
    def dim(self) -> int:
        return self.columns.dim - 1

    def proj_columns(self) -> tuple[tuple[int, ...], ...]:
        return tuple(normalize_proj(self.columns.col(j)) for j in range(self.columns.dim))

    @property
    def vertices(self) -> tuple[Point, ...]:
        out = []
        for j in range(self.columns.dim):
            c = self.columns.col(j)
            out.append(tuple(Fraction(x, c[-1]) for x in c[:-1]))
        return tuple(out)

    def to_rat(self) -> "RatSimplex":
        return RatSimplex(self.vertices)


@dataclass(frozen=True)
class RatSimplex:
    """Simplex with rational affine vertices, affinely independent."""

    vertices: tuple[Point, ...]

    def __post_init__(self):
        vs = tuple(as_point(v) for v in self.vertices)
        object.__setattr__(self, "vertices", vs)
        if len(vs) != len(vs[0]) + 1:
            raise DegenerateSimplex("need n+1 vertices in dimension n")
        if _lifted_matrix(vs).det() == 0:
            raise DegenerateSimplex("vertices are affinely dependent")

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


Simplex = Union[UniSimplex, RatSimplex]


def _lifted_matrix(vertices: Sequence[Point]) -> Mat:
    # columns (v_j, 1): the projective frame on the plane x_{n+1} = 1
    rows = [[v[i] for v in vertices] for i in range(len(vertices) - 1)]
    rows.append([1] * len(vertices))
    return Mat.from_rows(rows)


def _vertices_of(s) -> tuple[Point, ...]:
    if isinstance(s, RatSimplex):
        return s.vertices
    if isinstance(s, UniSimplex):
        return s.to_rat().vertices
    # raw vertex sequence: degenerate configurations allowed (tests, diameters)
    return tuple(as_point(v) for v in s)


def farey_cylinder(n: int, word: str) -> UniSimplex:
    """Depth-|word| cylinder on the piecewise-fractional side."""
    return UniSimplex(word_product(n, word, "farey"))


def tent_cylinder(n: int, word: str) -> RatSimplex:
    """Depth-|word| cylinder on the tent side."""
    m = word_product(n, word, "tent")
    vs = []
    for j in range(m.dim):
        c = m.col(j)
        vs.append(tuple(Fraction(x, c[-1]) for x in c[:-1]))
    return RatSimplex(tuple(vs))


def standard_simplex(n: int) -> UniSimplex:
    return farey_cylinder(n, "")


def cylinder_frames(n: int, depth: int, side: str):
    """Yield (word, frame matrix) for every word of the given depth, sharing
    prefix products (cheap exhaustive sweeps)."""
    if side not in ("farey", "tent"):
        raise ValueError(f"unknown side {side!r}")
    base = base_matrices(n)
    factors = (base.A0, base.A1) if side == "farey" else (base.B0, base.B1)

    def rec(word: str, frame: Mat):
        if len(word) == depth:
            yield word, frame
            return
        for a in (0, 1):
            yield from rec(word + str(a), frame @ factors[a])

    yield from rec("", base.V)


def diameter(s: Simplex) -> float:
    """Max Euclidean distance over vertex pairs (float; exact squared norms)."""
    vs = _vertices_of(s)
    best = Fraction(0)
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            d2 = sum((a - b) ** 2 for a, b in zip(vs[i], vs[j]))
            if d2 > best:
                best = d2
    return math.sqrt(best)


def barycentric(p: Sequence, s: Simplex) -> tuple[Fraction, ...]:
    """Exact barycentric coordinates of p in s; p in s iff all entries >= 0."""
    vs = _vertices_of(s)
    try:
        inv = _lifted_matrix(vs).inverse()
    except Exception as exc:
        raise DegenerateSimplex("degenerate simplex") from exc
    rhs = tuple(Fraction(x) for x in p) + (Fraction(1),)
    return tuple(Fraction(x) for x in inv.matvec(rhs))


def contains(s: Simplex, p: Sequence) -> bool:
    return all(a >= 0 for a in barycentric(p, s))


def barycenter(s: Simplex) -> Point:
    vs = _vertices_of(s)
    k = len(vs)
    return tuple(sum(v[i] for v in vs) / k for i in range(len(vs[0])))


def simplex_lebesgue(s: Simplex) -> Fraction:
    """Lebesgue measure normalized so the ambient simplex has measure 1:
    |det L| / prod(last row of L) for any projective vertex frame L with
    positive last row."""
    if isinstance(s, UniSimplex):
        m = s.columns
    else:
        cols = [primitive_proj_of_point(v) for v in s.vertices]
        m = Mat.from_rows([[col[i] for col in cols] for i in range(len(cols))])
    last = m.rows[-1]
    if any(x <= 0 for x in last):
        raise InvalidProjectiveFrame("last row of the vertex frame must be positive")
    prod = 1
    for x in last:
        prod *= x
    return abs(Fraction(m.det())) / prod


def mesh(n: int, t: int, side: str) -> float:
    """Max diameter over all depth-t cylinders on the given side."""
    make = farey_cylinder if side == "farey" else tent_cylinder
    best = 0.0
    for k in range(2**t):
        word = format(k, f"0{t}b") if t else ""
        best = max(best, diameter(make(n, word)))
    return best


def simplex_record(n: int, word: str, side: str) -> dict:
    """JSON-ready record for one cylinder simplex."""
    s = farey_cylinder(n, word) if side == "farey" else tent_cylinder(n, word)
    vs = _vertices_of(s)
    return {
        "word": word,
        "side": side,
        "vertices": [[str(x) for x in v] for v in vs],
        "measure": str(simplex_lebesgue(s)),
        "diameter": diameter(s),
    }
