"""Arithmetic of orbits: rational/dyadic classification, the HNF identity
for tent-branch products, and periodic points of both maps.

Periodic points of the fractional map are located through the nested
cylinders of the periodically repeated word (their intersection is the
unique fixed point of the corresponding inverse-branch composition), then
polished by inverse iteration; the eigenvalue's minimal polynomial is read
off the exact factorization of the branch product's characteristic
polynomial.  Tent-side periodic points are exact rational linear algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
import sympy

from .errors import LemmaViolation, NumericFailure, OutsideDomain
from .exact import Mat, hnf, normalize_proj, primitive_proj_of_point
from .dynamics import (
    apply_branch,
    in_delta,
    monkemeyer_step,
    projective_matrix,
    step,
    tent_step,
    v1,
)
from .simplexes import (
    Point,
    UniSimplex,
    as_point,
    base_matrices,
    check_word,
    diameter,
    word_product,
)

ORBIT_BUDGET = 100_000


@dataclass(frozen=True)
class PointClassification:
    """How a rational point drains to the zero vertex under both maps."""

    m_steps_to_v1: int
    dyadic: bool
    dyadic_exponent: int | None
    t_steps_to_v1: int | None
    t_bound: int | None
    t_preperiod: int
    t_period: int

    def to_json(self) -> dict:
        return {
            "m_steps_to_v1": self.m_steps_to_v1,
            "dyadic": self.dyadic,
            "dyadic_exponent": self.dyadic_exponent,
            "t_steps_to_v1": self.t_steps_to_v1,
            "t_bound": self.t_bound,
            "t_preperiod": self.t_preperiod,
            "t_period": self.t_period,
        }


def _require_rational_in_delta(p: Sequence) -> Point:
    q = as_point(p)
    if not in_delta(q):
        raise OutsideDomain("point outside the simplex")
    return q


def _steps_to_v1(which: str, p: Point, budget: int = ORBIT_BUDGET) -> int:
    zero = v1(len(p))
    pt = p
    for k in range(budget + 1):
        if pt == zero:
            return k
        _, pt = step(which, pt)
    raise LemmaViolation(
        f"{which}-orbit did not reach the zero vertex within {budget} steps"
    )


def classify_point(p: Sequence) -> PointClassification:
    """Exact orbit classification of a rational point.

    Every rational point reaches the zero vertex under the fractional map;
    dyadic points reach it under the tent map within m*n + n steps where
    2^m clears all denominators.  Non-dyadic points are merely tent-
    preperiodic, and the preperiod/period pair is reported instead.
    """
    q = _require_rational_in_delta(p)
    n = len(q)
    m_steps = _steps_to_v1("M", q)
    dens = [Fraction(x).denominator for x in q]
    dyadic = all(d & (d - 1) == 0 for d in dens)
    pre, per = tent_preperiodic(q)
    if dyadic:
        m = max(d.bit_length() - 1 for d in dens)
        bound = m * n + n
        t_steps = _steps_to_v1("T", q, budget=bound)
        return PointClassification(m_steps, True, m, t_steps, bound, pre, per)
    return PointClassification(m_steps, False, None, None, None, pre, per)


def tent_preperiodic(p: Sequence) -> tuple[int, int]:
    """(preperiod, period) of the exact tent orbit; always halts because the
    orbit lives in the finite grid with the input's denominator."""
    pt = _require_rational_in_delta(p)
    seen = {pt: 0}
    k = 0
    while True:
        _, pt = tent_step(pt)
        k += 1
        if pt in seen:
            return seen[pt], k - seen[pt]
        seen[pt] = k


@lru_cache(maxsize=None)
def tent_reduced_matrices(n: int) -> tuple[Mat, Mat]:
    """The n x n linear parts Q_0, Q_1 of the two tent branches (last
    projective row and column dropped)."""
    out = []
    for a in (0, 1):
        t = projective_matrix(n, "T", a)
        out.append(Mat.from_rows([row[:-1] for row in t.rows[:-1]]))
    return tuple(out)


def q0_matrix(n: int) -> Mat:
    return tent_reduced_matrices(n)[0]


def hnf_equiv(word: str, n: int) -> bool:
    """Whether the reversed-word product Q_{a_{t-1}} ... Q_{a_0} and the
    power Q_0^t share the same Hermite normal form."""
    check_word(word)
    if not word:
        raise ValueError("need a nonempty word")
    q0, q1 = tent_reduced_matrices(n)
    prod = Mat.identity(n)
    for a in reversed(word):
        prod = (q0, q1)[int(a)] @ prod
    power = Mat.identity(n)
    for _ in word:
        power = q0 @ power
    return hnf(prod) == hnf(power)


@dataclass(frozen=True)
class PeriodicPointInfo:
    """A periodic point of one of the two maps for a given period word.

    Fractional-map points are floats with the exact minimal polynomial of
    the branch product's positive-orthant eigenvalue; tent-map points are
    exact rationals with eigenvalue 1.
    """

    word: str
    eigenvalue_minpoly: tuple[int, ...]  # ascending coefficients
    degree: int
    point: tuple
    residual: float
    eigenvalue: float

    def to_json(self) -> dict:
        return {
            "word": self.word,
            "eigenvalue_minpoly": list(self.eigenvalue_minpoly),
            "degree": self.degree,
            "point": [str(x) if isinstance(x, Fraction) else x for x in self.point],
            "residual": self.residual,
            "eigenvalue": self.eigenvalue,
        }


def _char_factors(m: Mat) -> list[tuple[sympy.Poly, int]]:
    x = sympy.Symbol("x")
    sm = sympy.Matrix([[int(e) for e in row] for row in m.rows])
    poly = sm.charpoly(x)
    _, factors = sympy.factor_list(poly.as_expr(), x)
    return [(sympy.Poly(f, x), mult) for f, mult in factors]


def _positive_real_roots(poly: sympy.Poly) -> list[float]:
    return [float(r.evalf(30)) for r in sympy.real_roots(poly) if r.is_positive]


def monkemeyer_periodic_point(word: str, n: int,
                              cylinder_tol: float = 1e-12) -> PeriodicPointInfo:
    """Periodic point of the fractional map with period word `word`.

    The point is the intersection of the nested cylinders of the repeated
    word; its lift is the unique positive-orthant eigenvector of the word's
    branch-matrix product.
    """
    check_word(word)
    if not word:
        raise ValueError("need a nonempty word")
    s = len(word)
    base = base_matrices(n)
    p_mat = Mat.identity(n + 1)
    for a in word:
        p_mat = p_mat @ (base.A0, base.A1)[int(a)]
    p_np = np.array([[float(e) for e in row] for row in p_mat.rows])

    # nested cylinders of word^k shrink onto the periodic point
    frame = base.V
    kmax = max(40, math.ceil(400 / s))
    q_tilde = None
    for _ in range(kmax):
        frame = frame @ p_mat
        simplex = UniSimplex(frame)
        q_tilde = tuple(
            float(sum(v[i] for v in simplex.vertices)) / (n + 1) for i in range(n)
        )
        if diameter(simplex) < cylinder_tol:
            break

    v_np = np.array([[float(e) for e in row] for row in base.V.rows])
    u0 = np.linalg.solve(v_np, np.array(list(q_tilde) + [1.0]))
    rho_est = float(np.sum(p_np @ u0) / np.sum(u0))

    # exact minimal polynomial: the factor owning the orthant eigenvalue
    candidates = []
    for poly, _ in _char_factors(p_mat):
        for r in _positive_real_roots(poly):
            candidates.append((poly, r))
    if not candidates:
        raise LemmaViolation("no positive real eigenvalue found")
    poly, rho = min(candidates, key=lambda c: abs(c[1] - rho_est))

    u = _inverse_iterate(p_np, rho, u0)
    lift = v_np @ u
    if lift[-1] < 0:
        lift = -lift
    point = tuple(float(x) for x in lift[:-1] / lift[-1])

    # polish the eigenvalue estimate on the refined eigenvector
    rho_refined = float(np.sum(p_np @ u) / np.sum(u))
    if abs(rho_refined - rho) > 1e-8 * max(1.0, abs(rho)):
        raise NumericFailure(
            f"eigenvalue mismatch: refined {rho_refined} vs root {rho}"
        )

    residual = _float_orbit_residual(word, point)
    if residual > 1e-10:
        raise NumericFailure(f"periodic-point residual {residual} exceeds 1e-10")
    coeffs = tuple(int(c) for c in reversed(poly.all_coeffs()))
    if poly.degree() > n + 1:
        raise LemmaViolation("minimal polynomial degree exceeds n+1")
    return PeriodicPointInfo(
        word=word,
        eigenvalue_minpoly=coeffs,
        degree=poly.degree(),
        point=point,
        residual=residual,
        eigenvalue=rho,
    )


def _inverse_iterate(p_np: np.ndarray, rho: float, u0: np.ndarray,
                     rounds: int = 4) -> np.ndarray:
    d = p_np.shape[0]
    shift = rho * (1 + 1e-12)
    u = u0.copy()
    norm = np.linalg.norm(u)
    u = u / norm if norm > 0 else np.ones(d) / math.sqrt(d)
    for _ in range(rounds):
        try:
            w = np.linalg.solve(p_np - shift * np.eye(d), u)
        except np.linalg.LinAlgError:
            break
        nw = np.linalg.norm(w)
        if not np.isfinite(nw) or nw == 0:
            break
        u = w / nw
    if u.sum() < 0:
        u = -u
    # the orthant eigenvector has nonnegative entries; clip float dust
    return np.clip(u, 0.0, None)


def _float_orbit_residual(word: str, point: tuple) -> float:
    xs = tuple(float(x) for x in point)
    cur = xs
    for a in word:
        x1, xn = cur[0], cur[-1]
        tail = tuple(cur[j] - xn for j in range(len(cur) - 1))
        if int(a) == 0:
            den = 1 - xn
            cur = (x1 / den,) + tuple(t / den for t in tail)
        else:
            den = x1
            cur = ((1 - xn) / den,) + tuple(t / den for t in tail)
    return math.sqrt(sum((a - b) ** 2 for a, b in zip(cur, xs)))


def tent_periodic_point(word: str, n: int) -> PeriodicPointInfo:
    """The unique tent-periodic point with the given period word: exact
    solution of (T_{a_{s-1}} ... T_{a_0} - I) x = 0 on the projective plane."""
    check_word(word)
    if not word:
        raise ValueError("need a nonempty word")
    t_star = Mat.identity(n + 1)
    for a in word:
        t_star = projective_matrix(n, "T", int(a)) @ t_star
    lin = [[Fraction(t_star.rows[i][j]) - (1 if i == j else 0) for j in range(n)]
           for i in range(n)]
    rhs = [-Fraction(t_star.rows[i][n]) for i in range(n)]
    try:
        sol = Mat.from_rows(lin).inverse().matvec(tuple(rhs))
    except Exception as exc:
        raise LemmaViolation("tent fixed-point system is singular") from exc
    point = tuple(Fraction(x) for x in sol)
    if not in_delta(point):
        raise LemmaViolation("tent periodic point fell outside the simplex")
    cur = point
    for _ in word:
        _, cur = tent_step(cur)
    if cur != point:
        raise LemmaViolation("tent periodic point is not exactly periodic")
    return PeriodicPointInfo(
        word=word,
        eigenvalue_minpoly=(-1, 1),
        degree=1,
        point=point,
        residual=0.0,
        eigenvalue=1.0,
    )


def rational_becomes_vertex(p: Sequence, budget: int = ORBIT_BUDGET) -> int:
    """Smallest depth t at which the point appears among the vertices of the
    depth-t fractional partition (searched along the point's own itinerary)."""
    q = _require_rational_in_delta(p)
    n = len(q)
    target = primitive_proj_of_point(q)
    base = base_matrices(n)
    frame = base.V
    pt = q
    for t in range(budget + 1):
        for j in range(n + 1):
            if normalize_proj(frame.col(j)) == target:
                return t
        a, pt = monkemeyer_step(pt)
        frame = frame @ (base.A0, base.A1)[a]
    raise LemmaViolation(f"point did not become a vertex within {budget} steps")


def vertex_drain_consistency(p: Sequence) -> bool:
    """Check that first-hit time of the zero vertex equals vertex time plus
    the drain length of the vertex it becomes."""
    q = _require_rational_in_delta(p)
    n = len(q)
    t0 = rational_becomes_vertex(q)
    base = base_matrices(n)
    frame = base.V
    pt = q
    for _ in range(t0):
        a, pt = monkemeyer_step(pt)
        frame = frame @ (base.A0, base.A1)[a]
    target = primitive_proj_of_point(q)
    j0 = next(
        j for j in range(n + 1) if normalize_proj(frame.col(j)) == target
    )
    return _steps_to_v1("M", q) == t0 + j0
