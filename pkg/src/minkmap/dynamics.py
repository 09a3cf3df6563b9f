"""The piecewise-fractional map M and the piecewise-affine tent map T.

Both act on the order simplex 1 >= x_1 >= ... >= x_n >= 0.  Branch 0 is
the region x_1 + x_n <= 1 (boundary points get digit 0); branch 1 the
complement.  In affine coordinates:

    M0(x) = (x_1/(1-x_n), (x_1-x_n)/(1-x_n), ..., (x_{n-1}-x_n)/(1-x_n))
    M1(x) = ((1-x_n)/x_1, (x_1-x_n)/x_1,   ..., (x_{n-1}-x_n)/x_1)
    T0(x) = (x_1+x_n,   x_1-x_n, ..., x_{n-1}-x_n)
    T1(x) = (2-x_1-x_n, x_1-x_n, ..., x_{n-1}-x_n)

For n = 1 these are the classical Farey and tent maps on [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import NumericFailure, OutsideDomain
from .exact import Mat
from .simplexes import Point, as_point, base_matrices

DEFAULT_BUDGET = 10_000
FLOAT_DOMAIN_TOL = 1e-12


def v1(n: int) -> Point:
    return tuple(Fraction(0) for _ in range(n))


def in_delta(p: Sequence) -> bool:
    """Exact membership in the order simplex (rational coordinates)."""
    xs = as_point(p)
    return all(a >= b for a, b in zip(xs, xs[1:])) and xs[0] <= 1 and xs[-1] >= 0


def _require_in_delta(p: Sequence) -> Point:
    xs = as_point(p)
    if not in_delta(xs):
        raise OutsideDomain(f"point {tuple(map(str, xs))} is outside the simplex")
    return xs


def apply_branch(which: str, a: int, p: Sequence, check: bool = True) -> Point:
    """Apply one branch formula exactly, without the digit decision.

    With check=False the affine/fractional formula is evaluated as-is,
    which is meaningful slightly outside the branch domain too.
    """
    xs = as_point(p)
    if check:
        _require_in_delta(xs)
    x1, xn = xs[0], xs[-1]
    tail = tuple(xs[j] - xn for j in range(len(xs) - 1))
    if which == "M":
        if a == 0:
            den = 1 - xn
            if den == 0:  # only the vertex (1,...,1), which lies in branch 1
                raise OutsideDomain("fractional branch 0 undefined at x_n = 1")
            return (x1 / den,) + tuple(t / den for t in tail)
        if x1 == 0:
            raise OutsideDomain("fractional branch 1 undefined at x_1 = 0")
        return ((1 - xn) / x1,) + tuple(t / x1 for t in tail)
    if which == "T":
        head = x1 + xn if a == 0 else 2 - x1 - xn
        return (head,) + tail
    raise ValueError(f"unknown map {which!r}")


def monkemeyer_step(p: Sequence) -> tuple[int, Point]:
    """One exact step of M: (branch digit, image)."""
    xs = _require_in_delta(p)
    a = 0 if xs[0] + xs[-1] <= 1 else 1
    return a, apply_branch("M", a, xs, check=False)


def tent_step(p: Sequence) -> tuple[int, Point]:
    """One exact step of T: (branch digit, image)."""
    xs = _require_in_delta(p)
    a = 0 if xs[0] + xs[-1] <= 1 else 1
    return a, apply_branch("T", a, xs, check=False)


def step(which: str, p: Sequence) -> tuple[int, Point]:
    return monkemeyer_step(p) if which == "M" else tent_step(p)


@lru_cache(maxsize=None)
def projective_matrix(n: int, which: str, a: int) -> Mat:
    """Projective matrix of the branch map: V * X_a^{-1} * V^{-1}."""
    base = base_matrices(n)
    x = (base.A0, base.A1)[a] if which == "M" else (base.B0, base.B1)[a]
    m = base.V @ x.inverse() @ base.V.inverse()
    return m.to_int()


@lru_cache(maxsize=None)
def inverse_branch_matrix(n: int, which: str, a: int) -> Mat:
    """Projective matrix of the inverse branch: V * X_a * V^{-1}."""
    base = base_matrices(n)
    x = (base.A0, base.A1)[a] if which == "M" else (base.B0, base.B1)[a]
    return base.V @ x @ base.V.inverse()


def inverse_branch(which: str, a: int, p: Sequence) -> Point:
    """The inverse branch psi_a, mapping the whole simplex into branch a."""
    xs = _require_in_delta(p)
    m = inverse_branch_matrix(len(xs), which, a)
    w = m.matvec(tuple(xs) + (Fraction(1),))
    return tuple(Fraction(x, 1) / w[-1] for x in w[:-1])


@dataclass(frozen=True)
class OrbitRecord:
    """Exact orbit bookkeeping: points visited, branch digits, and how the
    iteration ended.  len(digits) == len(points) - 1 always."""

    points: tuple[tuple, ...]
    digits: str
    terminal: str  # "reached_v1" | "cycle_detected" | "budget_exhausted"
    hit_index: int | None = None
    cycle_start: int | None = None
    cycle_period: int | None = None

    def to_json(self) -> dict:
        out = {
            "points": [[str(x) for x in p] for p in self.points],
            "digits": self.digits,
            "terminal": self.terminal,
        }
        if self.hit_index is not None:
            out["hit_index"] = self.hit_index
        if self.cycle_start is not None:
            out["cycle_start"] = self.cycle_start
            out["cycle_period"] = self.cycle_period
        return out


def itinerary(which: str, p: Sequence, t: int, budget: int = DEFAULT_BUDGET) -> OrbitRecord:
    """Iterate `which` for t steps recording digits.

    Exact points get sound cycle detection; once the zero vertex is reached
    the tail is filled in without further computation (it is fixed with
    digit 0).  Float points are iterated with float_step and no cycle
    detection.
    """
    if t < 0:
        raise ValueError("step count must be >= 0")
    steps = min(t, budget)
    if any(isinstance(x, float) for x in p):
        return _float_itinerary(which, p, steps)
    pt = _require_in_delta(p)
    zero = v1(len(pt))
    points = [pt]
    digits: list[str] = []
    seen = {pt: 0}
    for k in range(steps):
        if pt == zero:
            pad = steps - k
            return OrbitRecord(
                points=tuple(points + [zero] * pad),
                digits="".join(digits) + "0" * pad,
                terminal="reached_v1",
                hit_index=k,
            )
        a, pt = step(which, pt)
        digits.append(str(a))
        points.append(pt)
        if pt in seen and pt != zero:
            return OrbitRecord(
                points=tuple(points),
                digits="".join(digits),
                terminal="cycle_detected",
                cycle_start=seen[pt],
                cycle_period=k + 1 - seen[pt],
            )
        seen.setdefault(pt, k + 1)
    if pt == zero:
        return OrbitRecord(tuple(points), "".join(digits), "reached_v1", hit_index=steps)
    return OrbitRecord(tuple(points), "".join(digits), "budget_exhausted")


def _float_itinerary(which: str, p: Sequence, steps: int) -> OrbitRecord:
    pt = tuple(float(x) for x in p)
    points = [pt]
    digits: list[str] = []
    for _ in range(steps):
        a, pt = float_step(which, pt)
        digits.append(str(a))
        points.append(pt)
    return OrbitRecord(tuple(points), "".join(digits), "budget_exhausted")


def _clamp_to_delta(xs: tuple[float, ...]) -> tuple[float, ...]:
    out = []
    hi = 1.0
    for x in xs:
        x = min(hi, max(0.0, x))
        out.append(x)
        hi = x
    return tuple(out)


def float_step(which: str, p: Sequence[float]) -> tuple[int, tuple[float, ...]]:
    """One step in double precision; the digit tie x_1+x_n = 1 goes to 0.

    Points are accepted within FLOAT_DOMAIN_TOL of the simplex and clamped
    onto it before stepping.
    """
    xs = tuple(float(x) for x in p)
    if any(math.isnan(x) or math.isinf(x) for x in xs):
        raise NumericFailure("non-finite coordinate")
    tol = FLOAT_DOMAIN_TOL
    ok = xs[0] <= 1 + tol and xs[-1] >= -tol and all(
        a >= b - tol for a, b in zip(xs, xs[1:])
    )
    if not ok:
        raise OutsideDomain(f"float point {xs} is outside the simplex")
    xs = _clamp_to_delta(xs)
    x1, xn = xs[0], xs[-1]
    a = 0 if x1 + xn <= 1 else 1
    tail = tuple(xs[j] - xn for j in range(len(xs) - 1))
    if which == "M":
        den = (1 - xn) if a == 0 else x1
        if den == 0:
            raise NumericFailure("vanishing denominator in float step")
        head = x1 / den if a == 0 else (1 - xn) / den
        img = (head,) + tuple(t / den for t in tail)
    elif which == "T":
        head = x1 + xn if a == 0 else 2 - x1 - xn
        img = (head,) + tail
    else:
        raise ValueError(f"unknown map {which!r}")
    if any(math.isnan(x) or math.isinf(x) for x in img):
        raise NumericFailure("non-finite image")
    return a, _clamp_to_delta(img)
