"""The n-dimensional Minkowski homeomorphism between the two maps.

Phi sends each point to the one with the same symbolic itinerary on the
tent side; it is computed operationally: follow the itinerary until either
the orbit lands on the zero vertex (rational inputs; the image is then an
exact vertex of the corresponding tent-side partition) or the matching
cylinder is smaller than the requested tolerance (the image is reported as
the cylinder barycenter, with the diameter as error bound).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DepthExceeded, OutsideDomain
from .dynamics import (
    apply_branch,
    float_step,
    in_delta,
    inverse_branch,
    step,
    v1,
)
from .exact import Mat
from .simplexes import (
    Point,
    as_point,
    barycenter,
    barycentric,
    base_matrices,
    check_word,
    diameter,
    farey_cylinder,
    tent_cylinder,
    word_product,
)

HYPERPLANE_GUARD = 1e-9


def default_budget(n: int, tol: float) -> int:
    return 10 * n * max(1, math.ceil(math.log2(1 / tol)))


@dataclass(frozen=True)
class PhiResult:
    """Computed image with a rigorous error bound.

    The true image lies in the depth-`depth` cylinder named by `word`, so
    it is within `error_bound` of `value`; error_bound == 0 means exact.
    """

    value: Point
    error_bound: float
    depth: int
    word: str

    @property
    def exact(self) -> bool:
        return self.error_bound == 0.0

    def to_json(self, scalar_if_1d: bool = True) -> dict:
        vals = [str(x) for x in self.value]
        return {
            "value": vals[0] if scalar_if_1d and len(vals) == 1 else vals,
            "error_bound": self.error_bound,
            "depth": self.depth,
            "word": self.word,
            "exact": self.exact,
        }


def _is_float_point(p: Sequence) -> bool:
    return any(isinstance(x, float) for x in p)


def _is_dyadic(p: Sequence[Fraction]) -> bool:
    return all(d & (d - 1) == 0 for d in (Fraction(x).denominator for x in p))


def _value_side(which: str) -> str:
    # itinerary under M is matched against tent cylinders, and conversely
    return "tent" if which == "M" else "farey"


def _cylinder(n: int, word: str, side: str):
    return farey_cylinder(n, word) if side == "farey" else tent_cylinder(n, word)


def _exact_image(n: int, word: str, side: str) -> Point:
    # first column of the word product: the image of the zero vertex under
    # the inverse branches named by the word
    m = word_product(n, word, side)
    c = m.col(0)
    return tuple(Fraction(x) / Fraction(c[-1]) for x in c[:-1])


def _digits_exact(which: str, p: Point, tol: float, budget: int):
    """Itinerary digits of an exact point, preferring the exact vertex hit.

    Returns (digits, exact_hit).  Inputs whose orbit provably reaches the
    zero vertex (every rational under M, dyadic rationals under T) are
    iterated until they do; other inputs stop as soon as the value-side
    cylinder is finer than tol.
    """
    n = len(p)
    zero = v1(n)
    side = _value_side(which)
    hit_possible = which == "M" or _is_dyadic(p)
    if which == "T" and hit_possible:
        m = max(Fraction(x).denominator.bit_length() - 1 for x in p) if p else 0
        budget = max(budget, m * n + n + 1)
    digits: list[str] = []
    pt = p
    for _ in range(budget + 1):
        if pt == zero:
            return "".join(digits), True
        if not hit_possible:
            if diameter(_cylinder(n, "".join(digits), side)) < tol:
                return "".join(digits), False
        a, pt = step(which, pt)
        digits.append(str(a))
    # budget exhausted: fall back to the finest tolerable prefix
    word = "".join(digits)
    for t in range(len(word) + 1):
        if diameter(_cylinder(n, word[:t], side)) < tol:
            return word[:t], False
    raise DepthExceeded(
        f"cylinder mesh did not reach tol={tol} within budget {budget}"
    )


def _digits_float(which: str, p: Sequence[float], tol: float, budget: int,
                  suffix_skip: int = 0):
    """Float-itinerary digits, trusted only away from the branch boundary.

    Stops when the value-side cylinder of digits[suffix_skip:] has diameter
    below tol.  Raises DepthExceeded if a digit decision falls within
    HYPERPLANE_GUARD of the switching hyperplane first.
    """
    n = len(p)
    side = _value_side(which)
    pt = tuple(float(x) for x in p)
    digits: list[str] = []
    for _ in range(budget + 1):
        if all(x == 0.0 for x in pt):
            return "".join(digits), True
        if diameter(_cylinder(n, "".join(digits)[suffix_skip:], side)) < tol:
            return "".join(digits), False
        boundary = pt[0] + pt[-1] - 1
        if boundary != 0 and abs(boundary) < HYPERPLANE_GUARD:
            # an exact tie is safe (both branches agree there); a near-tie
            # means the digit cannot be trusted
            raise DepthExceeded(
                "float orbit too close to the switching hyperplane to trust digits"
            )
        a, pt = float_step(which, pt)
        digits.append(str(a))
    raise DepthExceeded(f"no cylinder below tol={tol} within budget {budget}")


def _phi_directional(which: str, p: Sequence, tol: float, budget: int | None) -> PhiResult:
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = len(p)
    if budget is None:
        budget = default_budget(n, tol)
    side = _value_side(which)
    if _is_float_point(p):
        word, exact_hit = _digits_float(which, p, tol, budget)
    else:
        q = as_point(p)
        if not in_delta(q):
            raise OutsideDomain("point outside the simplex")
        word, exact_hit = _digits_exact(which, q, tol, budget)
    if exact_hit:
        return PhiResult(_exact_image(n, word, side), 0.0, len(word), word)
    cyl = _cylinder(n, word, side)
    return PhiResult(barycenter(cyl), diameter(cyl), len(word), word)


def phi(p: Sequence, tol: float = 1e-9, budget: int | None = None) -> PhiResult:
    """Image of p under the conjugating homeomorphism (M-side to tent side).

    Exact rational input gives an exact dyadic image; float input is
    handled through the float itinerary at tolerance tol.
    """
    return _phi_directional("M", p, tol, budget)


def phi_inv(q: Sequence, tol: float = 1e-9, budget: int | None = None) -> PhiResult:
    """Inverse image: tent-side itinerary matched against the fractional side.

    Dyadic rational input gives an exact rational image.
    """
    return _phi_directional("T", q, tol, budget)


def phi_t(p: Sequence, t: int) -> Point:
    """Depth-t simplicial approximant: locate the containing depth-t cylinder,
    read off barycentric coordinates, and evaluate on the paired cylinder."""
    if t < 0:
        raise ValueError("depth must be >= 0")
    q = as_point(p)
    if not in_delta(q):
        raise OutsideDomain("point outside the simplex")
    n = len(q)
    digits = []
    pt = q
    for _ in range(t):
        a, pt = step("M", pt)
        digits.append(str(a))
    word = "".join(digits)
    alpha = barycentric(q, farey_cylinder(n, word))
    target = tent_cylinder(n, word).vertices
    return tuple(
        sum(a * v[i] for a, v in zip(alpha, target)) for i in range(n)
    )


def apply_tent_word(word: str, p: Sequence, check: bool = False) -> Point:
    """The affine map T_{a_{t-1}} o ... o T_{a_0} (equal to T^t on the
    cylinder named by `word`), applied exactly."""
    out = as_point(p)
    for a in word:
        out = apply_branch("T", int(a), out, check=check)
    return out


def apply_inverse_word(which: str, word: str, p: Sequence) -> Point:
    """psi_{a_0} o ... o psi_{a_{t-1}}: the inverse branch composition that
    carries the whole simplex onto the cylinder named by `word`."""
    out = as_point(p)
    for a in reversed(word):
        out = inverse_branch(which, int(a), out)
    return out


def _euclid(p: Sequence, q: Sequence) -> float:
    return math.sqrt(sum((float(a) - float(b)) ** 2 for a, b in zip(p, q)))


def sample_rational_points(n: int, count: int, seed: int, max_den: int = 48) -> list[Point]:
    """Seeded rational points in the simplex (sorted uniform grid draws)."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        den = rng.randint(max(2, max_den // 2), max_den)
        coords = sorted((rng.randint(0, den) for _ in range(n)), reverse=True)
        out.append(tuple(Fraction(c, den) for c in coords))
    return out


def self_similarity_residual(
    n: int,
    word: str,
    samples: int,
    seed: int,
    tol: float = 1e-9,
    float_fraction: float = 0.5,
) -> float:
    """Max residual of the self-similarity identity
    Phi = T_word o (Phi restricted to the word's cylinder) o psi_word
    over seeded sample points.  Rational samples evaluate exactly; float
    samples evaluate both sides at tolerance tol (the inner evaluation is
    truncated on the suffix cylinder so the affine word map cannot amplify
    its error past tol)."""
    check_word(word)
    if not word:
        raise ValueError("need a nonempty word")
    rng = random.Random(seed)
    n_float = int(samples * float_fraction)
    pts: list[Sequence] = list(
        sample_rational_points(n, samples - n_float, seed=rng.randint(0, 2**32))
    )
    for _ in range(n_float):
        coords = sorted((rng.random() for _ in range(n)), reverse=True)
        pts.append(tuple(coords))
    budget = default_budget(n, tol) + len(word)
    worst = 0.0
    for p in pts:
        lhs = phi(p, tol=tol, budget=budget).value
        if _is_float_point(p):
            q0 = _inverse_word_float(word, p)
            inner_word, inner_exact = _digits_float(
                "M", q0, tol, budget, suffix_skip=len(word)
            )
        else:
            q0 = apply_inverse_word("M", word, p)
            inner_word, inner_exact = _digits_exact("M", q0, tol, budget)
        if inner_word[: len(word)] != word:
            # the sample landed on a cylinder face; skip the degenerate case
            continue
        if inner_exact:
            inner_value = _exact_image(n, inner_word, "tent")
        else:
            inner_value = barycenter(tent_cylinder(n, inner_word))
        rhs = apply_tent_word(word, inner_value)
        worst = max(worst, _euclid(lhs, rhs))
    return worst


def _inverse_word_float(word: str, p: Sequence[float]) -> tuple[float, ...]:
    from .dynamics import inverse_branch_matrix

    n = len(p)
    out = tuple(float(x) for x in p) + (1.0,)
    for a in reversed(word):
        m = inverse_branch_matrix(n, "M", int(a))
        out = tuple(
            sum(float(c) * x for c, x in zip(row, out)) for row in m.rows
        )
    return tuple(x / out[-1] for x in out[:-1])


def conjugacy_residual(n: int, p: Sequence, tol: float = 1e-9) -> float:
    """|Phi(M(p)) - T(Phi(p))| with Phi(p) evaluated finely enough that the
    tent map's Lipschitz constant cannot push the error past tol."""
    lip = max(2.0, math.sqrt(2 * n))
    if _is_float_point(p):
        _, mp = float_step("M", p)
    else:
        _, mp = step("M", as_point(p))
    lhs = phi(mp, tol=tol).value
    inner = phi(p, tol=tol / lip).value
    _, rhs = step("T", inner)
    return _euclid(lhs, rhs)


def orientation_check(n: int, t: int) -> bool:
    """All affine pieces of the depth-t simplicial approximant have last row
    (0...0 1) and positive determinant (exact check over all words)."""
    if t < 1:
        raise ValueError("depth must be >= 1")
    base = base_matrices(n)
    ident_last = tuple([0] * n + [1])
    for k in range(2**t):
        word = format(k, f"0{t}b")
        fa = word_product(n, word, "farey")
        tb = word_product(n, word, "tent")
        d_inv = Mat.from_rows(
            [
                [Fraction(1, fa.rows[-1][j]) if i == j else 0 for j in range(n + 1)]
                for i in range(n + 1)
            ]
        )
        piece = tb @ (fa @ d_inv).inverse()
        if tuple(Fraction(x) for x in piece.rows[-1]) != tuple(
            Fraction(x) for x in ident_last
        ):
            return False
        if piece.det() <= 0:
            return False
    return True
