"""Invariant density, entropy, and singularity numerics.

The fractional map preserves the probability measure with density
h(x) = 1/(x_1 (x_1-x_2+1) ... (x_1-x_n+1)) on the order simplex (finite
only for n >= 2).  Its entropy is (n+1) G(n) / (n G(n-1)) with
G(n) = int_0^1 log(1+s)^n / s ds, strictly below log 2, and the gap
log 2 - h_mu is the exponential rate at which the conjugating
homeomorphism distorts Lebesgue measure along typical cylinders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy import integrate

from .errors import (
    DensitySingularity,
    DivergentIntegral,
    InfiniteInvariantMeasure,
    OutsideDomain,
    QuadratureFailure,
)
from .exact import Mat
from .simplexes import base_matrices, check_word, simplex_lebesgue, farey_cylinder

LOG2 = math.log(2)


def density_h(p: Sequence, n: int | None = None) -> float:
    """The invariant density at an interior point (x_1 > 0 required)."""
    xs = [float(x) for x in p]
    if n is not None and n != len(xs):
        raise ValueError("dimension mismatch")
    x1 = xs[0]
    if x1 <= 0:
        raise DensitySingularity("density blows up on the face x_1 = 0")
    val = x1
    for xj in xs[1:]:
        val *= x1 - xj + 1
    return 1.0 / val


@lru_cache(maxsize=None)
def _G_with_error(n: int) -> tuple[float, float]:
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        raise DivergentIntegral("the n = 0 integrand 1/s is not integrable")

    def integrand(s: float) -> float:
        return math.log1p(s) ** n / s

    val, err = integrate.quad(integrand, 0.0, 1.0, epsabs=1e-12, epsrel=1e-12,
                              limit=200)
    return val, err


def G(n: int) -> float:
    """G(n) = int_0^1 log(1+s)^n / s ds by adaptive quadrature."""
    return _G_with_error(n)[0]


@dataclass(frozen=True)
class EntropyReport:
    n: int
    G_n: float
    G_n_minus_1: float
    h_mu: float
    log2_gap: float
    quadrature_error_estimate: float

    def __post_init__(self):
        if not (0 < self.h_mu < LOG2):
            raise QuadratureFailure(f"entropy {self.h_mu} outside (0, log 2)")

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "G_n": self.G_n,
            "G_n_minus_1": self.G_n_minus_1,
            "h_mu": self.h_mu,
            "log2_gap": self.log2_gap,
            "quadrature_error_estimate": self.quadrature_error_estimate,
        }


def entropy(n: int) -> EntropyReport:
    """Metrical entropy (n+1) G(n) / (n G(n-1)); defined for n >= 2 only,
    the invariant measure being infinite in dimension 1."""
    if n <= 1:
        raise InfiniteInvariantMeasure("entropy needs n >= 2")
    g_n, e_n = _G_with_error(n)
    g_prev, e_prev = _G_with_error(n - 1)
    h = (n + 1) * g_n / (n * g_prev)
    err = h * (e_n / g_n + e_prev / g_prev)
    return EntropyReport(
        n=n,
        G_n=g_n,
        G_n_minus_1=g_prev,
        h_mu=h,
        log2_gap=LOG2 - h,
        quadrature_error_estimate=err,
    )


def _unnormalized_mu(n: int, branch0_only: bool) -> tuple[float, float]:
    """Iterated adaptive quadrature of the density over the order simplex,
    optionally restricted to the branch-0 region x_1 + x_n <= 1.

    The x_1 -> 0 edge is handled by the substitution x_1 = exp(-u); the
    head factor 1/x_1 cancels against the Jacobian.  The innermost
    coordinate (the only one the branch-0 cap constrains) has a closed
    antiderivative.
    """
    if n < 2:
        raise InfiniteInvariantMeasure("the invariant measure needs n >= 2")

    def inner(level: int, x1: float, upper: float) -> float:
        if level == n:
            cap = min(upper, 1.0 - x1) if branch0_only else upper
            if cap <= 0:
                return 0.0
            return math.log(x1 + 1.0) - math.log(x1 - cap + 1.0)
        val, _ = integrate.quad(
            lambda xj: inner(level + 1, x1, xj) / (x1 - xj + 1.0),
            0.0,
            upper,
            epsabs=1e-11,
            epsrel=1e-11,
            limit=120,
        )
        return val

    val, err = integrate.quad(
        lambda u: inner(2, math.exp(-u), math.exp(-u)),
        0.0,
        np.inf,
        epsabs=1e-10,
        epsrel=1e-10,
        limit=200,
    )
    if not math.isfinite(val) or err > 1e-6 * max(1.0, abs(val)):
        raise QuadratureFailure(f"quadrature error estimate too large: {err}")
    return val, err


def mu_of_delta0_quadrature(n: int) -> float:
    if n < 2:
        raise InfiniteInvariantMeasure("the invariant measure needs n >= 2")
    num, _ = _unnormalized_mu(n, branch0_only=True)
    den, _ = _unnormalized_mu(n, branch0_only=False)
    return num / den


def sample_points_in_simplex(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points in the order simplex by rejection from the unit cube."""
    out = np.empty((size, n))
    filled = 0
    while filled < size:
        batch = rng.random((max(64, 4 * (size - filled) * math.factorial(n)), n))
        ok = batch[np.all(batch[:, :-1] >= batch[:, 1:], axis=1)] if n > 1 else batch
        take = min(len(ok), size - filled)
        out[filled : filled + take] = ok[:take]
        filled += take
    return out


def _vector_step(which: str, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized float step on rows of x; returns (digit-1 mask, images)."""
    x1 = x[:, 0]
    xn = x[:, -1]
    branch1 = x1 + xn > 1.0
    tail = x[:, :-1] - xn[:, None]
    if which == "M":
        den = np.where(branch1, x1, 1.0 - xn)
        head = np.where(branch1, 1.0 - xn, x1) / den
        img = np.concatenate([head[:, None], tail / den[:, None]], axis=1)
    else:
        head = np.where(branch1, 2.0 - x1 - xn, x1 + xn)
        img = np.concatenate([head[:, None], tail], axis=1)
    np.clip(img, 0.0, 1.0, out=img)
    np.minimum.accumulate(img, axis=1, out=img)
    return branch1, img


def birkhoff_digit_frequency(
    which: str,
    n: int,
    seed: int,
    steps: int = 10_000_000,
    orbits: int | None = None,
    burnin: int | None = None,
) -> float:
    """Frequency of digit 0 along seeded float orbits started uniformly in
    the simplex (an ensemble of orbits, burn-in discarded).

    Tent orbits are kept short: doubles are dyadic, so a long float tent
    orbit drains to the fixed vertex exactly; only the first few dozen
    digits of a uniform start are honest samples.
    """
    rng = np.random.default_rng(seed)
    if orbits is None:
        orbits = 1024 if which == "M" else max(1024, math.ceil(steps / 40))
    if burnin is None:
        burnin = 256 if which == "M" else 4
    orbits = max(1, min(orbits, steps))
    per_orbit = max(1, math.ceil(steps / orbits))
    x = sample_points_in_simplex(n, orbits, rng)
    zeros = 0
    for k in range(burnin + per_orbit):
        branch1, x = _vector_step(which, x)
        if k >= burnin:
            zeros += int(np.count_nonzero(~branch1))
    return zeros / (orbits * per_orbit)


def mu_of_delta0(n: int, method: str = "quadrature", seed: int = 0,
                 steps: int = 10_000_000, orbits: int = 1024,
                 burnin: int = 256) -> float:
    """Invariant mass of the branch-0 region, by deterministic quadrature of
    the density or by the ergodic digit-0 frequency of a float orbit
    ensemble."""
    if n < 2:
        raise InfiniteInvariantMeasure("the invariant measure needs n >= 2")
    if method == "quadrature":
        return mu_of_delta0_quadrature(n)
    if method == "birkhoff":
        return birkhoff_digit_frequency("M", n, seed, steps, orbits, burnin)
    raise ValueError(f"unknown method {method!r}")


def cylinder_contrast(word: str, n: int) -> tuple[Fraction, Fraction]:
    """(tent-side measure 2^{-t}, fractional-side measure) of the word's
    cylinders, both exact."""
    check_word(word)
    t = len(word)
    return Fraction(1, 2**t), simplex_lebesgue(farey_cylinder(n, word))


def log_lambda_farey(n: int, word: str) -> float:
    """log of the fractional-side cylinder measure (unimodular frame, so the
    measure is 1 over the product of the last-row entries)."""
    base = base_matrices(n)
    frame = base.V
    for a in word:
        frame = frame @ (base.A0, base.A1)[int(a)]
    return -sum(math.log(int(c)) for c in frame.rows[-1])


def singularity_samples(n: int, depth: int, samples: int, seed: int) -> dict:
    """Per-orbit singularity contrast at the given depth.

    Each seeded start point contributes the per-step log-ratio
    (1/t) log(lambda(tent cyl)/lambda(fractional cyl)) of its own depth-t
    itinerary; for typical points this approaches -(log 2 - h_mu).
    """
    rng = np.random.default_rng(seed)
    starts = sample_points_in_simplex(n, samples, rng)
    base = base_matrices(n)
    rows = []
    for i in range(samples):
        x = starts[i : i + 1].copy()
        frame = base.V
        for _ in range(depth):
            branch1, x = _vector_step("M", x)
            frame = frame @ (base.A1 if branch1[0] else base.A0)
        log_ld = -sum(math.log(int(c)) for c in frame.rows[-1])
        rate = -LOG2 - log_ld / depth
        rows.append({
            "sample": i,
            "depth": depth,
            "log_lambda_delta": log_ld,
            "per_step_log_ratio": rate,
        })
    mean_rate = sum(r["per_step_log_ratio"] for r in rows) / samples
    target = -(LOG2 - entropy(n).h_mu) if n >= 2 else None
    return {
        "n": n,
        "depth": depth,
        "samples": samples,
        "seed": seed,
        "mean_per_step_log_ratio": mean_rate,
        "expected_rate": target,
        "rows": rows,
    }
