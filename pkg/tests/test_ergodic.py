import math
from fractions import Fraction as F

import numpy as np
import pytest

from minkmap.errors import (
    DensitySingularity,
    DivergentIntegral,
    InfiniteInvariantMeasure,
)
from minkmap.ergodic import (
    G,
    birkhoff_digit_frequency,
    cylinder_contrast,
    density_h,
    entropy,
    log_lambda_farey,
    mu_of_delta0,
    sample_points_in_simplex,
    singularity_samples,
)
from minkmap.simplexes import cylinder_frames, farey_cylinder, simplex_lebesgue, UniSimplex

LOG2 = math.log(2)


def test_density_examples():
    assert density_h((F(1, 2), F(1, 4))) == pytest.approx(1.6, abs=1e-15)
    assert density_h((F(1), F(1))) == 1.0
    assert density_h((1.0, 1.0, 1.0)) == 1.0
    with pytest.raises(DensitySingularity):
        density_h((F(0), F(0)))


def test_density_sharp_lower_bound():
    # the true bound on the simplex is 2^(1-n), attained at (1,0,...,0);
    # the nominal bound 1 fails there, e.g. h(1,0) = 1/2
    assert density_h((1.0, 0.0)) == 0.5
    rng = np.random.default_rng(123)
    for n in range(2, 5):
        pts = sample_points_in_simplex(n, 10_000, rng)
        lo = 2.0 ** (1 - n)
        assert all(density_h(p) >= lo - 1e-12 for p in pts)


def test_G_against_series_oracle():
    # G(1) = sum_{k>=1} (-1)^(k+1)/k^2 (expand log(1+s)/s and integrate)
    series = sum((-1) ** (k + 1) / k**2 for k in range(1, 20001))
    assert G(1) == pytest.approx(series, abs=1e-8)
    assert G(1) == pytest.approx(math.pi**2 / 12, abs=1e-10)


def test_G2_against_zeta_oracle():
    from scipy.special import zeta

    assert G(2) == pytest.approx(zeta(3) / 4, abs=1e-10)


def test_G_rejects_divergent():
    with pytest.raises(DivergentIntegral):
        G(0)
    with pytest.raises(ValueError):
        G(-1)


def test_entropy_reproduces_reference_value():
    rep = entropy(2)
    assert rep.h_mu == pytest.approx(0.54807, abs=1e-4)
    assert rep.log2_gap == pytest.approx(LOG2 - rep.h_mu, abs=1e-15)
    assert rep.quadrature_error_estimate < 1e-9


def test_entropy_monotone_and_below_log2():
    vals = [entropy(n).h_mu for n in range(2, 11)]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    assert all(0 < v < LOG2 for v in vals)


def test_entropy_rejects_small_dimension():
    for n in (0, 1):
        with pytest.raises(InfiniteInvariantMeasure):
            entropy(n)
    with pytest.raises(InfiniteInvariantMeasure):
        mu_of_delta0(1, "quadrature")


def test_mu_quadrature_matches_closed_form():
    # integrating out the ordered middle coordinates collapses the measure
    # of the branch-1 region to (log 2)^n / (n G(n-1))
    for n in (2, 3):
        closed = 1 - LOG2**n / (n * G(n - 1))
        assert mu_of_delta0(n, "quadrature") == pytest.approx(closed, abs=1e-6)


def test_mu_birkhoff_agrees_with_quadrature():
    q = mu_of_delta0(2, "quadrature")
    b = mu_of_delta0(2, "birkhoff", seed=2024, steps=2_000_000)
    assert abs(q - b) < 5e-3
    assert abs(q - 0.5) > 0.01 and abs(b - 0.5) > 0.01


def test_tent_digit_frequency_is_half():
    f = birkhoff_digit_frequency("T", 2, seed=7, steps=1_000_000)
    assert abs(f - 0.5) < 3e-3


def test_sample_points_are_uniform_in_simplex():
    rng = np.random.default_rng(1)
    pts = sample_points_in_simplex(2, 50_000, rng)
    assert np.all(pts[:, 0] >= pts[:, 1])
    # mean of x1 over the order simplex is 2/3
    assert pts[:, 0].mean() == pytest.approx(2 / 3, abs=5e-3)


def test_cylinder_contrast_examples():
    assert cylinder_contrast("", 2) == (F(1), F(1))
    lg, ld = cylinder_contrast("00", 2)
    assert lg == F(1, 4)
    assert ld == simplex_lebesgue(farey_cylinder(2, "00"))
    for t in (1, 3, 5):
        total = F(0)
        for w, _f in cylinder_frames(2, t, "farey"):
            total += cylinder_contrast(w, 2)[0]
        assert total == 1


def test_log_lambda_matches_exact_measure():
    for w in ("0", "0110", "10101"):
        exact = simplex_lebesgue(farey_cylinder(2, w))
        assert log_lambda_farey(2, w) == pytest.approx(math.log(float(exact)), abs=1e-12)


def test_singularity_contrast_rate():
    out = singularity_samples(2, depth=200, samples=120, seed=4242)
    target = -(LOG2 - entropy(2).h_mu)
    assert out["expected_rate"] == pytest.approx(target, abs=1e-12)
    rel = abs(out["mean_per_step_log_ratio"] - target) / abs(target)
    assert rel < 0.10


def test_mu_invariance_on_cylinder_unions():
    # mu(M^-1 R) == mu(R) for unions of depth-t cylinders, estimated by a
    # seeded importance average over the simplex
    import random as pyrandom

    rng = np.random.default_rng(99)
    pts = sample_points_in_simplex(2, 200_000, rng)
    h = np.array([density_h(p) for p in pts])
    htot = h.mean()
    verts_cache = {}

    def mu_of_words(words):
        mask = np.zeros(len(pts), dtype=bool)
        for w in words:
            if w not in verts_cache:
                cyl = farey_cylinder(2, w)
                arr = np.array([[float(x) for x in v] for v in cyl.vertices])
                a = np.vstack([arr.T, np.ones(3)])
                verts_cache[w] = np.linalg.inv(a)
            coords = verts_cache[w] @ np.vstack([pts.T, np.ones(len(pts))])
            mask |= np.all(coords >= -1e-12, axis=0)
        return float((h * mask).mean() / htot)

    pr = pyrandom.Random(5)
    for t in (3, 5, 6):
        words = ["".join(pr.choice("01") for _ in range(t)) for _ in range(4)]
        words = sorted(set(words))
        mu_r = mu_of_words(words)
        mu_pre = mu_of_words(["0" + w for w in words] + ["1" + w for w in words])
        assert abs(mu_r - mu_pre) < 8e-3


def test_singularity_csv_rows_shape():
    out = singularity_samples(2, depth=30, samples=5, seed=1)
    assert len(out["rows"]) == 5
    assert {"sample", "depth", "log_lambda_delta", "per_step_log_ratio"} <= set(
        out["rows"][0]
    )
