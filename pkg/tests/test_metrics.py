import math

import numpy as np
import pytest
from scipy import integrate as sci_integrate

from oscbayes import metrics, model

C = model.FamilySpec.cosine()
HELLINGER_LIMIT = math.sqrt(2 - 4 * math.sqrt(2) / math.pi)


def pair(t):
    return (C, float(t))


def test_identical_densities_have_zero_distance():
    for fn in (metrics.hellinger, metrics.kl_divergence, metrics.total_variation, metrics.levy_distance):
        assert fn(pair(3.7), pair(3.7)) == 0.0


def test_hellinger_lipschitz_example():
    assert metrics.hellinger(pair(0.1), pair(0.3)) <= 0.2


def test_hellinger_fast_oscillation_against_dense_composite_rule():
    x = (np.arange(10**7) + 0.5) / 10**7
    oracle = math.sqrt(np.mean((np.sqrt(model.pdf(C, 2000 * math.pi, x)) - 1) ** 2))
    h = metrics.hellinger(pair(2000 * math.pi), pair(0))
    assert h == pytest.approx(oracle, abs=1e-6)
    assert h == pytest.approx(0.4465, abs=0.002)
    assert HELLINGER_LIMIT == pytest.approx(0.446506, abs=1e-6)


def test_kl_examples():
    assert metrics.kl_divergence(pair(1.0), pair(1.01)) <= 0.02
    x = (np.arange(10**6) + 0.5) / 10**6
    g = model.pdf(C, 0.01, x)
    oracle = float(np.mean(-np.log(g)))
    kl = metrics.kl_divergence(pair(0), pair(0.01))
    assert kl < 1e-3
    assert kl == pytest.approx(oracle, rel=1e-4, abs=1e-15)


def test_kl_against_a_density_with_zeros_is_finite():
    kl = metrics.kl_divergence(pair(0), pair(4 * math.pi))
    x = (np.arange(10**6) + 0.5) / 10**6
    oracle = float(np.mean(-np.log(model.pdf(C, 4 * math.pi, x))))
    assert math.isfinite(kl) and kl == pytest.approx(oracle, abs=1e-4)


def test_total_variation_limit():
    assert metrics.total_variation(pair(2 * math.pi * 500), pair(0)) == pytest.approx(0.3183, abs=0.002)


def test_hellinger_tv_sandwich():
    rng = np.random.default_rng(3)
    for a, b in rng.uniform(0, 60, (30, 2)):
        h = metrics.hellinger(pair(a), pair(b))
        tv = metrics.total_variation(pair(a), pair(b))
        assert h * h / 2 - 1e-10 <= tv <= h + 1e-10


def test_levy_exact_value_on_uniform_reference():
    for j in (1, 3, 10, 100):
        lv = metrics.levy_distance(pair(2 * math.pi * j), pair(0))
        assert lv == pytest.approx(1 / (4 * math.pi * j), abs=1e-9)
    assert metrics.levy_distance(pair(200 * math.pi), pair(0)) <= 1 / (2 * math.pi * 100)


def test_levy_at_most_kolmogorov_and_kolmogorov_exact():
    for j in (1, 7):
        a, b = pair(2 * math.pi * j), pair(0)
        k = metrics.kolmogorov_distance(a, b)
        assert k == pytest.approx(1 / (2 * math.pi * j), abs=1e-9)
        assert metrics.levy_distance(a, b) <= k


def test_prokhorov_upper_bound_dominates_levy():
    for t in (5.0, 2 * math.pi * 4, 77.0):
        a, b = pair(t), pair(0)
        assert metrics.prokhorov_upper_bound(a, b) >= metrics.levy_distance(a, b) - 1e-9


def test_symmetry_and_triangle_inequality():
    rng = np.random.default_rng(4)
    for a, b, c in rng.uniform(0, 50, (100, 3)):
        for fn in (metrics.hellinger, metrics.total_variation, metrics.levy_distance):
            ab, ba = fn(pair(a), pair(b)), fn(pair(b), pair(a))
            assert ab == pytest.approx(ba, abs=1e-12)
            assert ab <= fn(pair(a), pair(c)) + fn(pair(c), pair(b)) + 1e-8


def test_cross_correlation_closed_form_matches_quadrature():
    rng = np.random.default_rng(5)
    assert metrics.cosine_cross_correlation(0, 0) == 1.0
    for t, s in rng.uniform(0, 100, (200, 2)):
        quad, _ = sci_integrate.quad(lambda x: float(model.pdf(C, t, x) * model.pdf(C, s, x)), 0, 1,
                                     limit=500, epsabs=1e-13, epsrel=1e-13)
        assert metrics.cosine_cross_correlation(t, s) == pytest.approx(quad, abs=1e-8)


def test_cross_correlation_below_ceiling_on_grid():
    t = np.linspace(0, 500, 1001)
    vals = metrics.cosine_cross_correlation(t[:, None], t[None, :])
    assert np.max(vals) <= 1.9


def test_sinc_floor():
    floor, arg = metrics.sinc_floor()
    assert floor == pytest.approx(0.7828, abs=1e-3)
    assert floor > 0
    assert arg == pytest.approx(4.4934, abs=1e-3)


def test_hellinger_between_shifted_gaussians_has_closed_form():
    g = model.FamilySpec.gauss_mixture([1.0], [0.0], [4.0])
    for shift in (0.1, 1.0, 3.0):
        exact = math.sqrt(2 * (1 - math.exp(-shift * shift * 4.0 / 8)))
        assert metrics.hellinger((g, 0.0), (g, shift)) == pytest.approx(exact, abs=1e-9)
