"""Distances and divergences between model densities.

Densities are passed as ``(FamilySpec, theta)`` pairs. Integral metrics go
through :func:`oscbayes.quadrature.integrate` with the zeros of each density
and the crossing points of the pair placed on panel edges, so square-root
kinks, absolute-value kinks and logarithmic singularities never fall inside
a panel.

The weak-convergence metric is the one-dimensional Levy metric, which on
the real line metrizes weak convergence just as Levy-Prokhorov does.
:func:`prokhorov_upper_bound` gives a certified upper bound on the
Levy-Prokhorov distance itself for the places where a set-wise corridor is
needed.
"""

import math

import numpy as np
from scipy.optimize import minimize_scalar

from . import _scan, model
from .quadrature import DEFAULT_CONFIG, integrate

EFFECTIVELY_INFINITE = 1e6
LEVY_GRID = 10_000
SQRT2 = math.sqrt(2.0)


def _freq(*pairs):
    return max(model.frequency(f, t) for f, t in pairs)


def _breaks(*pairs):
    pts = []
    for fam, t in pairs:
        lo, hi = model.support(fam, t)
        pts += [lo, hi]
        pts += list(model.family_zeros(fam, t))
    return pts


def hellinger(a, b, cfg=None):
    """sqrt of the integral of (sqrt f_a - sqrt f_b)^2, in [0, sqrt 2]."""
    if a == b:
        return 0.0
    (fa, ta), (fb, tb) = a, b
    lo, hi = _scan.common_domain(a, b)

    def integrand(x):
        return (np.sqrt(model.pdf(fa, ta, x)) - np.sqrt(model.pdf(fb, tb, x))) ** 2

    res = integrate(integrand, lo, hi, cfg, freq=_freq(a, b), breakpoints=_breaks(a, b))
    return min(SQRT2, math.sqrt(max(res.value, 0.0)))


def kl_divergence(truth, other, cfg=None):
    """KL(f_truth, f_other); ``inf`` when it exceeds 1e6 or the supports are incompatible."""
    if truth == other:
        return 0.0
    (ft, tt), (fo, to) = truth, other
    lo, hi = model.support(ft, tt)
    lo_o, hi_o = model.support(fo, to)
    if ft.kind != model.GAUSS_MIXTURE and (lo < lo_o or hi > hi_o):
        return math.inf

    def integrand(x):
        f = model.pdf(ft, tt, x)
        with np.errstate(invalid="ignore"):
            val = f * (model.logpdf(ft, tt, x) - model.logpdf(fo, to, x))
        return np.where(f > 0, val, 0.0)

    res = integrate(integrand, lo, hi, cfg, freq=_freq(truth, other),
                    breakpoints=_breaks(truth, other))
    if not math.isfinite(res.value) or res.value > EFFECTIVELY_INFINITE:
        return math.inf
    return max(res.value, 0.0)


def total_variation(a, b, cfg=None):
    """Half the L1 distance between the two densities."""
    if a == b:
        return 0.0
    (fa, ta), (fb, tb) = a, b
    (lo, hi), _, _, roots = _scan.crossings(a, b)

    def integrand(x):
        return np.abs(model.pdf(fa, ta, x) - model.pdf(fb, tb, x))

    res = integrate(integrand, lo, hi, cfg, freq=_freq(a, b),
                    breakpoints=list(roots) + _breaks(a, b))
    return min(1.0, 0.5 * max(res.value, 0.0))


def _grid_sup(fun, lo, hi, n):
    """sup of a smooth function on [lo, hi]: grid maximum polished by a parabola through its neighbours."""
    x = np.linspace(lo, hi, n)
    y = fun(x)
    i = int(np.argmax(y))
    best = float(y[i])
    if 0 < i < n - 1:
        y0, y1, y2 = y[i - 1], y[i], y[i + 1]
        curv = y0 - 2.0 * y1 + y2
        if curv < 0:
            h = x[1] - x[0]
            shift = 0.5 * (y0 - y2) / curv
            xv = np.clip(x[i] + shift * h, x[i - 1], x[i + 1])
            best = max(best, float(fun(np.array([xv]))[0]))
    return best


def _cdf_pair(a, b):
    (fa, ta), (fb, tb) = a, b
    return (lambda x: model.cdf_unchecked(fa, ta, x)), (lambda x: model.cdf_unchecked(fb, tb, x))


def _grid_size(a, b, lo, hi, per_period=32):
    periods = _freq(a, b) * (hi - lo) / (2.0 * math.pi)
    return max(LEVY_GRID, int(per_period * (1 + math.ceil(periods))))


def kolmogorov_distance(a, b):
    """sup_x |F_a(x) - F_b(x)|."""
    if a == b:
        return 0.0
    F, G = _cdf_pair(a, b)
    lo, hi = _scan.common_domain(a, b)
    n = _grid_size(a, b, lo, hi)
    return max(_grid_sup(lambda x: F(x) - G(x), lo, hi, n),
               _grid_sup(lambda x: G(x) - F(x), lo, hi, n), 0.0)


def levy_distance(a, b, tol=1e-12):
    """Levy metric inf{d : F(x-d) - d <= G(x) <= F(x+d) + d for all x}.

    Bisection on ``d``; for each trial ``d`` the two corridor violations are
    maximised over an x-grid of at least 10^4 points (32 per period of the
    faster density), with a parabolic polish of the grid maximum.
    """
    if a == b:
        return 0.0
    F, G = _cdf_pair(a, b)
    lo, hi = _scan.common_domain(a, b)
    n = _grid_size(a, b, lo, hi)

    def excess(d):
        up = _grid_sup(lambda x: G(x) - F(x + d), lo - d, hi, n)
        down = _grid_sup(lambda x: F(x - d) - G(x), lo, hi + d, n)
        return max(up, down) - d

    left, right = 0.0, min(1.0, kolmogorov_distance(a, b))
    if right == 0.0:
        return 0.0
    while right - left > tol:
        mid = 0.5 * (left + right)
        if excess(mid) <= 0.0:
            right = mid
        else:
            left = mid
    return right


def prokhorov_upper_bound(a, b, n_grid=None):
    """Certified upper bound on the Levy-Prokhorov distance via the quantile coupling.

    For X = F_a^{-1}(U), Y = F_b^{-1}(U) with U uniform, Strassen's theorem
    gives d_LP <= inf{d : P(|X - Y| > d) <= d}. The probability is taken on a
    midpoint u-grid.
    """
    if a == b:
        return 0.0
    (fa, ta), (fb, tb) = a, b
    lo, hi = _scan.common_domain(a, b)
    n = n_grid or max(20_000, 4 * _grid_size(a, b, lo, hi))
    u = (np.arange(n) + 0.5) / n
    gap = np.abs(model.ppf(fa, ta, u) - model.ppf(fb, tb, u))
    gap = np.sort(gap)[::-1]
    # after dropping the k largest gaps, the coupling misses by at most gap[k] with probability k/n
    k = np.arange(n + 1)
    tail = np.append(gap, 0.0)
    return float(np.min(np.maximum(tail, k / n)))


def cdf_modulus(family, theta, delta, n_grid=None):
    """Uniform-continuity modulus sup_x {G(x + delta) - G(x)} of a model CDF."""
    if delta <= 0:
        return 0.0
    lo, hi = model.support(family, theta)
    per = model.frequency(family, theta) * (hi - lo) / (2.0 * math.pi)
    n = n_grid or max(LEVY_GRID, int(32 * (1 + math.ceil(per))))

    def inc(x):
        return model.cdf_unchecked(family, theta, x + delta) - model.cdf_unchecked(family, theta, x)

    return _grid_sup(inc, lo - delta, hi, n)


def cosine_cross_correlation(theta, theta_star):
    """Closed form of the integral over [0, 1] of f_theta * f_theta_star for the cosine family."""
    t = np.asarray(theta, dtype=float)
    s = np.asarray(theta_star, dtype=float)
    gt, gs = model.sinc(t), model.sinc(s)
    num = 1.0 + gt + gs + 0.5 * (model.sinc(t - s) + model.sinc(t + s))
    out = num / ((1.0 + gt) * (1.0 + gs))
    return float(out) if out.ndim == 0 else out


def sinc_floor(theta_max=1000.0, step=1e-3):
    """min of 1 + sin(t)/t over [0, theta_max]: the grid minimum polished with a bounded scalar search."""
    t = np.arange(0.0, theta_max + step, step)
    v = 1.0 + model.sinc(t)
    i = int(np.argmin(v))
    lo, hi = t[max(i - 1, 0)], t[min(i + 1, len(t) - 1)]
    res = minimize_scalar(lambda s: 1.0 + float(model.sinc(s)), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    return min(float(v[i]), float(res.fun)), float(res.x)
