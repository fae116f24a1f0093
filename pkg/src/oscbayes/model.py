"""Parametric density families: evaluation, CDFs, sampling and structural queries.

Four families are supported, all indexed by a scalar ``theta >= 0``:

``cosine``
    f(x) = (1 + cos(theta x)) / (1 + sin(theta)/theta) on [0, 1].
``extended_cosine``
    h(x) = (1/lam + mu cos(theta x)) / (1 + mu sin(theta lam)/theta) on
    [0, lam]; ``theta`` plays the role of the oscillation frequency.
``uniform_scale``
    uniform on [0, theta], theta > 0.
``gauss_mixture``
    a fixed K-component normal mixture shifted by ``theta``.

Everything broadcasts over numpy arrays in ``theta`` and ``x``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._errors import DomainError, ValidationError
from ._seeding import uniforms

THETA_TINY = 1e-6
GAUSS_TRUNCATION = 12.0
INVERSION_TOL = 1e-12
INVERSION_MAX_ITER = 200

COSINE = "cosine"
EXTENDED_COSINE = "extended_cosine"
UNIFORM_SCALE = "uniform_scale"
GAUSS_MIXTURE = "gauss_mixture"
KINDS = (COSINE, EXTENDED_COSINE, UNIFORM_SCALE, GAUSS_MIXTURE)


@dataclass(frozen=True)
class FamilySpec:
    """A density family plus its fixed structural constants."""

    kind: str = COSINE
    lam: float = 1.0
    mu: float = 0.4
    weights: tuple = ()
    means: tuple = ()
    precisions: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown family kind {self.kind!r}")
        if self.kind == EXTENDED_COSINE:
            if not 1.0 <= self.lam <= 2.0:
                raise ValidationError("extended cosine needs lam in [1, 2]")
            if not 0.0 < self.mu < 1.0:
                raise ValidationError("extended cosine needs mu in (0, 1)")
            if self.mu > 1.0 / self.lam:
                raise ValidationError("extended cosine needs mu <= 1/lam for positivity")
        if self.kind == GAUSS_MIXTURE:
            w = np.asarray(self.weights, dtype=float)
            m = np.asarray(self.means, dtype=float)
            p = np.asarray(self.precisions, dtype=float)
            if not (w.ndim == m.ndim == p.ndim == 1 and len(w) == len(m) == len(p) >= 1):
                raise ValidationError("mixture weights, means and precisions must align")
            if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
                raise ValidationError("mixture weights must lie in the simplex")
            if np.any(p <= 0) or not np.all(np.isfinite(p)):
                raise ValidationError("mixture precisions must be strictly positive")

    @classmethod
    def cosine(cls):
        return cls(COSINE)

    @classmethod
    def extended_cosine(cls, lam, mu=0.4):
        return cls(EXTENDED_COSINE, lam=float(lam), mu=float(mu))

    @classmethod
    def uniform_scale(cls):
        return cls(UNIFORM_SCALE)

    @classmethod
    def gauss_mixture(cls, weights, means, precisions):
        return cls(
            GAUSS_MIXTURE,
            weights=tuple(float(v) for v in weights),
            means=tuple(float(v) for v in means),
            precisions=tuple(float(v) for v in precisions),
        )

    @property
    def components(self):
        return len(self.weights)


@dataclass(frozen=True)
class SampleSet:
    """Observations plus the metadata needed to regenerate them."""

    points: np.ndarray
    seed: int
    theta_star: float
    family: FamilySpec = field(default_factory=FamilySpec)

    def __len__(self):
        return len(self.points)

    @classmethod
    def from_points(cls, points, family=None, theta_star=float("nan"), seed=0):
        pts = np.asarray(points, dtype=float).ravel()
        return cls(pts, seed, theta_star, family or FamilySpec())


def check_theta(family, theta):
    t = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(t)) or np.any(t < 0):
        raise ValidationError(f"theta must be finite and nonnegative, got {theta!r}")
    if family.kind == UNIFORM_SCALE and np.any(t <= 0):
        raise ValidationError("uniform_scale needs theta > 0")
    return t


def sinc(t):
    """sin(t)/t with the value 1 at 0, Taylor-expanded below THETA_TINY."""
    t = np.asarray(t, dtype=float)
    small = np.abs(t) < THETA_TINY
    safe = np.where(small, 1.0, t)
    t2 = t * t
    return np.where(small, 1.0 - t2 / 6.0 + t2 * t2 / 120.0, np.sin(safe) / safe)


def support(family, theta):
    """Closed support interval (a, b); the Gaussian mixture is truncated at 12 sd."""
    if family.kind == COSINE:
        return 0.0, 1.0
    if family.kind == EXTENDED_COSINE:
        return 0.0, family.lam
    if family.kind == UNIFORM_SCALE:
        return 0.0, float(theta)
    m = np.asarray(family.means) + float(theta)
    sd = 1.0 / np.sqrt(np.asarray(family.precisions))
    return float(np.min(m - GAUSS_TRUNCATION * sd)), float(np.max(m + GAUSS_TRUNCATION * sd))


def frequency(family, theta):
    """Largest angular frequency of the density in x (drives panel and grid sizing)."""
    if family.kind in (COSINE, EXTENDED_COSINE):
        return float(theta)
    if family.kind == UNIFORM_SCALE:
        return 0.0
    # a Gaussian bump of sd s is resolved like a cosine of period ~ 2 s
    return math.pi * float(np.max(np.sqrt(np.asarray(family.precisions))))


def pdf(family, theta, x):
    """Unchecked density; zero outside the support. Broadcasts ``theta`` against ``x``."""
    theta = np.asarray(theta, dtype=float)
    x = np.asarray(x, dtype=float)
    if family.kind == COSINE:
        val = (1.0 + np.cos(theta * x)) / (1.0 + sinc(theta))
        return np.where((x >= 0.0) & (x <= 1.0), val, 0.0)
    if family.kind == EXTENDED_COSINE:
        lam, mu = family.lam, family.mu
        val = (1.0 / lam + mu * np.cos(theta * x)) / (1.0 + mu * lam * sinc(theta * lam))
        return np.where((x >= 0.0) & (x <= lam), val, 0.0)
    if family.kind == UNIFORM_SCALE:
        return np.where((x >= 0.0) & (x <= theta), 1.0 / theta, 0.0)
    w = np.asarray(family.weights)
    m = np.asarray(family.means)
    p = np.asarray(family.precisions)
    z = (x[..., None] - theta[..., None] - m) * np.sqrt(p)
    return np.sum(w * np.sqrt(p) * np.exp(-0.5 * z * z), axis=-1) / math.sqrt(2.0 * math.pi)


def logpdf(family, theta, x):
    """Log density, accurate next to the zeros of the cosine family; -inf outside the support."""
    theta = np.asarray(theta, dtype=float)
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        if family.kind == COSINE:
            # 1 + cos(y) = 2 cos^2(y / 2) avoids cancellation when cos(y) is near -1
            val = (math.log(2.0) + 2.0 * np.log(np.abs(np.cos(0.5 * theta * x)))
                   - np.log1p(sinc(theta)))
            return np.where((x >= 0.0) & (x <= 1.0), val, -np.inf)
        return np.log(pdf(family, theta, x))


def cdf_unchecked(family, theta, x):
    """CDF clipped to 0 left of the support and 1 right of it."""
    theta = np.asarray(theta, dtype=float)
    x = np.asarray(x, dtype=float)
    if family.kind == COSINE:
        xc = np.clip(x, 0.0, 1.0)
        val = (xc + xc * sinc(theta * xc)) / (1.0 + sinc(theta))
        return np.where(x >= 1.0, 1.0, np.where(x <= 0.0, 0.0, np.minimum(val, 1.0)))
    if family.kind == EXTENDED_COSINE:
        lam, mu = family.lam, family.mu
        xc = np.clip(x, 0.0, lam)
        val = (xc / lam + mu * xc * sinc(theta * xc)) / (1.0 + mu * lam * sinc(theta * lam))
        return np.where(x >= lam, 1.0, np.where(x <= 0.0, 0.0, np.minimum(val, 1.0)))
    if family.kind == UNIFORM_SCALE:
        return np.clip(x / theta, 0.0, 1.0)
    from scipy.special import ndtr

    w = np.asarray(family.weights)
    m = np.asarray(family.means)
    p = np.asarray(family.precisions)
    z = (x[..., None] - theta[..., None] - m) * np.sqrt(p)
    return np.clip(np.sum(w * ndtr(z), axis=-1), 0.0, 1.0)


def _check_x(family, theta, x):
    a, b = support(family, theta)
    if family.kind == GAUSS_MIXTURE:
        if not np.all(np.isfinite(x)):
            raise DomainError("x must be finite")
        return
    if np.any(x < a) or np.any(x > b):
        raise DomainError(f"x outside the support [{a}, {b}]")


def _scalar_or_array(val, x):
    return float(val) if np.ndim(x) == 0 else val


def density(family, theta, x):
    """Density of ``family`` at ``x``; raises DomainError outside the support."""
    t = float(check_theta(family, theta))
    xa = np.asarray(x, dtype=float)
    _check_x(family, t, xa)
    return _scalar_or_array(pdf(family, t, xa), x)


def cdf(family, theta, x):
    """Distribution function at ``x``; equals 1 exactly at the right end of the support."""
    t = float(check_theta(family, theta))
    xa = np.asarray(x, dtype=float)
    _check_x(family, t, xa)
    return _scalar_or_array(cdf_unchecked(family, t, xa), x)


def ppf(family, theta, u, tol=INVERSION_TOL, max_iter=INVERSION_MAX_ITER):
    """Inverse CDF by bracketed bisection, vectorised over ``u``.

    Each point stops as soon as |F(x) - u| <= tol or its bracket cannot be
    halved further in floating point, so a point's result never depends on
    the other points in the batch.
    """
    t = float(check_theta(family, theta))
    u = np.asarray(u, dtype=float)
    a, b = support(family, t)
    lo = np.full(u.shape, a)
    hi = np.full(u.shape, b)
    x = 0.5 * (lo + hi)
    active = np.ones(u.shape, dtype=bool)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        x = np.where(active, mid, x)
        resid = cdf_unchecked(family, t, x) - u
        tiny = hi - lo <= 2 * np.spacing(np.maximum(np.abs(lo), np.abs(hi)))
        active &= ~((np.abs(resid) <= tol) | tiny)
        if not active.any():
            break
        below = resid < 0
        lo = np.where(active & below, x, lo)
        hi = np.where(active & ~below, x, hi)
    return x


def sample(family, theta, n, seed):
    """``n`` draws from the family by inverse-CDF sampling of a SplitMix64 stream.

    Draw ``i`` depends only on ``(seed, i)``, so a sample of size n is the
    prefix of any larger sample with the same seed.
    """
    if n < 0:
        raise ValidationError("sample size must be nonnegative")
    t = float(check_theta(family, theta))
    u = uniforms(seed, int(n))
    points = ppf(family, t, u) if n else np.empty(0)
    return SampleSet(points, int(seed), t, family)


def zero_set(theta):
    """Points of [0, 1] where the cosine density vanishes: x = (2k+1) pi / theta."""
    t = float(check_theta(FamilySpec.cosine(), theta))
    if t < math.pi:
        return []
    k_max = int(math.floor((t / math.pi - 1.0) / 2.0)) + 1
    xs = [(2 * k + 1) * math.pi / t for k in range(k_max + 1)]
    return [x for x in xs if x <= 1.0]


def family_zeros(family, theta):
    """Zeros of the density inside its support (only the cosine family has any)."""
    if family.kind == COSINE:
        return zero_set(theta)
    if family.kind == EXTENDED_COSINE and family.mu * family.lam == 1.0 and theta > 0:
        lam = family.lam
        xs, k = [], 0
        while (2 * k + 1) * math.pi / theta <= lam:
            xs.append((2 * k + 1) * math.pi / theta)
            k += 1
        return xs
    return []


def sup_density(theta):
    """max over [0, 1] of the cosine density, 2 theta / (theta + sin theta)."""
    t = float(check_theta(FamilySpec.cosine(), theta))
    return float(2.0 / (1.0 + sinc(t)))
