"""Priors on theta >= 0 and tail diagnostics.

Each prior exposes ``pdf``, ``logpdf``, ``cdf``, ``sf`` (tail mass
1 - CDF) and ``mass(a, b)``, all vectorised. Heavy-tailed priors put a flat
body on [0, scale] and join a decreasing tail continuously at ``scale``.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from ._errors import ValidationError


class PriorSpec:
    """Common interface; subclasses define pdf, cdf and sf."""

    lower = 0.0
    upper = math.inf

    def logpdf(self, theta):
        with np.errstate(divide="ignore"):
            return np.log(self.pdf(theta))

    def mass(self, a, b):
        """Prior probability of [a, b], taken from whichever tail is more accurate."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        left = self.cdf(b) - self.cdf(a)
        right = self.sf(a) - self.sf(b)
        return np.maximum(np.where(self.cdf(a) > 0.5, right, left), 0.0)

    def kinks(self):
        """Points where the density is not smooth (panel edges for quadrature)."""
        return []

    def describe(self):
        raise NotImplementedError


@dataclass(frozen=True)
class TruncatedUniform(PriorSpec):
    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if not (0.0 <= self.a < self.b < math.inf):
            raise ValidationError("TruncatedUniform needs 0 <= a < b < inf")

    @property
    def lower(self):
        return self.a

    @property
    def upper(self):
        return self.b

    def pdf(self, theta):
        t = np.asarray(theta, dtype=float)
        return np.where((t >= self.a) & (t <= self.b), 1.0 / (self.b - self.a), 0.0)

    def cdf(self, theta):
        return np.clip((np.asarray(theta, dtype=float) - self.a) / (self.b - self.a), 0.0, 1.0)

    def sf(self, theta):
        return np.clip((self.b - np.asarray(theta, dtype=float)) / (self.b - self.a), 0.0, 1.0)

    def kinks(self):
        return [self.a, self.b]

    def describe(self):
        return f"truncated_uniform(a={self.a!r}, b={self.b!r})"


@dataclass(frozen=True)
class Exponential(PriorSpec):
    rate: float = 1.0

    def __post_init__(self):
        if not self.rate > 0:
            raise ValidationError("Exponential needs rate > 0")

    def pdf(self, theta):
        t = np.asarray(theta, dtype=float)
        return np.where(t >= 0, self.rate * np.exp(-self.rate * np.maximum(t, 0.0)), 0.0)

    def logpdf(self, theta):
        t = np.asarray(theta, dtype=float)
        return np.where(t >= 0, math.log(self.rate) - self.rate * t, -np.inf)

    def cdf(self, theta):
        return -np.expm1(-self.rate * np.maximum(np.asarray(theta, dtype=float), 0.0))

    def sf(self, theta):
        return np.exp(-self.rate * np.maximum(np.asarray(theta, dtype=float), 0.0))

    def describe(self):
        return f"exponential(rate={self.rate!r})"


@dataclass(frozen=True)
class ParetoTail(PriorSpec):
    """Flat on [0, scale], then proportional to theta^-(1 + alpha)."""

    alpha: float = 1.0
    scale: float = 1.0

    def __post_init__(self):
        if not (self.alpha > 0 and self.scale > 0):
            raise ValidationError("ParetoTail needs alpha > 0 and scale > 0")

    @property
    def _c(self):
        return self.alpha / (self.scale * (1.0 + self.alpha))

    def pdf(self, theta):
        t = np.asarray(theta, dtype=float)
        r = np.maximum(t, self.scale) / self.scale
        return np.where(t < 0, 0.0, np.where(t < self.scale, self._c, self._c * r ** -(1.0 + self.alpha)))

    def sf(self, theta):
        t = np.maximum(np.asarray(theta, dtype=float), 0.0)
        r = np.maximum(t, self.scale) / self.scale
        body = 1.0 - self._c * t
        tail = (self._c * self.scale / self.alpha) * r ** -self.alpha
        return np.where(t < self.scale, body, tail)

    def cdf(self, theta):
        return 1.0 - self.sf(theta)

    def kinks(self):
        return [self.scale]

    def describe(self):
        return f"pareto_tail(alpha={self.alpha!r}, scale={self.scale!r})"


def upper_gamma(a, u):
    """Upper incomplete gamma Gamma(a, u) for any real a and u > 0.

    Negative orders are reached from the first positive (or zero) order by
    the downward recurrence Gamma(a, u) = (Gamma(a+1, u) - u^a e^-u) / a.
    """
    u = np.asarray(u, dtype=float)
    k = max(0, math.ceil(-a)) if a <= 0 else 0
    top = a + k
    if top == 0:
        g = special.exp1(u)
    else:
        g = special.gammaincc(top, u) * special.gamma(top)
    for j in range(k - 1, -1, -1):
        order = a + j
        g = (g - u**order * np.exp(-u)) / order
    return g


@dataclass(frozen=True)
class LogPolyTail(PriorSpec):
    """Flat on [0, scale], then proportional to 1 / (theta^2 (ln theta)^(2 + beta)); scale > 1."""

    beta: float = 1.0
    scale: float = math.e

    def __post_init__(self):
        if not (self.beta > 0 and self.scale > 1):
            raise ValidationError("LogPolyTail needs beta > 0 and scale > 1")

    def _h(self, t):
        return 1.0 / (t * t * np.log(t) ** (2.0 + self.beta))

    def _tail_integral(self, t):
        # integral of _h from t to infinity, substituting u = ln t
        return upper_gamma(-1.0 - self.beta, np.log(t))

    @property
    def _c(self):
        s = self.scale
        return 1.0 / (s + float(self._tail_integral(s)) / float(self._h(s)))

    def pdf(self, theta):
        t = np.asarray(theta, dtype=float)
        tt = np.maximum(t, self.scale)
        return np.where(t < 0, 0.0, np.where(t < self.scale, self._c, self._c * self._h(tt) / self._h(self.scale)))

    def sf(self, theta):
        t = np.maximum(np.asarray(theta, dtype=float), 0.0)
        c = self._c
        tt = np.maximum(t, self.scale)
        tail = c * self._tail_integral(tt) / float(self._h(self.scale))
        return np.where(t < self.scale, 1.0 - c * t, tail)

    def cdf(self, theta):
        return 1.0 - self.sf(theta)

    def kinks(self):
        return [self.scale]

    def describe(self):
        return f"log_poly_tail(beta={self.beta!r}, scale={self.scale!r})"


@dataclass(frozen=True)
class PhiTail(PriorSpec):
    """Tail 1 - Pi(theta) = exp(-phi(ln theta)) beyond ``scale``, linear CDF below it.

    ``phi`` is ``"exp"`` for phi(t) = beta e^t (an exponential tail),
    ``"power"`` for phi(t) = t^(1 + beta), or any callable; callables get a
    central-difference density.
    """

    phi: object = "exp"
    beta: float = 1.0
    scale: float = 2.0

    def __post_init__(self):
        if not self.beta > 0:
            raise ValidationError("PhiTail needs beta > 0")
        if self.phi == "power" and self.scale <= 1:
            raise ValidationError("power-type PhiTail needs scale > 1")
        if not (callable(self.phi) or self.phi in ("exp", "power")):
            raise ValidationError("phi must be 'exp', 'power' or a callable")
        if self.scale <= 0:
            raise ValidationError("PhiTail needs scale > 0")

    def _phi(self, t):
        if self.phi == "exp":
            return self.beta * np.exp(t)
        if self.phi == "power":
            return np.maximum(t, 0.0) ** (1.0 + self.beta)
        return np.asarray(self.phi(t), dtype=float)

    def _dphi(self, t):
        if self.phi == "exp":
            return self.beta * np.exp(t)
        if self.phi == "power":
            return (1.0 + self.beta) * np.maximum(t, 0.0) ** self.beta
        h = 1e-6 * np.maximum(1.0, np.abs(t))
        return (self._phi(t + h) - self._phi(t - h)) / (2 * h)

    def sf(self, theta):
        t = np.maximum(np.asarray(theta, dtype=float), 0.0)
        tt = np.maximum(t, self.scale)
        s_scale = float(np.exp(-self._phi(math.log(self.scale))))
        return np.where(t < self.scale, 1.0 - (1.0 - s_scale) * t / self.scale, np.exp(-self._phi(np.log(tt))))

    def cdf(self, theta):
        return 1.0 - self.sf(theta)

    def pdf(self, theta):
        t = np.asarray(theta, dtype=float)
        tt = np.maximum(t, self.scale)
        s_scale = float(np.exp(-self._phi(math.log(self.scale))))
        lt = np.log(tt)
        tail = np.exp(-self._phi(lt)) * self._dphi(lt) / tt
        return np.where(t < 0, 0.0, np.where(t < self.scale, (1.0 - s_scale) / self.scale, tail))

    def kinks(self):
        return [self.scale]

    def describe(self):
        name = self.phi if isinstance(self.phi, str) else "callable"
        return f"phi_tail(phi={name}, beta={self.beta!r}, scale={self.scale!r})"


@dataclass(frozen=True)
class PriorDiagnostics:
    k: np.ndarray
    increments: np.ndarray
    partial_sums: np.ndarray
    tail_exponent: float
    log_exponent: float
    verdict: str


def prior_diagnostics(prior, delta, k_max):
    """Square-root-sum test over the cover [2k delta, 2k delta + 2 delta], k < k_max.

    Increments are sqrt(Pi(A_k)); the partial sums stay bounded exactly when
    the increments are summable. Over the last two decades of k the log
    increments are fitted by c - a ln k - b ln ln k; the verdict is
    ``"vanishing"`` when the increments are identically zero (or underflow) in the tail,
    ``"summable"`` when a > 1 or (a ~ 1 and b > 1), else ``"diverging"``.
    """
    if delta <= 0:
        raise ValidationError("delta must be positive")
    k = np.arange(int(k_max), dtype=float)
    inc = np.sqrt(prior.mass(2 * k * delta, 2 * k * delta + 2 * delta))
    sums = np.cumsum(inc)
    lo = max(3, int(k_max) // 100)
    tail = slice(lo, int(k_max))
    kt, it = k[tail], inc[tail]
    if len(kt) == 0 or np.all(it == 0):
        return PriorDiagnostics(k, inc, sums, math.inf, math.inf, "vanishing")
    pos = it > 0
    if pos.sum() < 3:
        return PriorDiagnostics(k, inc, sums, math.inf, math.inf, "vanishing")
    X = np.column_stack([np.ones(pos.sum()), -np.log(kt[pos]), -np.log(np.log(kt[pos]))])
    coef, *_ = np.linalg.lstsq(X, np.log(it[pos]), rcond=None)
    a, b = float(coef[1]), float(coef[2])
    if a > 1.02 or (a > 0.98 and b > 1.0):
        verdict = "summable"
    else:
        verdict = "diverging"
    return PriorDiagnostics(k, inc, sums, a, b, verdict)
