"""Exceedance sets, oscillation counts and the oscillation/weak-distance inequality.

For densities f and g the exceedance set {x : f(x) > g(x)} of two continuous
densities is open, and its minimal decomposition into disjoint open
intervals has a well defined size: the number of times f oscillates above
g. Along a sequence f_j that converges weakly to g while staying a fixed
total-variation distance away from it, this count must diverge, because

    eps <= 2 * O_j * sup_x {G(x + d_j) - G(x)} + d_j

whenever d_j bounds the Levy-Prokhorov distance and eps the TV distance.
:func:`check_oscillation_bound` evaluates every term of that inequality.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _scan, metrics, model

DEFAULT_EPS = 0.30
INEQUALITY_SLACK = 1e-9


@dataclass(frozen=True)
class IntervalSet:
    """Finite union of disjoint open intervals inside a closed domain."""

    intervals: tuple = ()
    domain: tuple = (0.0, 1.0)

    def __post_init__(self):
        lo, hi = self.domain
        prev = -np.inf
        for a, b in self.intervals:
            if not (a < b and a >= prev and lo <= a and b <= hi):
                raise ValueError(f"intervals must be sorted, disjoint and inside {self.domain}")
            prev = b

    def __len__(self):
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def contains(self, x):
        """Membership of each x in the union (open intervals, boundary of the domain included)."""
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=bool)
        lo, hi = self.domain
        for a, b in self.intervals:
            left = (x > a) | ((a == lo) & (x == lo))
            right = (x < b) | ((b == hi) & (x == hi))
            out |= left & right
        return out

    @property
    def measure(self):
        return float(sum(b - a for a, b in self.intervals))


@dataclass(frozen=True)
class OscillationReport:
    theta: float
    count: int
    lp_delta: float
    tv_epsilon: float
    modulus: float
    levy: float = field(default=float("nan"))

    @property
    def bound(self):
        return 2.0 * self.count * self.modulus + self.lp_delta

    @property
    def inequality_holds(self):
        return self.tv_epsilon <= self.bound + INEQUALITY_SLACK


def exceedance_intervals(f, g):
    """Minimal decomposition of {x : f(x) > g(x)} over the common support.

    ``f`` and ``g`` are ``(FamilySpec, theta)`` pairs. The difference is
    sign-scanned on 64 * (1 + periods) points and every sign change is
    bisected to 1e-10. Pieces that touch the boundary of the support are
    kept and counted.
    """
    (lo, hi), grid, signs, roots = _scan.crossings(f, g)
    if len(roots) == 0:
        if np.any(signs > 0):
            return IntervalSet(((lo, hi),), (lo, hi))
        return IntervalSet((), (lo, hi))
    diff = _scan.difference(f, g)
    cuts = np.concatenate([[lo], roots, [hi]])
    mids = 0.5 * (cuts[:-1] + cuts[1:])
    positive = diff(mids) > 0
    pieces = []
    for is_pos, a, b in zip(positive, cuts[:-1], cuts[1:]):
        if not is_pos or b <= a:
            continue
        if pieces and pieces[-1][1] == a:
            pieces[-1] = (pieces[-1][0], b)
        else:
            pieces.append((float(a), float(b)))
    return IntervalSet(tuple(pieces), (lo, hi))


def oscillation_count(f, g):
    """Number of intervals in the minimal decomposition of {f > g}."""
    return len(exceedance_intervals(f, g))


def oscillation_report(theta, g, eps=DEFAULT_EPS, cfg=None):
    """All terms of the oscillation inequality for f = (g's family, theta) against g."""
    family, _ = g
    f = (family, float(theta))
    count = oscillation_count(f, g)
    if f == g:
        return OscillationReport(float(theta), count, 0.0, 0.0, 0.0, 0.0)
    delta = metrics.prokhorov_upper_bound(f, g)
    tv = metrics.total_variation(f, g, cfg)
    modulus = metrics.cdf_modulus(g[0], g[1], delta)
    return OscillationReport(
        theta=float(theta),
        count=count,
        lp_delta=delta,
        tv_epsilon=min(eps, tv),
        modulus=modulus,
        levy=metrics.levy_distance(f, g),
    )


def check_oscillation_bound(sequence, g, eps=DEFAULT_EPS, cfg=None):
    """One :class:`OscillationReport` per element of ``sequence``.

    ``eps`` is a lower bound on the TV distance along the sequence; each
    report carries ``min(eps, TV_j)`` so elements equal to ``g`` give the
    trivial report. The distance term is an upper bound on the
    Levy-Prokhorov distance (quantile coupling), which is what the
    inequality requires; the plain Levy distance is reported alongside.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    seq = list(sequence)
    if not seq:
        raise ValueError("sequence must be nonempty")
    return [oscillation_report(t, g, eps, cfg) for t in seq]
