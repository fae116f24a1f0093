"""Maximum likelihood on a window, likelihood peaks far out, and the entropy check.

For the cosine family a single observation x contributes a factor that
peaks at 2 theta / (theta + sin theta) whenever theta x is a multiple of
2 pi. Dirichlet's simultaneous approximation theorem gives integers theta
that put every observation near such a peak at once, so the likelihood
climbs to about 2^n for arbitrarily large theta, while on a bounded window
it stays near the much lower cross-correlation ceiling.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from . import model
from ._errors import ValidationError
from ._seeding import derive_seed
from .inference import log_likelihood_many
from .quadrature import DEFAULT_CONFIG, integrate

SCAN_POINTS_PER_PERIOD = 64
REFINE_TOL = 1e-9
TOP_CANDIDATES = 8
DEFAULT_SCAN_BOUND = 10**7
MAX_FEASIBLE_N = 6
CEILING_C = 1.9
_SCAN_CHUNK = 1 << 20


def _points(sample):
    pts = sample.points if isinstance(sample, model.SampleSet) else np.asarray(sample, dtype=float)
    if len(pts) == 0:
        raise ValidationError("sample must be nonempty")
    return pts


def _loglik(family, pts):
    def f(t):
        return log_likelihood_many(family, np.atleast_1d(t), pts)
    return f


def restricted_mle(family, sample, M):
    """Global maximiser of the log-likelihood over [0, M].

    A dense scan with step at most (2 pi / max x_i) / 64 locates the local
    maxima; the best few are polished by a bounded golden-section/parabolic
    search to 1e-9 in theta. Ties go to the smallest theta. Returns
    ``(theta_hat, log_lik)``.
    """
    if not M > 0:
        raise ValidationError("M must be positive")
    pts = _points(sample)
    f = _loglik(family, pts)
    xbar = float(np.max(np.abs(pts)))
    step = (2.0 * math.pi / xbar) / SCAN_POINTS_PER_PERIOD if xbar > 0 else M / 64
    n_grid = max(65, int(math.ceil(M / step)) + 1)
    grid = np.linspace(0.0, float(M), n_grid)
    vals = f(grid)
    vals = np.where(np.isnan(vals), -np.inf, vals)

    interior = np.flatnonzero((vals[1:-1] >= vals[:-2]) & (vals[1:-1] >= vals[2:])) + 1
    cand = list(interior)
    if vals[0] >= vals[1]:
        cand.append(0)
    if vals[-1] >= vals[-2]:
        cand.append(n_grid - 1)
    cand = np.array(sorted(set(cand)), dtype=int)
    if len(cand) == 0:
        cand = np.array([int(np.argmax(vals))])
    # stable sort on -value keeps smaller theta first among equal values
    top = cand[np.argsort(-vals[cand], kind="stable")[:TOP_CANDIDATES]]

    best_t, best_v = 0.0, -math.inf
    for i in sorted(top):
        lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, n_grid - 1)]
        t_i, v_i = float(grid[i]), float(vals[i])
        if np.isfinite(v_i):
            res = minimize_scalar(lambda t: -float(f(t)[0]), bounds=(lo, hi), method="bounded",
                                  options={"xatol": REFINE_TOL})
            if -res.fun > v_i:
                t_i, v_i = float(res.x), float(-res.fun)
        if not math.isfinite(best_v) or v_i > best_v + 1e-12 * max(1.0, abs(best_v)):
            best_t, best_v = t_i, v_i
    return best_t, best_v


@dataclass(frozen=True)
class PeakSearchResult:
    """Outcome of the integer scan; on failure ``theta`` is the best candidate seen."""

    theta: float
    per_point_densities: tuple
    min_density: float
    scan_bound: int
    iterations: int
    found: bool = True
    delta: float = float("nan")

    @property
    def log_lik(self):
        return float(np.sum(np.log(self.per_point_densities)))


def phase_tolerance(delta):
    """Largest phase phi with cos(phi) >= 1 - delta / 2."""
    if not 0 < delta < 1:
        raise ValidationError("delta must lie in (0, 1)")
    return math.acos(1.0 - delta / 2.0)


def phase_distance(theta, x):
    """Distance of theta * x to the nearest multiple of 2 pi."""
    r = np.mod(np.asarray(theta, dtype=float) * np.asarray(x, dtype=float), 2.0 * math.pi)
    return np.minimum(r, 2.0 * math.pi - r)


def peak_accepts(theta, points, delta):
    """Acceptance predicate of the integer scan, usable at any real theta > 0."""
    theta = float(theta)
    if theta <= 0:
        return False
    eps = phase_tolerance(delta)
    return bool(abs(math.sin(theta) / theta) < delta / 4.0
                and np.all(phase_distance(theta, points) < eps))


def dirichlet_peak_search(sample, delta, scan_bound=DEFAULT_SCAN_BOUND, start=1):
    """Smallest integer theta in [start, scan_bound] accepted by :func:`peak_accepts`.

    Acceptance implies every observation has density at least 2 - delta.
    The scan runs in chunks and stops at the first hit; if nothing qualifies
    the result has ``found=False`` and carries the integer with the largest
    minimum density seen.
    """
    pts = _points(sample)
    eps = phase_tolerance(delta)
    family = model.FamilySpec.cosine()
    # |sin t / t| < delta / 4 holds for every t > 4 / delta, so small t need a direct check
    start = max(1, int(start))
    best_t, best_min = start, -math.inf
    scanned = 0
    for lo in range(start, int(scan_bound) + 1, _SCAN_CHUNK):
        hi = min(lo + _SCAN_CHUNK, int(scan_bound) + 1)
        t = np.arange(lo, hi, dtype=float)
        ok = np.abs(np.sin(t) / t) < delta / 4.0
        worst = np.zeros(len(t))
        for x in pts:
            d = phase_distance(t, x)
            ok &= d < eps
            np.maximum(worst, d, out=worst)
        scanned += len(t)
        hits = np.flatnonzero(ok)
        if len(hits):
            theta = float(t[hits[0]])
            dens = tuple(float(v) for v in model.pdf(family, theta, pts))
            return PeakSearchResult(theta, dens, min(dens), int(scan_bound), scanned, True, delta)
        j = int(np.argmin(worst))
        cand_min = float(np.min(model.pdf(family, t[j], pts)))
        if cand_min > best_min:
            best_t, best_min = float(t[j]), cand_min
    dens = tuple(float(v) for v in model.pdf(family, best_t, pts))
    return PeakSearchResult(best_t, dens, min(dens), int(scan_bound), scanned, False, delta)


def refine_peak(sample, result, half_width=0.5):
    """Real-valued local maximum of the likelihood around an accepted integer theta."""
    pts = _points(sample)
    f = _loglik(model.FamilySpec.cosine(), pts)
    lo, hi = max(0.0, result.theta - half_width), result.theta + half_width
    res = minimize_scalar(lambda t: -float(f(t)[0]), bounds=(lo, hi), method="bounded",
                          options={"xatol": REFINE_TOL})
    if -res.fun >= float(f(result.theta)[0]):
        return float(res.x), float(-res.fun)
    return result.theta, float(f(result.theta)[0])


@dataclass(frozen=True)
class EscapeRow:
    M: float
    theta_hat: float
    log_lik: float
    peak_theta: float
    peak_log_lik: float
    verdict: str


@dataclass(frozen=True)
class EscapeReport:
    n: int
    seed: int
    rows: tuple
    peak: PeakSearchResult = None
    ceiling_margin: float = 0.05
    restricted_mean_log_lik: tuple = field(default=())

    @property
    def peak_exceeds_all(self):
        return all(r.verdict == "peak_exceeds" for r in self.rows)

    @property
    def below_ceiling(self):
        """Per-observation mean log-likelihood at each restricted maximiser below ln 1.9 + margin."""
        cap = math.log(CEILING_C) + self.ceiling_margin
        return tuple(v < cap for v in self.restricted_mean_log_lik)

    def to_csv(self):
        lines = ["M,theta_hat,log_lik,peak_theta,peak_log_lik,verdict"]
        for r in self.rows:
            lines.append(f"{r.M:.17e},{r.theta_hat:.17e},{r.log_lik:.17e},"
                         f"{r.peak_theta:.17e},{r.peak_log_lik:.17e},{r.verdict}")
        return "\n".join(lines) + "\n"


def escape_experiment(theta_star, n, M_list, delta=0.3, seed=0, scan_bound=DEFAULT_SCAN_BOUND,
                      force=False, ceiling_margin=0.05):
    """Restricted maxima on [0, M] for each M against a likelihood peak beyond max(M_list).

    The peak search starts just above max(M_list) with the given ``delta``;
    while the peak does not beat every restricted maximum, delta is halved
    (down to 1e-3) and the scan repeated. A row's verdict is
    ``"peak_exceeds"``, ``"restricted_wins"`` or ``"inconclusive"`` when no
    peak was found within ``scan_bound``.
    """
    if n < 1:
        raise ValidationError("n must be at least 1")
    if n > MAX_FEASIBLE_N and not force:
        raise ValidationError(f"peak search is infeasible beyond n = {MAX_FEASIBLE_N}; pass force=True")
    M_list = sorted(float(m) for m in M_list)
    if not M_list or M_list[0] <= 0:
        raise ValidationError("M_list must hold positive values")
    family = model.FamilySpec.cosine()
    sample = model.sample(family, theta_star, n, derive_seed(seed, 0))
    restricted = [restricted_mle(family, sample, m) for m in M_list]
    best_restricted = max(v for _, v in restricted)

    start = int(math.floor(M_list[-1])) + 1
    d = float(delta)
    peak = dirichlet_peak_search(sample, d, scan_bound, start=start)
    while peak.found and peak.log_lik <= best_restricted and d / 2 >= 1e-3:
        d /= 2
        peak = dirichlet_peak_search(sample, d, scan_bound, start=start)

    rows = []
    for m, (t_hat, v) in zip(M_list, restricted):
        if not peak.found:
            verdict = "inconclusive"
        elif peak.log_lik > v:
            verdict = "peak_exceeds"
        else:
            verdict = "restricted_wins"
        rows.append(EscapeRow(m, t_hat, v, peak.theta, peak.log_lik, verdict))
    means = tuple(v / n for _, v in restricted)
    return EscapeReport(int(n), int(seed), tuple(rows), peak, ceiling_margin, means)


def entropy_diagnostic(theta_star, cfg=None):
    """Integral over [0, 1] of f ln f for the cosine density at ``theta_star``."""
    family = model.FamilySpec.cosine()
    t = float(model.check_theta(family, theta_star))
    if t == 0:
        return 0.0

    def integrand(x):
        f = model.pdf(family, t, x)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(f > 0, f * np.log(f), 0.0)

    res = integrate(integrand, 0.0, 1.0, cfg or DEFAULT_CONFIG, freq=t,
                    breakpoints=model.zero_set(t))
    return float(res.value)
