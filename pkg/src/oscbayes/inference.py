"""Likelihoods and an adaptive-quadrature posterior over a scalar theta.

The posterior is stored as the 3-point Gauss-Legendre nodes of an adaptive
panel partition of [lower, theta_max]; each node carries the log of
likelihood x prior density x quadrature weight. Panels start no wider than
(2 pi / max_i x_i) / oscillation_guard, the period of the fastest likelihood
factor, and are bisected while their 2-point and 3-point Gauss estimates of
the evidence disagree by more than ``rel_tol`` times the running evidence.
Everything stays in log space until the final normalisation.
"""

import csv
import io
import math
from dataclasses import dataclass, field

import finufft
import numpy as np
from numpy.polynomial import legendre
from numpy.polynomial import polynomial as P
from scipy.special import logsumexp

from . import metrics, model
from ._errors import DegeneratePosteriorError, NumericalError, TailMassError, ValidationError
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, initial_edges, integrate

TAIL_RATIO = 1e-12
_CHUNK = 2_000_000

_X2, _W2 = legendre.leggauss(2)
_X3, _W3 = legendre.leggauss(3)


def _log_pdf_grid(family, thetas, points):
    """log f_theta(x) for every (theta, x) pair, shape (len(thetas), len(points))."""
    t = np.asarray(thetas, dtype=float)[:, None]
    x = np.asarray(points, dtype=float)[None, :]
    return model.logpdf(family, t, x)


def log_likelihood_many(family, thetas, points):
    """Log-likelihood at each theta, summing over the sample in memory-bounded chunks."""
    thetas = np.asarray(thetas, dtype=float)
    points = np.asarray(points, dtype=float)
    out = np.zeros(len(thetas))
    if len(points) == 0 or len(thetas) == 0:
        return out
    rows = max(1, _CHUNK // len(points))
    for i in range(0, len(thetas), rows):
        out[i:i + rows] = _log_pdf_grid(family, thetas[i:i + rows], points).sum(axis=1)
    return out


def log_likelihood(family, theta, sample):
    """Sum of log densities of the sample at ``theta``; -inf if a point hits a zero."""
    pts = sample.points if isinstance(sample, model.SampleSet) else np.asarray(sample, dtype=float)
    model.check_theta(family, theta)
    if len(pts) == 0:
        return 0.0
    if family.kind != model.GAUSS_MIXTURE:
        lo, hi = model.support(family, theta)
        if family.kind != model.UNIFORM_SCALE and (pts.min() < lo or pts.max() > hi):
            raise model.DomainError("sample points outside the support")
    return float(log_likelihood_many(family, [float(theta)], pts)[0])


# Lagrange basis on the 3 Gauss nodes, as power-series coefficients in t on [-1, 1]
def _lagrange_antiderivatives():
    out = []
    for j in range(3):
        others = [_X3[k] for k in range(3) if k != j]
        coef = P.polyfromroots(others) / np.prod([_X3[j] - o for o in others])
        out.append(P.polyint(coef))
    return out


_BASIS_INT = _lagrange_antiderivatives()


@dataclass(frozen=True)
class PosteriorGrid:
    """Normalised posterior on Gauss nodes; immutable after construction."""

    nodes: np.ndarray
    log_weights: np.ndarray
    log_normalizer: float
    edges: np.ndarray = None
    family: model.FamilySpec = field(default_factory=model.FamilySpec)
    diagnostics: dict = field(default_factory=dict)

    @property
    def weights(self):
        return np.exp(self.log_weights - self.log_normalizer)

    @property
    def lower(self):
        return float(self.edges[0]) if self.edges is not None else float(self.nodes[0])

    @property
    def upper(self):
        return float(self.edges[-1]) if self.edges is not None else float(self.nodes[-1])

    def mean(self):
        return float(np.dot(self.weights, self.nodes))

    def to_csv(self):
        buf = io.StringIO()
        buf.write("theta,log_weight\n")
        for t, lw in zip(self.nodes, self.log_weights):
            buf.write(f"{t:.17e},{lw:.17e}\n")
        buf.write(f"# log_normalizer={self.log_normalizer:.17e}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text, family=None):
        rows = [line for line in text.splitlines() if line.strip()]
        if not rows or rows[0].strip() != "theta,log_weight":
            raise ValidationError("posterior CSV must start with the header theta,log_weight")
        log_norm = None
        data = []
        for line in rows[1:]:
            if line.startswith("#"):
                key, _, val = line[1:].strip().partition("=")
                if key.strip() == "log_normalizer":
                    log_norm = float(val)
                continue
            t, lw = next(csv.reader([line]))
            data.append((float(t), float(lw)))
        if log_norm is None:
            raise ValidationError("posterior CSV lacks the log_normalizer footer")
        arr = np.array(data, dtype=float).reshape(-1, 2)
        return cls(arr[:, 0], arr[:, 1], log_norm, None, family or model.FamilySpec())


def _theta_frequency(family, points):
    """Angular frequency, in theta, of the fastest likelihood factor."""
    if len(points) == 0:
        return 0.0
    if family.kind in (model.COSINE, model.EXTENDED_COSINE):
        return float(np.max(np.abs(points)))
    return 0.0


def _panel_nodes(lo, hi):
    half = 0.5 * (hi - lo)[:, None]
    mid = 0.5 * (hi + lo)[:, None]
    return mid + half * _X2, mid + half * _X3


def build_posterior(prior, family, sample, cfg=None, theta_max=None, tail_check="raise"):
    """Adaptive posterior over [prior.lower, min(theta_max, prior.upper)].

    ``tail_check`` decides what happens when the prior tail beyond
    ``theta_max``, times the prior-weighted average likelihood over the last
    tenth of the grid, exceeds 1e-12 of the evidence: ``"raise"`` a
    TailMassError, ``"warn"`` (record it in the diagnostics only) or
    ``"ignore"``.
    """
    cfg = cfg or DEFAULT_CONFIG
    pts = sample.points if isinstance(sample, model.SampleSet) else np.asarray(sample, dtype=float)
    lower = float(prior.lower)
    upper = float(prior.upper)
    if theta_max is not None:
        upper = min(upper, float(theta_max))
    if not math.isfinite(upper):
        raise ValidationError("theta_max is required for priors with unbounded support")
    if upper <= lower:
        raise ValidationError("theta_max must exceed the lower end of the prior support")
    freq = _theta_frequency(family, pts)
    breaks = list(prior.kinks())
    if family.kind == model.UNIFORM_SCALE and len(pts):
        lower = max(lower, 0.0)
        breaks.append(float(np.max(pts)))
    if upper > 64.0 * max(1.0, lower):
        # octave edges keep a heavy prior tail from hiding inside one wide panel
        breaks += list(np.geomspace(max(1.0, lower), upper, int(math.log2(upper / max(1.0, lower))) + 2))
    width = cfg.max_width(freq) if freq > 0 else (upper - lower) / 64
    edges = initial_edges(lower, upper, min(width, (upper - lower) / 64), breaks)

    def log_integrand(t):
        flat = t.ravel()
        ll = log_likelihood_many(family, flat, pts) if len(pts) else np.zeros(len(flat))
        if family.kind == model.UNIFORM_SCALE:
            ll = np.where(flat > 0, ll, -np.inf)
        return (ll + prior.logpdf(flat)).reshape(t.shape)

    lo, hi = edges[:-1], edges[1:]
    t2, t3 = _panel_nodes(lo, hi)
    l2, l3 = log_integrand(t2), log_integrand(t3)
    done = np.zeros(len(lo), dtype=bool)
    depth = 0
    while True:
        shift = max(np.max(l2), np.max(l3))
        if not np.isfinite(shift):
            raise DegeneratePosteriorError("likelihood x prior vanishes at every node",
                                           panels=len(lo))
        half = 0.5 * (hi - lo)
        i2 = half * (np.exp(l2 - shift) @ _W2)
        i3 = half * (np.exp(l3 - shift) @ _W3)
        total = math.fsum(i3.tolist())
        bad = (~done) & (np.abs(i3 - i2) > cfg.rel_tol * total)
        bad &= (hi - lo) > 1e-12 * np.maximum(1.0, np.abs(hi))
        done |= ~bad
        if not bad.any():
            break
        if len(lo) + int(bad.sum()) > cfg.max_panels:
            raise NumericalError("posterior refinement exceeded max_panels", panels=len(lo),
                                 max_panels=cfg.max_panels, depth=depth,
                                 error=float(np.sum(np.abs(i3 - i2)) / total))
        mid = 0.5 * (lo[bad] + hi[bad])
        nlo = np.concatenate([lo[bad], mid])
        nhi = np.concatenate([mid, hi[bad]])
        nt2, nt3 = _panel_nodes(nlo, nhi)
        keep = ~bad
        lo = np.concatenate([lo[keep], nlo])
        hi = np.concatenate([hi[keep], nhi])
        l2 = np.concatenate([l2[keep], log_integrand(nt2)])
        l3 = np.concatenate([l3[keep], log_integrand(nt3)])
        done = np.concatenate([done[keep], np.zeros(len(nlo), dtype=bool)])
        order = np.argsort(lo, kind="stable")
        lo, hi, l2, l3, done = lo[order], hi[order], l2[order], l3[order], done[order]
        depth += 1

    half = 0.5 * (hi - lo)
    nodes = (0.5 * (hi + lo))[:, None] + half[:, None] * _X3
    log_q = np.log(half[:, None] * _W3).ravel()
    nodes, log_w = nodes.ravel(), l3.ravel() + log_q
    log_z = float(logsumexp(log_w))
    est_err = float(np.sum(np.abs(i3 - i2)) / total)

    diag = {"panels": int(len(lo)), "depth": depth, "estimated_error": est_err,
            "log_tail_ratio": -math.inf}
    if prior.upper > upper:
        tail = float(prior.sf(upper))
        if tail > 0:
            near = nodes >= lower + 0.9 * (upper - lower)
            # prior-weighted mean likelihood over the last tenth of the grid
            log_mean_lik = float(logsumexp(log_w[near])
                                 - logsumexp(prior.logpdf(nodes[near]) + log_q[near]))
            ratio = math.log(tail) + log_mean_lik - log_z
            diag["log_tail_ratio"] = ratio
            if ratio > math.log(TAIL_RATIO) and tail_check == "raise":
                raise TailMassError(
                    "prior mass beyond theta_max is not negligible; increase theta_max",
                    theta_max=upper, log_tail_ratio=ratio,
                )
    return PosteriorGrid(nodes, log_w, log_z, np.append(lo, hi[-1]), family, diag)


def _partial_panel_mass(dens3, t0, t1, half):
    """Integral over [t0, t1] (reference coordinates) of the quadratic through 3 node values."""
    acc = np.zeros(len(t0))
    for j in range(3):
        acc += dens3[:, j] * (P.polyval(t1, _BASIS_INT[j]) - P.polyval(t0, _BASIS_INT[j]))
    return acc * half


def posterior_mass(grid, lo, hi):
    """Posterior probability of [lo, hi].

    Panels inside the interval contribute their node weights; panels cut by
    an endpoint contribute the exact integral of the quadratic interpolant
    of the posterior density through their three nodes.
    """
    if lo > hi:
        raise ValidationError("posterior_mass needs lo <= hi")
    w = grid.weights
    if grid.edges is None:
        inside = (grid.nodes >= lo) & (grid.nodes <= hi)
        return float(min(1.0, math.fsum(w[inside].tolist())))
    a, b = grid.edges[:-1], grid.edges[1:]
    w3 = w.reshape(-1, 3)
    half = 0.5 * (b - a)
    full = (a >= lo) & (b <= hi)
    total = math.fsum(w3[full].ravel().tolist())
    cut = (~full) & (b > lo) & (a < hi)
    if cut.any():
        mid = 0.5 * (a[cut] + b[cut])
        h = half[cut]
        t0 = (np.maximum(a[cut], lo) - mid) / h
        t1 = (np.minimum(b[cut], hi) - mid) / h
        dens3 = w3[cut] / (h[:, None] * _W3)
        total += math.fsum(_partial_panel_mass(dens3, t0, t1, h).tolist())
    return float(min(1.0, max(0.0, total)))


def posterior_cdf(grid, theta):
    return posterior_mass(grid, grid.lower, max(grid.lower, float(theta)))


def mixture_density(family, thetas, weights):
    """Callable x -> sum_k w_k f_theta_k(x), vectorised over x.

    For the cosine families the oscillating part is a sum of cosines at
    arbitrary frequencies; when the direct sum would cost more than
    ``_CHUNK`` cosine evaluations it goes through a type-3 non-uniform FFT.
    """
    th = np.asarray(thetas, dtype=float)
    w = np.asarray(weights, dtype=float)
    lo, hi = model.support(family, th[0]) if len(th) else (0.0, 1.0)

    if family.kind in (model.COSINE, model.EXTENDED_COSINE):
        if family.kind == model.COSINE:
            flat, amp = 1.0, 1.0
            denom = 1.0 + model.sinc(th)
        else:
            flat, amp = 1.0 / family.lam, family.mu
            denom = 1.0 + family.mu * family.lam * model.sinc(th * family.lam)
        c = w / denom
        base = flat * float(np.sum(c))

        def evaluate(x):
            xa = np.asarray(x, dtype=float)
            flat_x = xa.ravel()
            if len(th) * len(flat_x) <= _CHUNK:
                osc = np.cos(np.outer(flat_x, th)) @ c
            else:
                osc = finufft.nufft1d3(th, c.astype(complex), flat_x, eps=1e-13, isign=1).real
            val = (base + amp * osc).reshape(xa.shape)
            return np.where((xa >= lo) & (xa <= hi), np.maximum(val, 0.0), 0.0)

        return evaluate

    def evaluate(x):
        xa = np.asarray(x, dtype=float)
        flat_x = xa.ravel()
        out = np.zeros(len(flat_x))
        rows = max(1, _CHUNK // max(1, len(flat_x)))
        for i in range(0, len(th), rows):
            out += w[i:i + rows] @ model.pdf(family, th[i:i + rows, None], flat_x[None, :])
        return out.reshape(xa.shape)

    return evaluate


def posterior_predictive(grid, x, min_weight=0.0):
    """Posterior mixture of f_theta at ``x``; nodes with weight <= ``min_weight`` are skipped."""
    w = grid.weights
    keep = w > min_weight
    val = mixture_density(grid.family, grid.nodes[keep], w[keep])(x)
    return float(val) if np.ndim(x) == 0 else val


def predictive_hellinger(grid, theta_ref, cfg=None, mass_cut=1e-12):
    """Hellinger distance from the posterior predictive to f_theta_ref.

    Nodes are dropped in increasing weight order while the dropped mass stays
    below ``mass_cut``; the remaining weights are renormalised.
    """
    w = grid.weights
    order = np.argsort(w, kind="stable")
    dropped = np.cumsum(w[order])
    cut = np.zeros(len(w), dtype=bool)
    cut[order[dropped < mass_cut]] = True
    th, wk = grid.nodes[~cut], w[~cut]
    wk = wk / wk.sum()
    fam = grid.family
    lo, hi = model.support(fam, theta_ref)
    freq = max(float(np.max(th)) if fam.kind in (model.COSINE, model.EXTENDED_COSINE) else 0.0,
               model.frequency(fam, theta_ref))

    pred = mixture_density(fam, th, wk)

    def integrand(x):
        return (np.sqrt(pred(x)) - np.sqrt(model.pdf(fam, theta_ref, x))) ** 2

    cfg = cfg or QuadratureConfig(abs_tol=1e-9, rel_tol=1e-8)
    res = integrate(integrand, lo, hi, cfg, freq=freq, breakpoints=model.family_zeros(fam, theta_ref))
    return math.sqrt(max(res.value, 0.0))


def kl_profile(theta_star, radii, cfg=None, family=None, n_grid=201):
    """For each radius r, the max of KL(f_theta_star, f_theta') over |theta' - theta_star| <= r."""
    family = family or model.FamilySpec.cosine()
    out = []
    for r in radii:
        if r < 0:
            raise ValidationError("radii must be nonnegative")
        if r == 0:
            out.append((0.0, 0.0))
            continue
        grid = np.linspace(max(0.0, theta_star - r), theta_star + r, n_grid)
        kl = max(metrics.kl_divergence((family, float(theta_star)), (family, float(t)), cfg) for t in grid)
        out.append((float(r), float(kl)))
    return out
