"""Configuration, seeded Monte Carlo runners and CSV emitters.

Config files are flat ``key = value`` text, one pair per line, ``#`` starts
a comment. Families and priors are written as calls, for example
``prior = pareto_tail(alpha=0.5, scale=1)`` or
``family = extended_cosine(lam=1.5, mu=0.4)``. Recognised keys:

    family, theta_star, prior, n_schedule, replicates, epsilon,
    master_seed, theta_max, tail_check, abs_tol, rel_tol, max_panels,
    oscillation_guard, output_path

Replicate r draws its sample from ``derive_seed(master_seed, r)``; samples
for the whole schedule are prefixes of one stream, so a replicate's
n = 100 sample extends its n = 10 sample.
"""

import ast
from dataclasses import dataclass, field, replace

import numpy as np

from . import inference, metrics, model, oscillations, priors
from ._errors import NumericalError, ValidationError
from ._seeding import derive_seed
from .quadrature import QuadratureConfig

CONSISTENCY_HEADER = ("replicate,n,seed,status,mass_in,mass_out,predictive_hellinger,"
                      "levy_mean,log_tail_ratio")
PROBE_HEADER = "theta,levy,hellinger,oscillation_count"
FIGURE_HEADER = "theta,x,density,cdf"
FIGURE_THETAS = (5.0, 20.0, 80.0, 320.0)
ZERO_THETA_MAX = 1e4

PRIORS = {
    "truncated_uniform": priors.TruncatedUniform,
    "exponential": priors.Exponential,
    "pareto_tail": priors.ParetoTail,
    "log_poly_tail": priors.LogPolyTail,
    "phi_tail": priors.PhiTail,
}

FAMILIES = {
    "cosine": model.FamilySpec.cosine,
    "extended_cosine": model.FamilySpec.extended_cosine,
    "uniform_scale": model.FamilySpec.uniform_scale,
    "gauss_mixture": model.FamilySpec.gauss_mixture,
}


def fmt(v):
    """Full-precision scientific float, or the plain text of ints and strings."""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return f"{float(v):.17e}"


def csv_text(header, rows):
    return header + "\n" + "".join(",".join(fmt(v) for v in row) + "\n" for row in rows)


def parse_call(text, registry, what):
    """Build an object from ``name(key=value, ...)`` (or a bare ``name``) using ``registry``."""
    try:
        node = ast.parse(text.strip(), mode="eval").body
    except SyntaxError as exc:
        raise ValidationError(f"cannot parse {what} {text!r}") from exc
    if isinstance(node, ast.Name):
        name, kwargs, args = node.id, {}, []
    elif isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
        name = node.func.id
        try:
            args = [ast.literal_eval(a) for a in node.args]
            kwargs = {k.arg: ast.literal_eval(k.value) for k in node.keywords}
        except ValueError as exc:
            raise ValidationError(f"{what} arguments must be literals: {text!r}") from exc
    else:
        raise ValidationError(f"cannot parse {what} {text!r}")
    if name not in registry:
        raise ValidationError(f"unknown {what} {name!r}; choose from {sorted(registry)}")
    try:
        return registry[name](*args, **kwargs)
    except TypeError as exc:
        raise ValidationError(f"bad arguments for {what} {name!r}: {exc}") from exc


def parse_prior(text):
    return parse_call(text, PRIORS, "prior")


def parse_family(text):
    return parse_call(text, FAMILIES, "family")


def read_key_values(text):
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise ValidationError(f"line {lineno}: expected key = value")
        out[key.strip()] = val.strip()
    return out


@dataclass(frozen=True)
class ExperimentConfig:
    family: model.FamilySpec = field(default_factory=model.FamilySpec.cosine)
    theta_star: float = 1.0
    prior: priors.PriorSpec = field(default_factory=priors.Exponential)
    n_schedule: tuple = (10, 100, 1000)
    replicates: int = 20
    epsilon: float = 0.25
    master_seed: int = 0
    theta_max: float = 60.0
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    output_path: str = ""
    tail_check: str = "raise"

    def __post_init__(self):
        ns = tuple(int(n) for n in self.n_schedule)
        if not ns or any(b <= a for a, b in zip(ns, ns[1:])) or ns[0] < 0:
            raise ValidationError("n_schedule must be nonempty, nonnegative and strictly increasing")
        object.__setattr__(self, "n_schedule", ns)
        if self.replicates < 1:
            raise ValidationError("replicates must be at least 1")
        if not self.epsilon > 0:
            raise ValidationError("epsilon must be positive")
        if self.tail_check not in ("raise", "warn", "ignore"):
            raise ValidationError("tail_check must be raise, warn or ignore")
        model.check_theta(self.family, self.theta_star)
        if not self.theta_max > self.theta_star:
            raise ValidationError("theta_max must exceed theta_star")

    @classmethod
    def from_text(cls, text, **overrides):
        kv = read_key_values(text)
        kw = {}
        quad = {}
        for key, val in kv.items():
            if key == "family":
                kw[key] = parse_family(val)
            elif key == "prior":
                kw[key] = parse_prior(val)
            elif key == "n_schedule":
                kw[key] = tuple(int(float(v)) for v in val.replace(";", ",").split(",") if v.strip())
            elif key in ("replicates", "master_seed"):
                kw[key] = int(val, 0)
            elif key in ("theta_star", "epsilon", "theta_max"):
                kw[key] = float(val)
            elif key in ("output_path", "tail_check"):
                kw[key] = val
            elif key in ("abs_tol", "rel_tol"):
                quad[key] = float(val)
            elif key in ("max_panels", "oscillation_guard"):
                quad[key] = int(float(val))
            else:
                raise ValidationError(f"unknown config key {key!r}")
        if quad:
            kw["quadrature"] = QuadratureConfig(**quad)
        kw.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kw)

    @classmethod
    def load(cls, path, **overrides):
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read(), **overrides)


def neighbourhood(theta_star, eps):
    """The interval A_eps around theta_star, clipped to theta >= 0."""
    return max(0.0, theta_star - eps), theta_star + eps


def _replicate_rows(cfg, r):
    seed = derive_seed(cfg.master_seed, r)
    full = model.sample(cfg.family, cfg.theta_star, cfg.n_schedule[-1], seed)
    lo, hi = neighbourhood(cfg.theta_star, cfg.epsilon)
    rows = []
    for n in cfg.n_schedule:
        pts = full.points[:n]
        try:
            grid = inference.build_posterior(cfg.prior, cfg.family, pts, cfg.quadrature,
                                             cfg.theta_max, cfg.tail_check)
            # the open neighbourhood and its closure differ by a null set
            mass_in = inference.posterior_mass(grid, lo, min(hi, grid.upper))
            ph = inference.predictive_hellinger(grid, cfg.theta_star)
            levy = metrics.levy_distance((cfg.family, grid.mean()), (cfg.family, cfg.theta_star))
            rows.append((r, n, seed, "ok", mass_in, 1.0 - mass_in, ph, levy,
                         grid.diagnostics["log_tail_ratio"]))
        except (NumericalError, ValidationError) as exc:
            nan = float("nan")
            rows.append((r, n, seed, f"failed:{type(exc).__name__}", nan, nan, nan, nan, nan))
    return rows


def run_consistency_experiment(cfg):
    """CSV text with one row per (replicate, n); failures are recorded, not raised.

    Columns: replicate, n, seed, status, posterior mass of A_eps and of its
    complement, Hellinger distance of the posterior predictive to
    f_theta_star, Levy distance of F at the posterior mean to F_theta_star,
    and the log tail-mass ratio beyond theta_max.
    """
    rows = []
    for r in range(cfg.replicates):
        rows.extend(_replicate_rows(cfg, r))
    text = csv_text(CONSISTENCY_HEADER, rows)
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text


def read_csv_columns(text):
    """Parse CSV text produced here into a dict of column name -> list of strings."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    header = lines[0].split(",")
    cols = {h: [] for h in header}
    for ln in lines[1:]:
        for h, v in zip(header, ln.split(",")):
            cols[h].append(v)
    return cols


def median_by_n(text, column):
    """Median over successful replicates of ``column`` for each n, in schedule order."""
    cols = read_csv_columns(text)
    out = {}
    for n, status, v in zip(cols["n"], cols["status"], cols[column]):
        if status == "ok":
            out.setdefault(int(n), []).append(float(v))
    return {n: float(np.median(v)) for n, v in sorted(out.items())}


def weak_vs_strong_probe(theta_sequence, reference, family=None, cfg=None):
    """Per theta_j: Levy and Hellinger distances to the reference and the oscillation count."""
    family = family or model.FamilySpec.cosine()
    seq = [float(t) for t in theta_sequence]
    if not seq:
        raise ValidationError("theta_sequence must be nonempty")
    ref = (family, float(reference))
    rows = []
    for t in seq:
        f = (family, t)
        rows.append((t, metrics.levy_distance(f, ref), metrics.hellinger(f, ref, cfg),
                     oscillations.oscillation_count(f, ref)))
    return csv_text(PROBE_HEADER, rows)


def emit_figure_data(theta_list=FIGURE_THETAS, grid_points=512, family=None):
    """Long-format density and CDF values on an equispaced grid over the support."""
    if grid_points < 2:
        raise ValidationError("grid_points must be at least 2")
    family = family or model.FamilySpec.cosine()
    rows = []
    for t in theta_list:
        t = float(t)
        lo, hi = model.support(family, t)
        x = np.linspace(lo, hi, int(grid_points))
        dens = model.density(family, t, x)
        cdf = model.cdf(family, t, x)
        rows.extend((t, xi, d, c) for xi, d, c in zip(x, dens, cdf))
    return csv_text(FIGURE_HEADER, rows)


def with_seed(cfg, seed):
    return cfg if seed is None else replace(cfg, master_seed=int(seed))


def zero_truth_config(prior, **kw):
    """Config for a theta_star = 0 run: theta_max capped at 1e4, tail diagnostic recorded only."""
    kw.setdefault("theta_max", ZERO_THETA_MAX)
    kw.setdefault("tail_check", "warn")
    return ExperimentConfig(theta_star=0.0, prior=prior, **kw)


def summary_trend(medians):
    """"increasing", "decreasing" or "mixed" for a dict of medians in schedule order."""
    vals = list(medians.values())
    inc = all(b > a for a, b in zip(vals, vals[1:]))
    dec = all(b < a for a, b in zip(vals, vals[1:]))
    return "increasing" if inc else "decreasing" if dec else "mixed"


__all__ = [
    "ExperimentConfig", "run_consistency_experiment", "weak_vs_strong_probe",
    "emit_figure_data", "parse_prior", "parse_family", "median_by_n", "read_csv_columns",
    "zero_truth_config", "neighbourhood", "summary_trend",
]
