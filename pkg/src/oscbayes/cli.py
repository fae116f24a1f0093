"""Command-line entry point: ``oscbayes <subcommand> [options]``.

Every subcommand writes CSV (UTF-8, header row, ``\\n`` line endings) to
``--out`` or stdout. Options may also come from a ``--config`` file of
``key = value`` lines; explicit flags win. Exit status is 0 on success,
2 on invalid input and 3 when a numerical routine does not converge.
"""

import argparse
import sys

import numpy as np

from . import harness, inference, metrics, mle, model, oscillations
from ._errors import DomainError, NumericalError, ValidationError

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3


def _floats(text):
    return [float(v) for v in str(text).replace(";", ",").split(",") if v.strip()]


def _family(args):
    return harness.parse_family(args.family)


def cmd_density(args):
    fam = _family(args)
    xs = _floats(args.x)
    vals = model.density(fam, args.theta, np.array(xs))
    return harness.csv_text("x,density", zip(xs, vals))


def cmd_cdf(args):
    fam = _family(args)
    xs = _floats(args.x)
    vals = model.cdf(fam, args.theta, np.array(xs))
    return harness.csv_text("x,cdf", zip(xs, vals))


def cmd_sample(args):
    s = model.sample(_family(args), args.theta, args.n, args.seed)
    return harness.csv_text("index,x", enumerate(s.points))


METRICS = {
    "hellinger": metrics.hellinger,
    "kl": metrics.kl_divergence,
    "tv": metrics.total_variation,
    "levy": lambda a, b: metrics.levy_distance(a, b),
    "kolmogorov": lambda a, b: metrics.kolmogorov_distance(a, b),
    "prokhorov_upper": lambda a, b: metrics.prokhorov_upper_bound(a, b),
}


def cmd_metric(args):
    fam = _family(args)
    names = list(METRICS) if args.metric == "all" else [args.metric]
    a, b = (fam, args.theta), (fam, args.reference)
    return harness.csv_text("metric,theta,reference,value",
                            ((m, args.theta, args.reference, METRICS[m](a, b)) for m in names))


def cmd_oscillations(args):
    g = (_family(args), args.reference)
    reports = oscillations.check_oscillation_bound(_floats(args.thetas), g, args.eps)
    rows = ((r.theta, r.count, r.lp_delta, r.levy, r.tv_epsilon, r.modulus, r.bound,
             r.inequality_holds) for r in reports)
    return harness.csv_text("theta,count,lp_delta,levy,tv_epsilon,modulus,bound,holds", rows)


def cmd_posterior(args):
    fam = _family(args)
    prior = harness.parse_prior(args.prior)
    s = model.sample(fam, args.theta_star, args.n, args.seed)
    grid = inference.build_posterior(prior, fam, s, theta_max=args.theta_max,
                                     tail_check=args.tail_check)
    return grid.to_csv()


def cmd_mle(args):
    rep = mle.escape_experiment(args.theta_star, args.n, _floats(args.M), args.delta, args.seed,
                                scan_bound=args.scan_bound, force=args.force)
    return rep.to_csv()


def cmd_peak_search(args):
    if args.points:
        s = model.SampleSet.from_points(_floats(args.points))
    else:
        s = model.sample(model.FamilySpec.cosine(), args.theta_star, args.n, args.seed)
    r = mle.dirichlet_peak_search(s, args.delta, args.scan_bound)
    return harness.csv_text("theta,min_density,log_lik,found,iterations",
                            [(r.theta, r.min_density, r.log_lik, r.found, r.iterations)])


def cmd_experiment(args):
    if not args.config:
        raise ValidationError("experiment needs --config")
    cfg = harness.ExperimentConfig.load(args.config)
    return harness.run_consistency_experiment(harness.with_seed(cfg, args.seed))


def cmd_figure_data(args):
    return harness.emit_figure_data(_floats(args.thetas), args.grid_points, _family(args))


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="file of key = value defaults for this subcommand")
    common.add_argument("--seed", type=lambda v: int(v, 0), default=None, help="64-bit seed")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=["csv"], default="csv")
    common.add_argument("--family", default="cosine", help="e.g. extended_cosine(lam=1.5, mu=0.4)")

    p = argparse.ArgumentParser(prog="oscbayes", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, **kw):
        sp = sub.add_parser(name, parents=[common], **kw)
        sp.set_defaults(func=func)
        return sp

    sp = add("density", cmd_density)
    sp.add_argument("--theta", type=float, default=0.0)
    sp.add_argument("--x", default="0.5", help="comma-separated points")
    sp = add("cdf", cmd_cdf)
    sp.add_argument("--theta", type=float, default=0.0)
    sp.add_argument("--x", default="0.5")
    sp = add("sample", cmd_sample)
    sp.add_argument("--theta", type=float, default=0.0)
    sp.add_argument("--n", type=int, default=10)
    sp = add("metric", cmd_metric)
    sp.add_argument("--metric", choices=sorted(METRICS) + ["all"], default="all")
    sp.add_argument("--theta", type=float, default=1.0)
    sp.add_argument("--reference", type=float, default=0.0)
    sp = add("oscillations", cmd_oscillations)
    sp.add_argument("--thetas", default="6.283185307179586")
    sp.add_argument("--reference", type=float, default=0.0)
    sp.add_argument("--eps", type=float, default=oscillations.DEFAULT_EPS)
    sp = add("posterior", cmd_posterior)
    sp.add_argument("--prior", default="exponential(rate=1)")
    sp.add_argument("--theta-star", type=float, default=1.0)
    sp.add_argument("--n", type=int, default=10)
    sp.add_argument("--theta-max", type=float, default=60.0)
    sp.add_argument("--tail-check", choices=["raise", "warn", "ignore"], default="raise")
    sp = add("mle", cmd_mle)
    sp.add_argument("--theta-star", type=float, default=0.0)
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--M", default="10,50")
    sp.add_argument("--delta", type=float, default=0.3)
    sp.add_argument("--scan-bound", type=int, default=mle.DEFAULT_SCAN_BOUND)
    sp.add_argument("--force", action="store_true", help="allow n beyond the feasible range")
    sp = add("peak-search", cmd_peak_search)
    sp.add_argument("--points", default="", help="explicit sample; otherwise drawn from --theta-star")
    sp.add_argument("--theta-star", type=float, default=0.0)
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--delta", type=float, default=0.3)
    sp.add_argument("--scan-bound", type=int, default=mle.DEFAULT_SCAN_BOUND)
    add("experiment", cmd_experiment)
    sp = add("figure-data", cmd_figure_data)
    sp.add_argument("--thetas", default=",".join(str(t) for t in harness.FIGURE_THETAS))
    sp.add_argument("--grid-points", type=int, default=512)
    return p


def _apply_config(parser, args, argv):
    """Fill options not given on the command line from the --config file."""
    if not args.config or args.command == "experiment":
        return args
    with open(args.config, encoding="utf-8") as fh:
        kv = harness.read_key_values(fh.read())
    cmdline = vars(parser.parse_args(argv))
    defaults = vars(build_parser().parse_args([args.command]))
    for key, val in kv.items():
        dest = key.replace("-", "_")
        if dest not in cmdline:
            raise ValidationError(f"unknown option {key!r} for {args.command}")
        if cmdline[dest] == defaults[dest]:
            argv = argv + [f"--{dest.replace('_', '-')}", val]
    return parser.parse_args(argv)


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _apply_config(parser, args, argv)
        if args.seed is None and args.command != "experiment":
            args.seed = 0
        text = args.func(args)
    except (ValidationError, DomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"numerical failure: {exc} {exc.diagnostics}", file=sys.stderr)
        return EXIT_NUMERICAL
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
