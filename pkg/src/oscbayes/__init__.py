"""Numerical laboratory for posterior consistency in oscillating density families."""

from ._errors import (
    DegeneratePosteriorError,
    DomainError,
    NumericalError,
    TailMassError,
    ValidationError,
)
from .harness import ExperimentConfig, emit_figure_data, run_consistency_experiment, weak_vs_strong_probe
from .inference import (
    PosteriorGrid,
    build_posterior,
    kl_profile,
    log_likelihood,
    posterior_mass,
    posterior_predictive,
    predictive_hellinger,
)
from .metrics import (
    cosine_cross_correlation,
    hellinger,
    kl_divergence,
    kolmogorov_distance,
    levy_distance,
    prokhorov_upper_bound,
    total_variation,
)
from .mle import (
    PeakSearchResult,
    dirichlet_peak_search,
    entropy_diagnostic,
    escape_experiment,
    refine_peak,
    restricted_mle,
)
from .model import FamilySpec, SampleSet, cdf, density, sample, sup_density, zero_set
from .oscillations import IntervalSet, check_oscillation_bound, exceedance_intervals, oscillation_count
from .priors import (
    Exponential,
    LogPolyTail,
    ParetoTail,
    PhiTail,
    PriorSpec,
    TruncatedUniform,
    prior_diagnostics,
)
from .quadrature import QuadratureConfig

__version__ = "0.1.0"
