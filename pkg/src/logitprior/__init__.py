"""Priors for logistic-regression coefficients that induce a chosen prior on the success probability."""

from .distributions import BetaShape, LogisticParams, NormalParams
from .eta_moments import EtaMoments, eta_mean_var, eta_mean_var_analytic, eta_moment
from .exceptions import DomainError, InversionError, PreconditionError
from .genfunc import (
    TabulatedDistribution,
    genfunc_curves,
    half_logistic_laplace,
    half_to_full_logistic,
    invert_symmetric_cf,
    logistic_cf_modulus,
    logistic_mgf,
    mgf_derivative_numeric,
    root_cf,
    root_logistic_table,
    root_mgf,
    sample_root_logistic,
)
from .induced import (
    DensityFn,
    PushforwardResult,
    PushforwardSpec,
    induce_beta_density,
    induce_theta_density,
    pushforward_sample,
)
from .inference import (
    Chains,
    Dataset,
    PosteriorSummary,
    grid_posterior_means,
    logistic_mle,
    mh_sample,
    split_rhat,
    standardize,
    summarize,
)
from .occupancy import (
    OccupancyData,
    conditional_presence_prob,
    fit_occupancy,
    induced_occupancy_priors,
    simulate_occupancy,
)
from .priors import (
    PriorSpec,
    beta_matched_priors,
    beta_shapes_from_mean_cv,
    logistic_matched_priors,
    vague_priors,
    weighted_priors,
)
from .simulation import ScenarioSpec, SimulationReport, generate_scenario, mse, run_study, scenario1, scenario23

__version__ = "0.1.0"
