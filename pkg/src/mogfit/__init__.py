"""mogfit: fit mixtures of Gaussians to probability distributions.

The library represents univariate distributions (analytic families,
assessed-CDF splines, empirical samples, Gaussian mixtures, optional
point masses), searches for the power/log transformation that minimizes
relative entropy to a Gaussian, fits mixtures with a generalized EM
algorithm whose input is a distribution rather than a sample, and
selects the mixture size with an accuracy-vs-cost stopping rule.
"""

from .distribution import (
    Analytic,
    DistributionSpec,
    Empirical,
    MixtureSpec,
    Moments,
    SplineCdf,
    atom_mass,
    beta,
    cdf,
    cross_term,
    density,
    entropy,
    expect,
    exponential,
    gaussian,
    lognormal,
    moments,
    relative_entropy,
    spline_from_points,
    triangular,
    uniform,
)
from .emfit import (
    EmConfig,
    FitReport,
    cross_term_mixture,
    em_fit,
    em_step,
    fast_fit_two,
    init_mixture,
)
from .errors import (
    BracketError,
    ComponentDeathError,
    DegeneratePointError,
    DivergenceError,
    DomainError,
    MogfitError,
    NumericalError,
    PipelineStageError,
    QuadratureError,
    UnsupportedInputError,
    ValidationError,
)
from .mixture import GaussianMixture, moment_match_gaussian, sample
from .pipeline import PipelineRequest, PipelineResult, run_pipeline
from .quadrature import QuadratureConfig, default_config, integrate
from .sizesearch import (
    AccuracyMeasure,
    SizeSearchConfig,
    SizeSearchResult,
    accuracy_measure,
    select_size,
    stop_predicate,
)
from .transform import (
    Affine,
    BoxCox,
    PowerSearchConfig,
    ScaledOdds,
    TransformChain,
    TransformedSpec,
    identity_chain,
    optimal_power,
    precondition,
    pushforward,
    round_power,
    transform_gap,
)

__version__ = "0.1.0"
