"""Quasi-Newton updates that stay positive definite without a curvature condition.

The core operation softens the secant constraint into a penalty, which keeps
the inverse-Hessian estimate positive definite for every step/gradient-change
pair and every penalty weight.  The package bundles the update formulas and
their eigenvalue-control policies (:mod:`softqn.updates`), a brute-force
verification oracle for the underlying matrix optimization problem
(:mod:`softqn.oracle`), an iteration loop with a noise-tolerant backtracking
line search (:mod:`softqn.solver`), analytic test problems and a LIBSVM reader
(:mod:`softqn.problems`), and a deterministic Monte Carlo benchmark harness
(:mod:`softqn.bench`, :mod:`softqn.experiments`, CLI ``softqn-bench``).
"""

from .bench import (
    AlignedTrace,
    MetricSpec,
    SummaryStats,
    align_trace,
    emit_csv,
    metric_log10_grad,
    metric_normalized_subopt,
    monte_carlo,
    summarize,
)
from .noise import (
    GaussianNoise,
    MinibatchSampling,
    NoisyOracle,
    NoNoise,
    SphereNoise,
    UniformNoise,
    derive_seed,
    make_noisy,
)
from .oracle import (
    NoConvergenceError,
    OracleResult,
    PenaltyObjectiveSpec,
    minimize_penalty_objective,
    penalty_objective,
    stationarity_residual,
)
from .problems import (
    DatasetFormatError,
    LogisticDataset,
    Problem,
    UnknownProblemError,
    cutest_like,
    gen_random_qp,
    load_libsvm,
    logistic_problem,
    minibatch_gradient,
    toy_2d,
)
from .solver import (
    Budget,
    DiminishingStep,
    ExactNewton,
    FixedStep,
    NoisyArmijo,
    SaddleFreeNewton,
    Sgd,
    SoftQn,
    SpBfgs,
    StochasticBfgs,
    TrialRecord,
    compute_direction,
    line_search_noisy,
    run,
    saddle_free_abs,
)
from .updates import (
    ConstantAlpha,
    ConstantBeta,
    CurvatureError,
    CurvaturePair,
    CurvatureRelaxedBeta,
    EigenBounds,
    PdThresholdError,
    SingularCoefficientError,
    SoftQnScratch,
    SpBfgsCoefficients,
    SpectrumBoundedAlpha,
    StepNormBeta,
    UpdateConsistencyError,
    bfgs_update,
    biased_direction,
    is_positive_definite,
    lambda_max_upper_bound,
    soft_qn_alpha_bound,
    soft_qn_gamma,
    soft_qn_update,
    sp_bfgs_coefficients,
    sp_bfgs_update,
)

__version__ = "0.1.0"

__all__ = [
    "AlignedTrace",
    "Budget",
    "ConstantAlpha",
    "ConstantBeta",
    "CurvatureError",
    "CurvaturePair",
    "CurvatureRelaxedBeta",
    "DatasetFormatError",
    "DiminishingStep",
    "EigenBounds",
    "ExactNewton",
    "FixedStep",
    "GaussianNoise",
    "LogisticDataset",
    "MetricSpec",
    "MinibatchSampling",
    "NoConvergenceError",
    "NoNoise",
    "NoisyArmijo",
    "NoisyOracle",
    "OracleResult",
    "PdThresholdError",
    "PenaltyObjectiveSpec",
    "Problem",
    "SaddleFreeNewton",
    "Sgd",
    "SingularCoefficientError",
    "SoftQn",
    "SoftQnScratch",
    "SpBfgs",
    "SpBfgsCoefficients",
    "SpectrumBoundedAlpha",
    "StepNormBeta",
    "StochasticBfgs",
    "SummaryStats",
    "TrialRecord",
    "UniformNoise",
    "UnknownProblemError",
    "UpdateConsistencyError",
    "align_trace",
    "bfgs_update",
    "biased_direction",
    "compute_direction",
    "cutest_like",
    "derive_seed",
    "emit_csv",
    "gen_random_qp",
    "is_positive_definite",
    "lambda_max_upper_bound",
    "line_search_noisy",
    "load_libsvm",
    "logistic_problem",
    "make_noisy",
    "metric_log10_grad",
    "metric_normalized_subopt",
    "minibatch_gradient",
    "minimize_penalty_objective",
    "monte_carlo",
    "penalty_objective",
    "run",
    "saddle_free_abs",
    "soft_qn_alpha_bound",
    "soft_qn_gamma",
    "soft_qn_update",
    "sp_bfgs_coefficients",
    "sp_bfgs_update",
    "stationarity_residual",
    "summarize",
    "toy_2d",
]
