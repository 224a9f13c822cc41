"""Population size estimation from dual-record systems with list dependence.

A dual-record system observes a closed population through two lists,
yielding a 2x2 table whose (missed, missed) cell is unobserved.  This
package estimates the population size when the two lists are causally
dependent, via a bivariate Bernoulli dependence model fitted over two
strata: moment and maximum-likelihood estimators, classical comparators,
parametric/nonparametric bootstrap uncertainty, and a seeded replicate
study harness.
"""

from .boot import bootstrap
from .classical import lincoln_petersen, nour, wolter_model1, wolter_model2
from .core import (
    AllReplicatesFailed,
    AllResamplesFailed,
    BbmParams,
    CellProbabilities,
    ConditionViolated,
    DegenerateDependence,
    DidNotConverge,
    DivisionByZero,
    DomainError,
    DrsTable,
    DualrecError,
    EmptyTable,
    EstimateResult,
    Infeasible,
    InfeasibleN,
    MtbParams,
    NegativeCount,
    OutOfRange,
    StratumPair,
    log_factorial,
    validate_table,
)
from .datasets import (
    CHILDREN_DEATH,
    DATASETS,
    ENCEPHALITIS,
    MEADOW_VOLES,
    load_stratum_pair,
)
from .mle import (
    FitConfig,
    mle_model_i,
    mle_model_ii,
    profile_objective,
)
from .mme import (
    AsymptoticMoments,
    delta_method_mean_variance,
    mme_asymptotic_mean_variance,
    mme_model_i,
    mme_model_ii,
)
from .model import (
    DependenceSign,
    ModelIIParams,
    ModelIParams,
    cell_probabilities,
    loglik_model_i,
    loglik_model_i_grad,
    loglik_model_ii,
    loglik_model_ii_grad,
    marginals_and_covariance,
    p2_from_marginal,
    to_mtb,
)
from .sim import (
    PRESETS,
    DesignPoint,
    EstimatorStudy,
    StudySummary,
    apply_method,
    design_from_preset,
    generate_stratum,
    run_study,
)

__version__ = "0.1.0"

__all__ = [
    "AllReplicatesFailed",
    "AllResamplesFailed",
    "AsymptoticMoments",
    "BbmParams",
    "CHILDREN_DEATH",
    "CellProbabilities",
    "ConditionViolated",
    "DATASETS",
    "DegenerateDependence",
    "DependenceSign",
    "DesignPoint",
    "DidNotConverge",
    "DivisionByZero",
    "DomainError",
    "DrsTable",
    "DualrecError",
    "ENCEPHALITIS",
    "EmptyTable",
    "EstimateResult",
    "EstimatorStudy",
    "FitConfig",
    "Infeasible",
    "InfeasibleN",
    "MEADOW_VOLES",
    "ModelIIParams",
    "ModelIParams",
    "MtbParams",
    "NegativeCount",
    "OutOfRange",
    "PRESETS",
    "StratumPair",
    "StudySummary",
    "apply_method",
    "bootstrap",
    "cell_probabilities",
    "delta_method_mean_variance",
    "design_from_preset",
    "generate_stratum",
    "lincoln_petersen",
    "load_stratum_pair",
    "log_factorial",
    "loglik_model_i",
    "loglik_model_i_grad",
    "loglik_model_ii",
    "loglik_model_ii_grad",
    "marginals_and_covariance",
    "mle_model_i",
    "mle_model_ii",
    "mme_asymptotic_mean_variance",
    "mme_model_i",
    "mme_model_ii",
    "nour",
    "p2_from_marginal",
    "profile_objective",
    "run_study",
    "to_mtb",
    "validate_table",
    "wolter_model1",
    "wolter_model2",
]
