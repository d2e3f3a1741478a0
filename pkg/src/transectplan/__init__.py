"""Maximum-entropy observation-path planning for multi-robot transect
surveys of Gaussian-process fields."""

from .bench import ExperimentSpec, run_benchmark, write_csv
from .bounds import (
    BoundParams,
    BoundReport,
    ContractionCheck,
    bound_params,
    bound_report,
    check_covariance_contraction,
    stage_mi_bound,
    suboptimality_bound,
    team_mi_bound,
    variance_reduction_bound,
    verify_performance_bounds,
)
from .errors import (
    AnisotropyViolated,
    BudgetExceeded,
    ColumnOverflow,
    ConditionViolated,
    EmptyUnobservedSet,
    FactorizationFailure,
    GridTooLarge,
    InvalidArity,
    MismatchedInstances,
    ParseError,
    SingularCovariance,
    TransectPlanError,
    ZeroMeanField,
)
from .fieldio import FieldBundle, read_field, sha256_of, sidecar_path, write_field
from .gp import (
    Hyperparams,
    cond_mutual_info,
    conditional_entropy,
    cov_matrix,
    covariance,
    cross_cov,
    gaussian_entropy,
    posterior_cov,
    posterior_mean,
    sample_prior_field,
)
from .metrics import EvalRecord, evaluate, metric_diff, relative_error, unobserved_entropy
from .planners import (
    MarkovPolicy,
    PlanResult,
    exact_value_given_history,
    path_entropy,
    plan_exact,
    plan_greedy_entropy,
    plan_greedy_mi,
    plan_markov,
    rollout,
)
from .transect import (
    Location,
    ObservationPath,
    RobotConfig,
    TransectGrid,
    config_locations,
    enumerate_configs,
    robot_tracks,
    transition,
)

__version__ = "0.1.0"

__all__ = [
    "AnisotropyViolated",
    "BoundParams",
    "BoundReport",
    "BudgetExceeded",
    "ColumnOverflow",
    "ConditionViolated",
    "ContractionCheck",
    "EmptyUnobservedSet",
    "EvalRecord",
    "ExperimentSpec",
    "FactorizationFailure",
    "FieldBundle",
    "GridTooLarge",
    "Hyperparams",
    "InvalidArity",
    "Location",
    "MarkovPolicy",
    "MismatchedInstances",
    "ObservationPath",
    "ParseError",
    "PlanResult",
    "RobotConfig",
    "SingularCovariance",
    "TransectGrid",
    "TransectPlanError",
    "ZeroMeanField",
    "bound_params",
    "bound_report",
    "check_covariance_contraction",
    "cond_mutual_info",
    "conditional_entropy",
    "config_locations",
    "cov_matrix",
    "covariance",
    "cross_cov",
    "enumerate_configs",
    "evaluate",
    "exact_value_given_history",
    "gaussian_entropy",
    "metric_diff",
    "path_entropy",
    "plan_exact",
    "plan_greedy_entropy",
    "plan_greedy_mi",
    "plan_markov",
    "posterior_cov",
    "posterior_mean",
    "read_field",
    "relative_error",
    "robot_tracks",
    "rollout",
    "run_benchmark",
    "sample_prior_field",
    "sha256_of",
    "sidecar_path",
    "stage_mi_bound",
    "suboptimality_bound",
    "team_mi_bound",
    "transition",
    "unobserved_entropy",
    "variance_reduction_bound",
    "verify_performance_bounds",
    "write_csv",
    "write_field",
]
