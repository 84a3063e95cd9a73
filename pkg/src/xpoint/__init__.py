"""Utility/norm decomposition of actions measured against an environment."""

from .decomposition import (
    CoefficientSet,
    Constraints,
    Dataset,
    Decomposition,
    LinearFit,
    affine_at,
    decompose,
    fit_linear,
    predicted_action,
    solve_coefficients,
)
from .errors import XPointError
from .estimator import XPointRegressor
from .intervention import (
    InterventionReport,
    PlanEntry,
    TargetPlan,
    apply_plan_entry,
    compare,
    plan_target,
)
from .model import (
    AffineFunction,
    Lottery,
    NonlinearChoiceModel,
    argmax_value,
    bisect,
    eval_nonlinear,
    eval_value_sum,
    expected_utility,
    solve_argmax,
    xpoint_affine,
)
from .studies import (
    BUILTIN_CASES,
    CaseStudyParams,
    SyntheticSpec,
    builtin_case,
    generate_synthetic,
    load_case_params,
    load_dataset,
    save_case_params,
    write_dataset,
)

__version__ = "0.1.0"
