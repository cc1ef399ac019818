"""Max-min dependence coefficients for multivariate extreme value distributions."""

__version__ = "0.1.0"

from .errors import CapacityError, DegenerateInputError, InputError
from .partition import Partition, parse_partition
from .tail_models import (
    BlockIndependent,
    Comonotone,
    Independence,
    Logistic,
    M4,
    TailModel,
    eval_tail,
    extremal_coefficient,
    load_m4_csv,
    make_block_independent,
    model_from_dict,
)
from .coefficients import (
    CoefficientReport,
    bounds_R,
    closed_form_R,
    e_term,
    max_min_R,
    max_min_R_unit,
    pairwise_madogram,
    subcollection_R,
    weighted_indicator,
)
from .simulate import SimulationSpec, frechet_cdf, frechet_quantile, sample
from .estimate import (
    EstimateReport,
    SampleMatrix,
    block_maxima,
    estimate_R,
    m_bar,
    neg_log_returns,
    rank_transform,
    table1_estimates,
)

__all__ = [
    "block_maxima",
    "BlockIndependent",
    "bounds_R",
    "CapacityError",
    "closed_form_R",
    "CoefficientReport",
    "Comonotone",
    "DegenerateInputError",
    "e_term",
    "estimate_R",
    "EstimateReport",
    "eval_tail",
    "extremal_coefficient",
    "frechet_cdf",
    "frechet_quantile",
    "Independence",
    "InputError",
    "load_m4_csv",
    "Logistic",
    "M4",
    "m_bar",
    "make_block_independent",
    "max_min_R",
    "max_min_R_unit",
    "model_from_dict",
    "neg_log_returns",
    "pairwise_madogram",
    "parse_partition",
    "Partition",
    "rank_transform",
    "sample",
    "SampleMatrix",
    "SimulationSpec",
    "subcollection_R",
    "table1_estimates",
    "TailModel",
    "weighted_indicator",
]
