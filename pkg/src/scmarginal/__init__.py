"""Exact merging of Boolean marginal causal models and counterfactual bounds."""
from .analysis import (
    BoundsReport,
    Q2x2,
    and_model_reference,
    bounds_report,
    lemma1_interval,
    prop1_witness,
    query_bounds,
)
from .errors import (
    CounterfactuallyInfeasible,
    DegenerateCause,
    EmptyPolytope,
    LambdaOutOfRange,
    SCMarginalError,
    StatisticallyInconsistent,
    ThetaOutOfRange,
    UnboundedPolytope,
    UnidentifiableQuery,
)
from .estimators import ConfoundedMerger, MarginalMerger
from .merge import MergeProblem, build_constraint_matrices, build_merge_problem, statistical_merge_check
from .scm import (
    BinaryResponse,
    MarginalFamily,
    MarginalObservation,
    UnaryResponse,
    counterfactual_influence,
    enumerate_binary,
    enumerate_unary,
    family_from_observation,
    markov_kernel,
    response_vector,
)

__version__ = "0.1.0"
