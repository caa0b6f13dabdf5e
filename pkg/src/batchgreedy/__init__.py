"""k-batch greedy maximization of submodular functions under matroid constraints."""

from .bounds import (
    BoundReport,
    bound_report,
    exponential_bound,
    exponential_limit_bound,
    harmonic_bound,
    nemhauser_batch_bound,
)
from .curvature import (
    CurvatureReport,
    batch_curvature,
    sequence_curvature_bar,
    sequence_curvature_hat,
    task_assignment_curvature,
    task_assignment_curvature_closed_form,
    total_curvature,
)
from .errors import (
    BatchGreedyError,
    DegenerateInstanceError,
    DivisibilityError,
    EnumerationLimitError,
    InstanceFormatError,
    MalformedSubsetError,
    MatroidNotCertifiedError,
    PreconditionError,
)
from .greedy import GreedyTrace, greedy_general, greedy_uniform, run_greedy
from .objectives import (
    Additive,
    Certificate,
    MarginalGain,
    SetFunction,
    Table,
    TaskAssignment,
    certify_monotone_submodular,
    evaluate,
    marginal,
)
from .setsystem import (
    AxiomReport,
    ExplicitMatroid,
    GroundSet,
    Matroid,
    PartitionMatroid,
    Subset,
    UniformMatroid,
    check_matroid_axioms,
    enumerate_k_subsets,
    is_independent,
    rank_upper,
)
from .verify import (
    InequalityCheck,
    OptimalCertificate,
    brute_force_optimum,
    check_proposition_1,
    check_proposition_2,
    order_optimal_lemma1,
    replicate,
    replicate_theorem,
)

__version__ = "0.1.0"

__all__ = [
    "Additive",
    "AxiomReport",
    "batch_curvature",
    "BatchGreedyError",
    "bound_report",
    "BoundReport",
    "brute_force_optimum",
    "Certificate",
    "certify_monotone_submodular",
    "check_matroid_axioms",
    "check_proposition_1",
    "check_proposition_2",
    "CurvatureReport",
    "DegenerateInstanceError",
    "DivisibilityError",
    "enumerate_k_subsets",
    "EnumerationLimitError",
    "evaluate",
    "ExplicitMatroid",
    "exponential_bound",
    "exponential_limit_bound",
    "greedy_general",
    "greedy_uniform",
    "GreedyTrace",
    "GroundSet",
    "harmonic_bound",
    "InequalityCheck",
    "InstanceFormatError",
    "is_independent",
    "MalformedSubsetError",
    "marginal",
    "MarginalGain",
    "Matroid",
    "MatroidNotCertifiedError",
    "nemhauser_batch_bound",
    "OptimalCertificate",
    "order_optimal_lemma1",
    "PartitionMatroid",
    "PreconditionError",
    "rank_upper",
    "replicate",
    "replicate_theorem",
    "run_greedy",
    "sequence_curvature_bar",
    "sequence_curvature_hat",
    "SetFunction",
    "Subset",
    "Table",
    "task_assignment_curvature",
    "task_assignment_curvature_closed_form",
    "TaskAssignment",
    "total_curvature",
    "UniformMatroid",
]
