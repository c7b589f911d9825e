"""Exact tools for semialgebraic Ramsey-type questions on point sequences:
orientation determinants, difference-quotient maps, homogeneity checkers,
the stepping-up construction and homogeneous-subsequence searches."""

__version__ = "0.1.0"

from .kernel import (
    ArityError,
    D_j,
    D_vec,
    DimensionError,
    ExactScalar,
    GeometryError,
    IndexRangeError,
    Point,
    PointSequence,
    Sign,
    det_exact,
    leq_one,
    orientation,
    point,
    project,
    scalar,
)
from .sigma import SigmaResult, identify_limit, sdelta, sdelta2, sdelta_ratio
from .predicates import (
    Coloring,
    OrderPredicate,
    Predicate,
    PredicateEvaluationError,
    RobustnessCheck,
    certify_order_inducing,
    certify_robust,
    constant_predicate,
    first_coord_order,
    induced_coloring,
    orientation_predicate,
    robust_radius,
    second_difference_predicate,
    step_up_predicate,
)
from .homogeneity import (
    HomogeneityVerdict,
    Status,
    is_k_monotone,
    is_k_order_type_homogeneous,
    is_markov_system,
    is_order_type_homogeneous,
    is_phi_homogeneous,
    is_super_monotone,
    is_super_order_type_homogeneous,
    monotonicity_witness,
)
from .construct import (
    CertificationError,
    Construction,
    EpsilonCertificate,
    GuardError,
    Limits,
    PreconditionError,
    binary_vectors,
    build_P,
    certify_epsilon,
    certify_general_position,
    certify_super_general_position,
    choose_epsilon,
    construct_P,
    delta_index,
    perturb_general_position,
    step_up_sequence,
    stepping_up_coloring,
    tower,
)
from .search import (
    SearchResult,
    exists_homogeneous_subsequence,
    exists_super_ot_homogeneous_subsequence,
    homogeneous_subset_search,
    longest_monotone_subsequence,
)
