"""Naimark / Sz.-Nagy dilations of finite observable families.

Arbitrary Hermitian families are completed, regularized and realized as
commuting projectors on a larger weighted inner-product space; the
commuting model then supports classical sampling, POVM merging and state
estimation.
"""

__version__ = "0.1.0"

from .config import DEFAULT_TOL, Tolerances
from .dilation import (
    DilatedOperator,
    DilationSpace,
    RegularizedPOVM,
    build_dilation,
    complete_to_identity,
    embed_vector,
    extend_observable_affine,
    extend_state,
    prepare,
    regularize,
    resolve_general,
    verify_trace_preservation,
)
from .linalg import GramMetric, eigen_hermitian, hermitian_check, tensor, w_adjoint, w_inner
from .model import build_expanded, build_model_basis, component, compress_G, conditional_observables
from .bridge import (
    JointDistribution,
    QuantumState,
    joint_distribution,
    random_variable_of,
    sample_outcomes,
    unregularize_probabilities,
)
