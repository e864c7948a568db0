"""Separability tests and explicit product-state decompositions for three-qubit X-states."""

from .core import (
    DEFAULT_TOL,
    ProductVector,
    SymmetryOp,
    System,
    WeightedDecomposition,
    XState,
    delta,
    embed,
    invariants,
    is_positive,
    is_ppt,
    local_symmetry,
    new_xstate,
    partial_transpose,
    phase_difference,
    rank,
    xpart,
)
from .criteria import Verdict, a_rho, classify
from .decompose import (
    check_rank6_separability,
    decompose_common_magnitude,
    decompose_eps_mixture,
    decompose_rank4,
    decompose_rank5,
    decompose_rank6,
    gamma,
)
from .length import length_rank6, optimal_decompose_rank6

__version__ = "0.1.0"
