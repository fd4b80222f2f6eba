"""Signed transforms on subset lattices and the information measures built from them."""

__version__ = "0.1.0"

from .lattice import (  # noqa: E402
    CapacityError,
    LatticeError,
    LatticeFunction,
    SignConvention,
    fast_signed_transform,
    generalized_transform,
    naive_convolve,
)
from .measures import (  # noqa: E402
    JointDistribution,
    delta,
    entropy_lattice,
    interaction_information,
    multi_information,
    symmetric_delta,
)
from .operators import ConventionSet, MobiusOperator, apply, operator, to_matrix  # noqa: E402

__all__ = [
    "CapacityError", "ConventionSet", "JointDistribution", "LatticeError", "LatticeFunction",
    "MobiusOperator", "SignConvention", "apply", "delta", "entropy_lattice", "fast_signed_transform",
    "generalized_transform", "interaction_information", "multi_information", "naive_convolve",
    "operator", "symmetric_delta", "to_matrix",
]
