"""qbandit: exact simulation and numerical verification of bandit oracle channels."""

from . import config
from ._kernels import BACKEND
from .linalg import (
    DimensionCapError,
    basis_state,
    dagger,
    hermitian_eig,
    projector,
    tensor,
    tensor_all,
)
from .distance import (
    fidelity,
    helstrom_success,
    partial_trace,
    purity,
    sqrt_fidelity,
    trace_distance,
)

__all__ = [
    "BACKEND",
    "DimensionCapError",
    "basis_state",
    "config",
    "dagger",
    "fidelity",
    "helstrom_success",
    "hermitian_eig",
    "partial_trace",
    "projector",
    "purity",
    "sqrt_fidelity",
    "tensor",
    "tensor_all",
    "trace_distance",
]

__version__ = "0.1.0"
