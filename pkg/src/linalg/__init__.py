"""Complex linear algebra over small Hilbert spaces."""

from src.linalg.operations import (
    dagger,
    eig_hermitian,
    fidelity,
    is_unitary,
    kron,
    kron_all,
    matrix_sqrt_psd,
    maximal_overlap_purifications,
    partial_trace,
    partial_trace_operator,
    trace_distance,
)
from src.linalg.states import DensityMatrix, StateVector, ket, label_projector, projector

__all__ = [
    "DensityMatrix",
    "StateVector",
    "dagger",
    "eig_hermitian",
    "fidelity",
    "is_unitary",
    "ket",
    "kron",
    "kron_all",
    "label_projector",
    "matrix_sqrt_psd",
    "maximal_overlap_purifications",
    "partial_trace",
    "partial_trace_operator",
    "projector",
    "trace_distance",
]
