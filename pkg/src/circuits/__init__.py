"""Gate-level preparation of the cheating state and local-unitary equivalence."""

from src.circuits.gates import (
    LocalUnitaryParams,
    ccp_gate,
    circuit_unitary,
    cp_gate,
    hadamard,
    local_unitary,
)
from src.circuits.preparation import (
    CircuitParams,
    LuEquivalence,
    PreparationReport,
    input_state,
    local_overlap,
    lu_equivalence,
    prepare_sigma,
    reduced_spectra,
    sigma_target,
    verify_preparation,
)

__all__ = [
    "CircuitParams",
    "LocalUnitaryParams",
    "LuEquivalence",
    "PreparationReport",
    "ccp_gate",
    "circuit_unitary",
    "cp_gate",
    "hadamard",
    "input_state",
    "local_overlap",
    "local_unitary",
    "lu_equivalence",
    "prepare_sigma",
    "reduced_spectra",
    "sigma_target",
    "verify_preparation",
]
