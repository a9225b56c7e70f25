"""State sets and measurements: POVMs, SRM, Helstrom and USE."""

from src.measurements.discrimination import (
    helstrom_discriminate,
    srm_construct,
    srm_success_probability,
)
from src.measurements.povm import (
    Povm,
    born_table,
    product_basis_povm,
    sample_from_table,
    sample_measurement,
)
from src.measurements.state_sets import (
    INPUT_LABELS,
    STATE_LABELS,
    GramMatrix,
    SymmetricStateSet,
    gram_matrix,
    protocol_generator,
    protocol_state_set,
)
from src.measurements.use import UseOutcome, use_measurement_povm, use_outcome_map

__all__ = [
    "INPUT_LABELS",
    "STATE_LABELS",
    "GramMatrix",
    "Povm",
    "SymmetricStateSet",
    "UseOutcome",
    "born_table",
    "gram_matrix",
    "helstrom_discriminate",
    "product_basis_povm",
    "protocol_generator",
    "protocol_state_set",
    "sample_from_table",
    "sample_measurement",
    "srm_construct",
    "srm_success_probability",
    "use_measurement_povm",
    "use_outcome_map",
]
