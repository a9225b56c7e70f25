"""Generic semi-random OT framework with all measurements deferred to the end.

Subsystems are ordered ``(B, M, A)``: Bob's private system, the message
system passed back and forth, and Alice's private system. Alice's round
unitaries act on ``M (x) A``, Bob's on ``B (x) M``, and Bob's final POVM on
``B (x) M``. Its outcomes use star labels: ``"j*"`` means ``c = 0`` and
``x_0 = j``, ``"*j"`` means ``c = 1`` and ``x_1 = j``.
"""

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Tuple

import numpy as np

from src.exceptions import DimensionMismatchError, InvalidStateError
from src.linalg.operations import is_unitary, kron, kron_all, partial_trace
from src.linalg.states import ComplexMatrix, DensityMatrix, StateVector, ket
from src.measurements.povm import Povm
from src.measurements.state_sets import INPUT_LABELS, protocol_generator
from src.measurements.use import use_measurement_povm, use_outcome_map
from src.utils.logger import get_logger

logger = get_logger(__name__)

STAR_LABELS: Tuple[str, ...] = ("0*", "1*", "*0", "*1")
CORRECTNESS_ATOL = 1e-9


def star_class(label: str) -> int:
    """The bit index ``c`` revealed by a star-labeled outcome."""
    return 0 if label.endswith("*") else 1


def star_value(label: str) -> int:
    return int(label.replace("*", ""))


@dataclass(frozen=True)
class GenericFramework:
    """A protocol in the generic framework.

    Attributes:
        initial_state: Bob's starting state on ``B (x) M``
        dims: ``(d_B, d_M, d_A)``
        alice_unitaries: Input bits to the per-round unitaries on ``M (x) A``
        bob_unitaries: Per-round unitaries on ``B (x) M``
        final_povm: Bob's final measurement on ``B (x) M`` with star labels
        name: Short identifier used in reports
    """

    initial_state: DensityMatrix
    dims: Tuple[int, int, int]
    alice_unitaries: Dict[str, Tuple[ComplexMatrix, ...]]
    bob_unitaries: Tuple[ComplexMatrix, ...]
    final_povm: Povm
    name: str = "framework"
    _outputs: Dict[str, DensityMatrix] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        d_b, d_m, d_a = self.dims
        if self.initial_state.dim != d_b * d_m:
            raise DimensionMismatchError(
                f"Initial state has dim {self.initial_state.dim}, expected {d_b * d_m}"
            )
        if set(self.alice_unitaries) != set(INPUT_LABELS):
            raise InvalidStateError(f"Alice needs unitaries for inputs {INPUT_LABELS}")
        if self.final_povm.dim != d_b * d_m:
            raise DimensionMismatchError("Final POVM must act on B (x) M")
        if set(self.final_povm.labels) != set(STAR_LABELS):
            raise InvalidStateError(f"Final POVM labels must be {STAR_LABELS}")

        for bits, unitaries in self.alice_unitaries.items():
            if len(unitaries) != self.rounds:
                raise InvalidStateError(f"Input {bits} has {len(unitaries)} rounds, expected {self.rounds}")
            for u in unitaries:
                if u.shape != (d_m * d_a, d_m * d_a) or not is_unitary(u):
                    raise InvalidStateError(f"Alice's unitary for {bits} is not a unitary on M (x) A")
        for v in self.bob_unitaries:
            if v.shape != (d_b * d_m, d_b * d_m) or not is_unitary(v):
                raise InvalidStateError("Bob's round unitary is not a unitary on B (x) M")

    @property
    def rounds(self) -> int:
        return len(self.bob_unitaries)

    def output_state(self, bits: str) -> DensityMatrix:
        """Cached ``sigma^{x0x1}`` on ``B (x) M``."""
        if bits not in self._outputs:
            self._outputs[bits] = run_framework(self, bits)
        return self._outputs[bits]

    def correctness_deviation(self) -> float:
        """Largest deviation of ``Tr(Pi^z sigma^x)`` from the honest-correctness table."""
        worst = 0.0
        for bits, label in product(INPUT_LABELS, STAR_LABELS):
            c = star_class(label)
            expected = 0.5 if star_value(label) == int(bits[c]) else 0.0
            observed = self.output_state(bits).expectation(self.final_povm.effect(label))
            worst = max(worst, abs(observed - expected))
        return worst

    @property
    def is_correct(self) -> bool:
        return self.correctness_deviation() <= CORRECTNESS_ATOL


def _joint_state(fw: GenericFramework, bits: str) -> ComplexMatrix:
    """Final state on ``B (x) M (x) A`` before anything is traced out."""
    if bits not in fw.alice_unitaries:
        raise InvalidStateError(f"Unknown input {bits!r}")
    d_b, _, d_a = fw.dims
    state = kron(fw.initial_state.matrix, ket_column(d_a, 0) @ ket_column(d_a, 0).T)
    for u, v in zip(fw.alice_unitaries[bits], fw.bob_unitaries):
        step = kron(v, np.eye(d_a)) @ kron(np.eye(d_b), u)
        state = step @ state @ step.conj().T
    return (state + state.conj().T) / 2


def run_framework(fw: GenericFramework, bits: str) -> DensityMatrix:
    """Bob's output ``sigma^{x0x1} = Tr_A(V_n U_n ... V_1 U_1 (rho_BM (x) |0><0|_A))``.

    Args:
        fw: Framework description
        bits: Alice's input, one of ``00 01 11 10``

    Returns:
        Bob's state on ``B (x) M``
    """
    d_b, d_m, d_a = fw.dims
    joint = DensityMatrix(_joint_state(fw, bits), dims=(d_b, d_m, d_a))
    sigma = partial_trace(joint, [d_b, d_m, d_a], keep=[0, 1])
    logger.debug(f"{fw.name}: output for {bits} has purity {sigma.purity():.6f}")
    return sigma


def star_labeled_use_povm(orientation: str = "zx") -> Povm:
    """USE measurement relabeled with star labels."""
    mapping = {label: o.star_label for label, o in use_outcome_map(orientation).items()}
    return use_measurement_povm(orientation).relabeled(mapping)


def example_framework() -> GenericFramework:
    """The USE protocol written in framework form.

    ``M`` holds the two qubits, ``B`` and ``A`` are trivial, Alice applies
    ``1, U, U^2, U^3`` with ``U = R (x) R`` and Bob does nothing until his
    final USE measurement.
    """
    u = protocol_generator()
    alice = {bits: (np.linalg.matrix_power(u, k),) for k, bits in enumerate(INPUT_LABELS)}
    return GenericFramework(
        initial_state=DensityMatrix.from_label("00"),
        dims=(1, 4, 1),
        alice_unitaries=alice,
        bob_unitaries=(np.eye(4, dtype=complex),),
        final_povm=star_labeled_use_povm(),
        name="use-example",
    )


def degenerate_framework() -> GenericFramework:
    """Alice does nothing, so every input leaves Bob with ``|00>``."""
    identity = np.eye(4, dtype=complex)
    return GenericFramework(
        initial_state=DensityMatrix.from_label("00"),
        dims=(1, 4, 1),
        alice_unitaries={bits: (identity,) for bits in INPUT_LABELS},
        bob_unitaries=(identity,),
        final_povm=star_labeled_use_povm(),
        name="degenerate",
    )


def _xor_bits(a: str, b: str) -> str:
    return "".join(str(int(x) ^ int(y)) for x, y in zip(a, b))


def rot_recast_framework() -> GenericFramework:
    """Semi-random OT built from random OT plus masking, recast without measurements.

    Alice's random pair ``x`` lives in a four-level register ``C`` (her
    system ``A``) prepared in uniform superposition. Controlled on ``C`` she
    encodes ``x`` into the two message qubits ``Q`` and writes
    ``z XOR x`` into a four-level register ``D`` that travels to Bob, so
    ``M = Q (x) D``. Bob's final measurement combines USE on ``Q`` with a
    computational-basis readout of ``D`` into ``(c, y' = d_c XOR y)``.
    Alice's input ``z`` selects the masking unitary ``U^z_CD``.
    """
    d_q, d_d, d_c = 4, 4, 4
    pairs = ["00", "01", "10", "11"]
    pair_index = {p: i for i, p in enumerate(pairs)}
    u = protocol_generator()
    encoders = {bits: np.linalg.matrix_power(u, k) for k, bits in enumerate(INPUT_LABELS)}

    hadamard = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    prepare_c = kron_all(np.eye(d_q * d_d), hadamard, hadamard)

    # Subsystem order inside M (x) A is (Q, D, C)
    encode = np.zeros((64, 64), dtype=complex)
    for x in pairs:
        proj_c = np.zeros((d_c, d_c), dtype=complex)
        proj_c[pair_index[x], pair_index[x]] = 1.0
        encode += kron_all(encoders[x], np.eye(d_d), proj_c)

    alice: Dict[str, Tuple[ComplexMatrix, ...]] = {}
    for z in INPUT_LABELS:
        mask = np.zeros((64, 64), dtype=complex)
        for x, d_in in product(pairs, pairs):
            d_out = _xor_bits(d_in, _xor_bits(z, x))
            ket_in = kron_all(np.eye(d_q), ket_column(d_d, pair_index[d_in]), ket_column(d_c, pair_index[x]))
            ket_out = kron_all(np.eye(d_q), ket_column(d_d, pair_index[d_out]), ket_column(d_c, pair_index[x]))
            mask += ket_out @ ket_in.conj().T
        alice[z] = (mask @ encode @ prepare_c,)

    use = use_measurement_povm()
    meanings = use_outcome_map()
    effects = {label: np.zeros((16, 16), dtype=complex) for label in STAR_LABELS}
    for use_label, readout in product(use.labels, pairs):
        outcome = meanings[use_label]
        y_prime = int(readout[outcome.c]) ^ outcome.y
        label = f"{y_prime}*" if outcome.c == 0 else f"*{y_prime}"
        readout_proj = np.zeros((d_d, d_d), dtype=complex)
        readout_proj[pair_index[readout], pair_index[readout]] = 1.0
        effects[label] += kron(use.effect(use_label), readout_proj)

    initial = StateVector(kron(ket("00"), ket_column(d_d, 0).reshape(-1)), dims=(4, 4))
    return GenericFramework(
        initial_state=DensityMatrix(initial.density_matrix().matrix, dims=(1, 16)),
        dims=(1, d_q * d_d, d_c),
        alice_unitaries=alice,
        bob_unitaries=(np.eye(16, dtype=complex),),
        final_povm=Povm(STAR_LABELS, tuple(effects[label] for label in STAR_LABELS)),
        name="rot-recast",
    )


def ket_column(dim: int, index: int) -> ComplexMatrix:
    """Basis ket ``|index>`` of a ``dim``-level system as a column."""
    column = np.zeros((dim, 1), dtype=complex)
    column[index, 0] = 1.0
    return column


def measured_register_state(fw: GenericFramework, bits: str) -> DensityMatrix:
    """Bob's state when Alice measures her system in its computational basis.

    Summing the post-measurement branches must reproduce ``run_framework``
    because Bob cannot tell whether Alice measured.
    """
    d_b, d_m, d_a = fw.dims
    state = _joint_state(fw, bits)
    bob = np.zeros((d_b * d_m, d_b * d_m), dtype=complex)
    for k in range(d_a):
        branch = kron(np.eye(d_b * d_m), ket_column(d_a, k))
        bob += branch.conj().T @ state @ branch
    return DensityMatrix((bob + bob.conj().T) / 2, dims=(d_b, d_m))
