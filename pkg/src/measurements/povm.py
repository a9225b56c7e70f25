"""Labeled POVMs, Born probabilities and outcome sampling."""

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterable, Sequence, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from src.exceptions import DimensionMismatchError, InvalidPovmError
from src.linalg.operations import kron
from src.linalg.states import SINGLE_QUBIT_KETS, ComplexMatrix, DensityMatrix, StateVector
from src.utils.logger import get_logger

logger = get_logger(__name__)

StateLike = Union[DensityMatrix, StateVector]

PROBABILITY_ATOL = 1e-8

BASIS_LABELS: Dict[str, Tuple[str, str]] = {"z": ("0", "1"), "x": ("+", "-")}


@dataclass(frozen=True)
class Povm:
    """Finite list of labeled positive effects that sum to the identity.

    Attributes:
        labels: Outcome identifiers, unique
        effects: One PSD matrix per label
    """

    labels: Tuple[str, ...]
    effects: Tuple[ComplexMatrix, ...]
    atol: float = field(default=1e-10, compare=False, repr=False)

    def __post_init__(self) -> None:
        labels = tuple(self.labels)
        effects = []
        for effect in self.effects:
            m = np.array(effect, dtype=complex, copy=True)
            m.flags.writeable = False
            effects.append(m)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "effects", tuple(effects))

        if not effects:
            raise InvalidPovmError("A POVM needs at least one effect")
        if len(labels) != len(effects):
            raise InvalidPovmError(f"{len(labels)} labels for {len(effects)} effects")
        if len(set(labels)) != len(labels):
            raise InvalidPovmError(f"Duplicate outcome labels in {labels}")

        dim = effects[0].shape[0]
        for label, m in zip(labels, effects):
            if m.shape != (dim, dim):
                raise DimensionMismatchError(f"Effect {label!r} has shape {m.shape}")
            if np.max(np.abs(m - m.conj().T)) > self.atol:
                raise InvalidPovmError(f"Effect {label!r} is not Hermitian")
            if np.linalg.eigvalsh((m + m.conj().T) / 2).min() < -self.atol:
                raise InvalidPovmError(f"Effect {label!r} is not positive semidefinite")

        deviation = np.max(np.abs(sum(effects) - np.eye(dim)))
        if deviation > self.atol:
            raise InvalidPovmError(f"Effects do not sum to identity (deviation {deviation:.2e})")

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError as e:
            raise InvalidPovmError(f"Unknown outcome label {label!r}") from e

    def effect(self, label: str) -> ComplexMatrix:
        return self.effects[self.index(label)]

    def probabilities(self, state: StateLike) -> NDArray[np.float64]:
        """Born probabilities ``Tr(Pi_i rho)`` in label order.

        Raises:
            InvalidPovmError: If the probabilities do not sum to one within 1e-8
        """
        rho = state.density_matrix() if isinstance(state, StateVector) else state
        if rho.dim != self.dim:
            raise DimensionMismatchError(f"State of dim {rho.dim} for POVM of dim {self.dim}")

        probs = np.array([np.trace(m @ rho.matrix).real for m in self.effects])
        total = probs.sum()
        if abs(total - 1.0) > PROBABILITY_ATOL:
            raise InvalidPovmError(f"Outcome probabilities sum to {total}")
        probs = np.clip(probs, 0.0, None)
        return probs / probs.sum()

    def tensor(self, other: "Povm", separator: str = "") -> "Povm":
        """Product measurement, labels concatenated in subsystem order."""
        labels = [f"{a}{separator}{b}" for a, b in product(self.labels, other.labels)]
        effects = [kron(a, b) for a, b in product(self.effects, other.effects)]
        return Povm(tuple(labels), tuple(effects))

    def relabeled(self, mapping: Dict[str, str]) -> "Povm":
        return Povm(tuple(mapping.get(label, label) for label in self.labels), self.effects)

    @classmethod
    def from_vectors(cls, labels: Iterable[str], vectors: Iterable[ArrayLike]) -> "Povm":
        """Projective measurement onto an orthonormal basis."""
        projectors = []
        for v in vectors:
            v = np.asarray(v, dtype=complex).reshape(-1)
            projectors.append(np.outer(v, v.conj()))
        return cls(tuple(labels), tuple(projectors))


def product_basis_povm(bases: str) -> Povm:
    """Projective measurement of each qubit in the Z or X basis.

    Args:
        bases: One character per qubit, ``"z"`` or ``"x"``; ``"zz"`` yields
            outcomes ``00 01 10 11``, ``"xx"`` yields ``++ +- -+ --``

    Returns:
        Povm over ``2**len(bases)`` dimensions
    """
    if not bases or any(b not in BASIS_LABELS for b in bases):
        raise InvalidPovmError(f"Unknown measurement bases {bases!r}")
    labels, vectors = [], []
    for outcome in product(*(BASIS_LABELS[b] for b in bases)):
        label = "".join(outcome)
        labels.append(label)
        vector = np.array([1.0 + 0j])
        for ch in label:
            vector = np.kron(vector, SINGLE_QUBIT_KETS[ch])
        vectors.append(vector)
    return Povm.from_vectors(labels, vectors)


def born_table(states: Sequence[StateLike], povm: Povm) -> NDArray[np.float64]:
    """Outcome probabilities for several states, one row per state."""
    return np.vstack([povm.probabilities(s) for s in states])


def sample_measurement(state: StateLike, povm: Povm, rng: np.random.Generator) -> str:
    """Draw one outcome label with probability ``Tr(Pi_i rho)``.

    Args:
        state: State being measured
        povm: Measurement
        rng: Exclusive handle to the caller's random stream

    Returns:
        The sampled outcome label
    """
    probs = povm.probabilities(state)
    return povm.labels[int(rng.choice(len(probs), p=probs))]


def sample_from_table(
    table: NDArray[np.float64], rows: NDArray[np.int_], rng: np.random.Generator
) -> NDArray[np.int_]:
    """Vectorized inverse-CDF sampling, one outcome per entry of ``rows``.

    Args:
        table: Probability table with one row per input and one column per outcome
        rows: Input index for every draw
        rng: Random stream

    Returns:
        Outcome column index for every draw
    """
    table = np.asarray(table, dtype=float)
    sums = table.sum(axis=1)
    if np.any(np.abs(sums - 1.0) > PROBABILITY_ATOL):
        raise InvalidPovmError(f"Probability rows do not sum to one: {sums}")
    cdf = np.cumsum(table, axis=1)
    u = rng.random(len(rows))
    picks = (u[:, None] >= cdf[rows]).sum(axis=1)
    return np.minimum(picks, table.shape[1] - 1)
