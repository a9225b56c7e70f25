"""Symmetric four-state sets and their Gram matrices."""

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from src.exceptions import InvalidStateError, NotHermitianError
from src.linalg.operations import kron
from src.linalg.states import SINGLE_QUBIT_KETS, ComplexMatrix, DensityMatrix, StateVector, ket

SYMMETRY_ATOL = 1e-9

# Input bits in generator order: U^k |00> encodes INPUT_LABELS[k]
INPUT_LABELS: Tuple[str, ...] = ("00", "01", "11", "10")
STATE_LABELS: Tuple[str, ...] = ("00", "++", "11", "--")


def rotation_r() -> ComplexMatrix:
    """Single-qubit generator ``R = |+><0| - |-><1|``."""
    plus, minus = SINGLE_QUBIT_KETS["+"], SINGLE_QUBIT_KETS["-"]
    zero, one = SINGLE_QUBIT_KETS["0"], SINGLE_QUBIT_KETS["1"]
    return np.outer(plus, zero.conj()) - np.outer(minus, one.conj())


def protocol_generator() -> ComplexMatrix:
    """Two-qubit generator ``R (x) R``; its fourth power is the identity."""
    r = rotation_r()
    return kron(r, r)


@dataclass(frozen=True)
class GramMatrix:
    """Gram matrix of a symmetric four-state set.

    The pattern is circulant: row 0 reads ``(1, f, G, f*)``.

    Attributes:
        f: Adjacent overlap ``<psi_0|psi_1>``
        G: Opposite overlap ``<psi_0|psi_2>``, real
        matrix: Full 4x4 matrix
    """

    f: complex
    G: float
    matrix: ComplexMatrix = field(repr=False)

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex, copy=True)
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        if np.max(np.abs(m - m.conj().T)) > SYMMETRY_ATOL:
            raise NotHermitianError("Gram matrix is not Hermitian")
        if np.max(np.abs(np.diag(m) - 1.0)) > SYMMETRY_ATOL:
            raise InvalidStateError("Gram matrix diagonal must be all ones")

    @classmethod
    def from_parameters(cls, f: complex, G: float) -> "GramMatrix":
        return cls(f=complex(f), G=float(G), matrix=circulant_gram(f, G))


def circulant_gram(f: complex, G: float) -> ComplexMatrix:
    """The 4x4 Gram pattern with adjacent overlap ``f`` and opposite overlap ``G``."""
    fc = np.conj(f)
    return np.array(
        [
            [1, f, G, fc],
            [fc, 1, f, G],
            [G, fc, 1, f],
            [f, G, fc, 1],
        ],
        dtype=complex,
    )


@dataclass(frozen=True)
class SymmetricStateSet:
    """Four pure states generated cyclically by a unitary ``U`` with ``U^4 = 1``.

    Attributes:
        states: ``(psi_0, U psi_0, U^2 psi_0, U^3 psi_0)``
        generator: The unitary ``U``
        labels: Input bits encoded by each state
        case_tag: ``"case1"`` when opposite states are orthogonal,
            ``"case2"`` when adjacent ones are, ``"general"`` otherwise
    """

    states: Tuple[StateVector, ...]
    generator: ComplexMatrix = field(repr=False)
    labels: Tuple[str, ...] = INPUT_LABELS
    case_tag: str = "general"

    def __post_init__(self) -> None:
        if len(self.states) != 4:
            raise InvalidStateError(f"A symmetric set has four states, got {len(self.states)}")
        u = np.array(self.generator, dtype=complex, copy=True)
        u.flags.writeable = False
        object.__setattr__(self, "generator", u)

        dim = self.states[0].dim
        if np.max(np.abs(np.linalg.matrix_power(u, 4) - np.eye(dim))) > SYMMETRY_ATOL:
            raise InvalidStateError("Generator does not satisfy U^4 = 1")
        for k in range(4):
            image = u @ self.states[k].amplitudes
            if np.max(np.abs(image - self.states[(k + 1) % 4].amplitudes)) > SYMMETRY_ATOL:
                raise InvalidStateError(f"Generator does not map state {k} to state {k + 1}")

    def density_matrices(self) -> Tuple[DensityMatrix, ...]:
        return tuple(s.density_matrix() for s in self.states)

    def state_for(self, bits: str) -> StateVector:
        return self.states[self.labels.index(bits)]

    @classmethod
    def generate(
        cls, seed_state: StateVector, generator: ComplexMatrix, labels: Tuple[str, ...] = INPUT_LABELS
    ) -> "SymmetricStateSet":
        """Build the set by applying the generator repeatedly to ``seed_state``."""
        states = [seed_state]
        for _ in range(3):
            states.append(states[-1].evolve(generator))
        gram = np.array([[a.inner(b) for b in states] for a in states])
        return cls(tuple(states), generator, labels, _case_tag(gram[0, 1], gram[0, 2]))


def _case_tag(f: complex, G: complex) -> str:
    if abs(G) < SYMMETRY_ATOL:
        return "case1"
    if abs(f) < SYMMETRY_ATOL:
        return "case2"
    return "general"


def protocol_state_set() -> SymmetricStateSet:
    """The encoding ``00 -> |00>, 01 -> |++>, 11 -> |11>, 10 -> |-->``."""
    state_set = SymmetricStateSet.generate(StateVector(ket("00")), protocol_generator())
    for state, label in zip(state_set.states, STATE_LABELS):
        if abs(abs(state.inner(StateVector(ket(label)))) - 1.0) > SYMMETRY_ATOL:
            raise InvalidStateError(f"Generated state does not match |{label}>")
    return state_set


def gram_matrix(state_set: SymmetricStateSet) -> GramMatrix:
    """Extract ``f`` and ``G`` and check the circulant pattern.

    Raises:
        InvalidStateError: If the pairwise overlaps do not follow the pattern
    """
    states = state_set.states
    numeric = np.array([[a.inner(b) for b in states] for a in states])
    f = complex(numeric[0, 1])
    G = numeric[0, 2]
    if abs(G.imag) > SYMMETRY_ATOL:
        raise InvalidStateError(f"Opposite overlap must be real, got {G}")
    expected = circulant_gram(f, G.real)
    if np.max(np.abs(numeric - expected)) > SYMMETRY_ATOL:
        raise InvalidStateError("Overlaps do not follow the symmetric Gram pattern")
    return GramMatrix(f=f, G=float(G.real), matrix=numeric)
