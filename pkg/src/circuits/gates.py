"""Gates of the three-qubit preparation circuit.

Angles are given in degrees and converted to radians here.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.linalg.operations import kron_all
from src.linalg.states import ComplexMatrix

HADAMARD: ComplexMatrix = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def hadamard() -> ComplexMatrix:
    return HADAMARD.copy()


def _phase_on_last(dim: int, angle_deg: float) -> ComplexMatrix:
    gate = np.eye(dim, dtype=complex)
    gate[-1, -1] = np.exp(1j * np.deg2rad(angle_deg))
    return gate


def cp_gate(alpha: float) -> ComplexMatrix:
    """Controlled phase ``1 + (e^{i alpha} - 1)|11><11|``, ``alpha`` in degrees."""
    return _phase_on_last(4, alpha)


def ccp_gate(beta: float) -> ComplexMatrix:
    """Controlled-controlled phase ``1 + (e^{i beta} - 1)|111><111|``, ``beta`` in degrees."""
    return _phase_on_last(8, beta)


def circuit_unitary(alpha: float, beta: float) -> ComplexMatrix:
    """``U_CCP(beta) (1 (x) H (x) 1) (U_CP(alpha) (x) 1)`` on qubits ``(1, 2, 3)``."""
    identity = np.eye(2, dtype=complex)
    return ccp_gate(beta) @ kron_all(identity, HADAMARD, identity) @ kron_all(cp_gate(alpha), identity)


def local_unitary(a: float, b: float, c: float) -> ComplexMatrix:
    """Single-qubit ``SU(2)`` element with angles ``(A, B, C)`` in degrees.

    ``[[cos A e^{iB}, -sin A e^{-iC}], [sin A e^{iC}, cos A e^{-iB}]]``
    """
    a, b, c = np.deg2rad([a, b, c])
    return np.array(
        [
            [np.cos(a) * np.exp(1j * b), -np.sin(a) * np.exp(-1j * c)],
            [np.sin(a) * np.exp(1j * c), np.cos(a) * np.exp(-1j * b)],
        ],
        dtype=complex,
    )


@dataclass(frozen=True)
class LocalUnitaryParams:
    """Angles ``(A_j, B_j, C_j)`` in degrees for each of the three qubits."""

    angles: Tuple[Tuple[float, float, float], ...]

    def __post_init__(self) -> None:
        if len(self.angles) != 3 or any(len(triple) != 3 for triple in self.angles):
            raise ValueError("Need three angle triples, one per qubit")

    def unitaries(self) -> Tuple[ComplexMatrix, ...]:
        return tuple(local_unitary(*triple) for triple in self.angles)

    def operator(self) -> ComplexMatrix:
        """``V_1 (x) V_2 (x) V_3``."""
        return kron_all(*self.unitaries())

    def as_vector(self) -> np.ndarray:
        return np.array(self.angles, dtype=float).reshape(-1)

    @classmethod
    def from_vector(cls, x: np.ndarray) -> "LocalUnitaryParams":
        """Nine angles in degrees, wrapped into ``(-180, 180]``."""
        wrapped = -((-np.asarray(x, dtype=float) + 180.0) % 360.0 - 180.0)
        return cls(tuple(tuple(float(v) for v in row) for row in wrapped.reshape(3, 3)))

    @classmethod
    def identity(cls) -> "LocalUnitaryParams":
        return cls(((0.0, 0.0, 0.0),) * 3)
