"""State carriers: state vectors and density matrices.

Subsystems are ordered big-endian everywhere: in ``kron(a, b)`` the first
factor is the most significant subsystem, so ``|01>`` has index 1 and the
label ``"0+"`` means qubit 0 in ``|0>`` and qubit 1 in ``|+>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from src.exceptions import InvalidStateError, NotHermitianError, NotPositiveError

ComplexMatrix = NDArray[np.complex128]

SQRT_HALF = 1 / np.sqrt(2)

SINGLE_QUBIT_KETS: dict[str, NDArray[np.complex128]] = {
    "0": np.array([1, 0], dtype=complex),
    "1": np.array([0, 1], dtype=complex),
    "+": np.array([SQRT_HALF, SQRT_HALF], dtype=complex),
    "-": np.array([SQRT_HALF, -SQRT_HALF], dtype=complex),
}


def _frozen(array: ArrayLike) -> NDArray[np.complex128]:
    out = np.array(array, dtype=complex, copy=True)
    out.flags.writeable = False
    return out


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class StateVector:
    """Normalized pure state over a product of subsystems.

    Attributes:
        amplitudes: Complex amplitudes, read-only
        dims: Subsystem dimensions, product equal to ``len(amplitudes)``
    """

    amplitudes: NDArray[np.complex128]
    dims: tuple[int, ...] = field(default=())
    atol: float = field(default=1e-10, compare=False, repr=False)

    def __post_init__(self) -> None:
        amplitudes = _frozen(self.amplitudes).reshape(-1)
        object.__setattr__(self, "amplitudes", amplitudes)

        dim = amplitudes.shape[0]
        if not _is_power_of_two(dim):
            raise InvalidStateError(f"State dimension must be a power of two, got {dim}")

        dims = tuple(self.dims) if self.dims else (2,) * int(np.log2(dim))
        if int(np.prod(dims)) != dim:
            raise InvalidStateError(f"Subsystem dims {dims} do not multiply to {dim}")
        object.__setattr__(self, "dims", dims)

        norm_sq = float(np.vdot(amplitudes, amplitudes).real)
        if abs(norm_sq - 1.0) > self.atol:
            raise InvalidStateError(f"State vector not normalized: squared norm {norm_sq}")

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def inner(self, other: StateVector) -> complex:
        """Inner product ``<self|other>``."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def density_matrix(self) -> DensityMatrix:
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()), dims=self.dims)

    def evolve(self, unitary: ComplexMatrix) -> StateVector:
        return StateVector(unitary @ self.amplitudes, dims=self.dims)

    def with_global_phase(self, phase: float) -> StateVector:
        return StateVector(np.exp(1j * phase) * self.amplitudes, dims=self.dims)

    @classmethod
    def from_label(cls, label: str) -> StateVector:
        """Product state from a label over ``0 1 + -``, e.g. ``"0+"``."""
        return cls(ket(label))

    @classmethod
    def normalized(cls, amplitudes: ArrayLike, dims: Sequence[int] = ()) -> StateVector:
        vector = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(vector)
        if norm == 0:
            raise InvalidStateError("Cannot normalize the zero vector")
        return cls(vector / norm, dims=tuple(dims))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite operator.

    Attributes:
        matrix: Complex entries, read-only
        dims: Subsystem dimensions
    """

    matrix: ComplexMatrix
    dims: tuple[int, ...] = field(default=())
    hermitian_atol: float = field(default=1e-12, compare=False, repr=False)
    trace_atol: float = field(default=1e-10, compare=False, repr=False)
    psd_atol: float = field(default=1e-10, compare=False, repr=False)

    def __post_init__(self) -> None:
        matrix = _frozen(self.matrix)
        object.__setattr__(self, "matrix", matrix)

        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise InvalidStateError(f"Density matrix must be square, got shape {matrix.shape}")

        dim = matrix.shape[0]
        dims = tuple(self.dims) if self.dims else _default_dims(dim)
        if int(np.prod(dims)) != dim:
            raise InvalidStateError(f"Subsystem dims {dims} do not multiply to {dim}")
        object.__setattr__(self, "dims", dims)

        if np.max(np.abs(matrix - matrix.conj().T)) > self.hermitian_atol:
            raise NotHermitianError("Density matrix is not Hermitian")

        trace = complex(np.trace(matrix))
        if abs(trace - 1.0) > self.trace_atol:
            raise InvalidStateError(f"Density matrix trace is {trace.real:.12f}, expected 1")

        min_eigenvalue = float(np.linalg.eigvalsh(matrix).min())
        if min_eigenvalue < -self.psd_atol:
            raise NotPositiveError(f"Density matrix has eigenvalue {min_eigenvalue:.3e}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def expectation(self, operator: ComplexMatrix) -> float:
        """Real part of ``Tr(operator @ rho)``."""
        return float(np.trace(operator @ self.matrix).real)

    def evolve(self, unitary: ComplexMatrix) -> DensityMatrix:
        return DensityMatrix(unitary @ self.matrix @ unitary.conj().T, dims=self.dims)

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    @classmethod
    def from_label(cls, label: str) -> DensityMatrix:
        return StateVector.from_label(label).density_matrix()

    @classmethod
    def maximally_mixed(cls, dim: int) -> DensityMatrix:
        return cls(np.eye(dim, dtype=complex) / dim)

    @classmethod
    def mixture(
        cls, states: Sequence[DensityMatrix], weights: Sequence[float]
    ) -> DensityMatrix:
        """Convex combination of states with the given weights."""
        if len(states) != len(weights) or not states:
            raise InvalidStateError("Mixture needs one weight per state")
        matrix = sum(w * s.matrix for s, w in zip(states, weights, strict=True))
        return cls(matrix, dims=states[0].dims)


def _default_dims(dim: int) -> tuple[int, ...]:
    if _is_power_of_two(dim):
        return (2,) * int(np.log2(dim)) if dim > 1 else (1,)
    return (dim,)


def ket(label: str) -> NDArray[np.complex128]:
    """Product ket from a label over the characters ``0 1 + -``.

    Args:
        label: e.g. ``"00"``, ``"++"``, ``"0-"``

    Returns:
        Amplitude vector of length ``2**len(label)``
    """
    try:
        factors = [SINGLE_QUBIT_KETS[ch] for ch in label]
    except KeyError as e:
        raise InvalidStateError(f"Unknown qubit label {e} in {label!r}") from e
    return reduce(np.kron, factors)


def projector(vector: ArrayLike) -> ComplexMatrix:
    """Rank-one projector ``|v><v|`` (vector is used as given)."""
    v = np.asarray(vector, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())


def label_projector(label: str) -> ComplexMatrix:
    return projector(ket(label))
