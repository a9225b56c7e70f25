"""Dense linear algebra on small Hilbert spaces."""

import string
from functools import reduce
from typing import Sequence, Tuple, Union

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike, NDArray

from src.exceptions import DimensionMismatchError, NotHermitianError, NotPositiveError
from src.linalg.states import ComplexMatrix, DensityMatrix, StateVector

MatrixLike = Union[DensityMatrix, ArrayLike]

CLIP_BELOW = 1e-8
ROUNDOFF = 1e-14
HERMITIAN_ATOL = 1e-9


def as_matrix(m: MatrixLike) -> ComplexMatrix:
    """Plain complex array view of a matrix or density matrix."""
    if isinstance(m, DensityMatrix):
        return m.matrix
    out = np.asarray(m, dtype=complex)
    if out.ndim != 2 or out.shape[0] != out.shape[1]:
        raise DimensionMismatchError(f"Expected a square matrix, got shape {out.shape}")
    return out


def kron(a: ArrayLike, b: ArrayLike) -> ComplexMatrix:
    """Tensor product, first factor most significant."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(*factors: ArrayLike) -> ComplexMatrix:
    if not factors:
        raise DimensionMismatchError("kron_all needs at least one factor")
    return reduce(kron, factors)


def dagger(m: ArrayLike) -> ComplexMatrix:
    return np.asarray(m, dtype=complex).conj().T


def is_unitary(u: ArrayLike, atol: float = 1e-10) -> bool:
    u = np.asarray(u, dtype=complex)
    return u.ndim == 2 and np.allclose(u.conj().T @ u, np.eye(u.shape[0]), atol=atol)


def partial_trace_operator(
    m: ArrayLike, subsystem_dims: Sequence[int], keep: Sequence[int]
) -> ComplexMatrix:
    """Partial trace of an arbitrary operator.

    Args:
        m: Square operator on the full space
        subsystem_dims: Dimension of every subsystem, most significant first
        keep: Indices of the subsystems to keep, in any order

    Returns:
        Operator on the kept subsystems, ordered as in ``subsystem_dims``
    """
    m = np.asarray(m, dtype=complex)
    dims = [int(d) for d in subsystem_dims]
    n = len(dims)
    if m.shape != (int(np.prod(dims)), int(np.prod(dims))):
        raise DimensionMismatchError(
            f"Operator of shape {m.shape} does not match subsystem dims {dims}"
        )
    kept = sorted(set(keep))
    if any(k < 0 or k >= n for k in kept):
        raise DimensionMismatchError(f"Keep indices {list(keep)} out of range for {n} subsystems")

    letters = string.ascii_letters
    row = list(letters[:n])
    col = list(letters[n : 2 * n])
    for i in range(n):
        if i not in kept:
            col[i] = row[i]
    out = "".join(row[i] for i in kept) + "".join(col[i] for i in kept)
    subscripts = f"{''.join(row)}{''.join(col)}->{out}"

    kept_dim = int(np.prod([dims[i] for i in kept])) if kept else 1
    tensor = m.reshape(dims + dims)
    return np.einsum(subscripts, tensor).reshape(kept_dim, kept_dim)


def partial_trace(
    rho: DensityMatrix, subsystem_dims: Sequence[int], keep: Sequence[int]
) -> DensityMatrix:
    """Reduced state on the subsystems listed in ``keep``."""
    reduced = partial_trace_operator(rho.matrix, subsystem_dims, keep)
    kept = sorted(set(keep))
    # Roundoff from the contraction can break exact Hermiticity
    reduced = (reduced + reduced.conj().T) / 2
    return DensityMatrix(reduced, dims=tuple(int(subsystem_dims[i]) for i in kept))


def eig_hermitian(
    m: MatrixLike, atol: float = HERMITIAN_ATOL
) -> Tuple[NDArray[np.float64], ComplexMatrix]:
    """Eigen-decomposition of a Hermitian matrix.

    Args:
        m: Hermitian matrix
        atol: Allowed entrywise deviation from Hermiticity

    Returns:
        Eigenvalues in descending order and the matching eigenvectors as columns
    """
    m = as_matrix(m)
    if np.max(np.abs(m - m.conj().T), initial=0.0) > atol:
        raise NotHermitianError("eig_hermitian requires a Hermitian matrix")
    values, vectors = scipy.linalg.eigh((m + m.conj().T) / 2)
    order = np.argsort(values)[::-1]
    return values[order], vectors[:, order]


def matrix_sqrt_psd(m: MatrixLike, clip_below: float = CLIP_BELOW) -> ComplexMatrix:
    """Principal square root of a positive semidefinite matrix.

    Small negative eigenvalues from roundoff are set to zero.

    Raises:
        NotPositiveError: If an eigenvalue is below ``-clip_below``
    """
    values, vectors = eig_hermitian(m)
    if values.size and values[-1] < -clip_below:
        raise NotPositiveError(f"Matrix has eigenvalue {values[-1]:.3e}, not PSD")
    values = np.clip(values, 0.0, None)
    # Eigenvalues at roundoff level would otherwise contribute ~1e-8 after the root
    scale = max(float(values[0]), 1.0) if values.size else 1.0
    values[values < ROUNDOFF * scale] = 0.0
    roots = np.sqrt(values)
    return (vectors * roots) @ vectors.conj().T


def _check_same_dim(a: ComplexMatrix, b: ComplexMatrix) -> None:
    if a.shape != b.shape:
        raise DimensionMismatchError(f"Dimension mismatch: {a.shape} vs {b.shape}")


def fidelity(rho: MatrixLike, sigma: MatrixLike) -> float:
    """Root fidelity ``Tr sqrt(sqrt(rho) sigma sqrt(rho))``.

    Computed as the nuclear norm of ``sqrt(rho) sqrt(sigma)``, which is the
    same quantity and symmetric in its arguments by construction.
    """
    a, b = as_matrix(rho), as_matrix(sigma)
    _check_same_dim(a, b)
    product = matrix_sqrt_psd(a) @ matrix_sqrt_psd(b)
    value = float(np.sum(scipy.linalg.svdvals(product)))
    return min(max(value, 0.0), 1.0)


def trace_distance(rho: MatrixLike, sigma: MatrixLike) -> float:
    """Half the trace norm of ``rho - sigma``."""
    a, b = as_matrix(rho), as_matrix(sigma)
    _check_same_dim(a, b)
    values, _ = eig_hermitian(a - b)
    return min(float(np.sum(np.abs(values))) / 2, 1.0)


def maximal_overlap_purifications(
    rho: DensityMatrix, sigma: DensityMatrix
) -> Tuple[StateVector, StateVector]:
    """Purifications of ``rho`` and ``sigma`` whose overlap equals their fidelity.

    A purifying system of the same dimension is appended as the least
    significant subsystem. With ``|Omega> = sum_i |i>|i>`` the outputs are
    ``(sqrt(rho) x 1)|Omega>`` and ``(sqrt(sigma) x W)|Omega>`` where ``W`` is
    read off the singular value decomposition of ``sqrt(rho) sqrt(sigma)``.

    Returns:
        Pair of state vectors on ``rho.dims + (d,)``
    """
    _check_same_dim(rho.matrix, sigma.matrix)
    d = rho.dim
    sqrt_rho = matrix_sqrt_psd(rho)
    sqrt_sigma = matrix_sqrt_psd(sigma)

    u, _, vh = scipy.linalg.svd(sqrt_rho @ sqrt_sigma)
    # W^T = V U^dagger maximizes Re Tr(sqrt_rho sqrt_sigma W^T)
    w = (vh.conj().T @ u.conj().T).T

    omega = np.eye(d, dtype=complex).reshape(-1)
    dims = tuple(rho.dims) + (d,)
    first = StateVector(kron(sqrt_rho, np.eye(d)) @ omega, dims=dims)
    second = StateVector(kron(sqrt_sigma, w) @ omega, dims=dims)
    return first, second
