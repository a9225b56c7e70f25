"""Unit tests for the linear-algebra core."""

import numpy as np
import pytest

from src.exceptions import DimensionMismatchError, NotHermitianError, NotPositiveError
from src.linalg import (
    DensityMatrix,
    StateVector,
    eig_hermitian,
    fidelity,
    ket,
    kron,
    label_projector,
    matrix_sqrt_psd,
    maximal_overlap_purifications,
    partial_trace,
    partial_trace_operator,
    trace_distance,
)

PAULI_Z = np.diag([1.0, -1.0]).astype(complex)


@pytest.fixture
def bell_state() -> DensityMatrix:
    """(|00> + |11>)/sqrt(2) as a density matrix."""
    return StateVector.normalized(ket("00") + ket("11")).density_matrix()


def test_kron_identity_and_basis_projector():
    """Identity and projector products follow the big-endian convention."""
    assert np.allclose(kron(np.eye(2), np.eye(2)), np.eye(4))
    p0, p1 = label_projector("0"), label_projector("1")
    assert np.allclose(kron(p0, p1), np.diag([0, 1, 0, 0]))
    assert np.argmax(np.abs(ket("01"))) == 1


def test_kron_matches_index_formula(rng):
    """Entries of a (x) b match the four-index definition."""
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    out = kron(a, b)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for m in range(2):
                    assert out[2 * i + k, 2 * j + m] == pytest.approx(a[i, j] * b[k, m])


def test_kron_associative(rng):
    """(a (x) b) (x) c == a (x) (b (x) c) on random triples."""
    for _ in range(20):
        a, b, c = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(3))
        assert np.max(np.abs(kron(kron(a, b), c) - kron(a, kron(b, c)))) < 1e-12


def test_partial_trace_product_and_bell(bell_state):
    """Tracing out one half of product and Bell states."""
    reduced = partial_trace(DensityMatrix.from_label("00"), [2, 2], keep=[0])
    assert np.allclose(reduced.matrix, label_projector("0"))

    reduced = partial_trace(bell_state, [2, 2], keep=[0])
    assert np.allclose(reduced.matrix, np.eye(2) / 2)


def test_partial_trace_of_product_recovers_factor(random_density):
    """Tr_B(rho_A (x) rho_B) == rho_A."""
    for _ in range(10):
        rho_a, rho_b = random_density(2), random_density(4)
        joint = DensityMatrix(kron(rho_a.matrix, rho_b.matrix), dims=(2, 4))
        assert np.max(np.abs(partial_trace(joint, [2, 4], keep=[0]).matrix - rho_a.matrix)) < 1e-12
        assert np.max(np.abs(partial_trace(joint, [2, 4], keep=[1]).matrix - rho_b.matrix)) < 1e-12


def test_partial_trace_of_two_state_cheat_superposition():
    """Bob's half of (|0>|00> + |1>|++>)/sqrt(2) has spectrum {3/4, 1/4, 0, 0}."""
    amplitudes = (kron(ket("0"), ket("00")) + kron(ket("1"), ket("++"))) / np.sqrt(2)
    rho = StateVector(amplitudes).density_matrix()
    reduced = partial_trace(rho, [2, 2, 2], keep=[1, 2])

    expected = (label_projector("00") + label_projector("++")) / 2
    assert np.allclose(reduced.matrix, expected)
    assert np.trace(reduced.matrix).real == pytest.approx(1.0)
    values, _ = eig_hermitian(reduced)
    assert values == pytest.approx([0.75, 0.25, 0.0, 0.0], abs=1e-12)


def test_partial_trace_rejects_bad_dims():
    with pytest.raises(DimensionMismatchError):
        partial_trace_operator(np.eye(4), [2, 3], keep=[0])
    with pytest.raises(DimensionMismatchError):
        partial_trace_operator(np.eye(4), [2, 2], keep=[2])


def test_eig_hermitian_pauli_z_descending():
    values, vectors = eig_hermitian(PAULI_Z)
    assert values == pytest.approx([1.0, -1.0])
    assert np.allclose(PAULI_Z @ vectors, vectors * values)


def test_eig_hermitian_conditional_state_difference():
    """Difference of Alice's conditional states for a = b = 1/sqrt(2).

    rho_0 = |+><+| and rho_1 = I/2 on the first two levels, so the
    difference is X/2 padded with zeros: {1/2, 0, 0, -1/2}, trace norm 1.
    """
    rho0 = np.zeros((4, 4), dtype=complex)
    rho0[:2, :2] = label_projector("+")
    rho1 = np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex)

    values, _ = eig_hermitian(rho0 - rho1)
    assert values == pytest.approx([0.5, 0.0, 0.0, -0.5], abs=1e-12)
    assert np.sum(np.abs(values)) == pytest.approx(1.0)


def test_eig_hermitian_reconstruction(rng):
    """Spectral reconstruction and orthonormality on random Hermitian matrices."""
    for _ in range(100):
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        m = a + a.conj().T
        values, vectors = eig_hermitian(m)
        assert np.all(np.diff(values) <= 0)
        assert np.max(np.abs((vectors * values) @ vectors.conj().T - m)) < 1e-9
        assert np.max(np.abs(vectors.conj().T @ vectors - np.eye(4))) < 1e-9


def test_eig_hermitian_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        eig_hermitian(np.array([[0, 1], [0, 0]]))


def test_matrix_sqrt_psd(rng):
    assert np.allclose(matrix_sqrt_psd(np.eye(2)), np.eye(2))
    assert np.allclose(matrix_sqrt_psd(np.diag([4.0, 1.0])), np.diag([2.0, 1.0]))

    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    m = a.conj().T @ a
    root = matrix_sqrt_psd(m)
    assert np.max(np.abs(root @ root - m)) < 1e-9
    assert np.linalg.eigvalsh((root + root.conj().T) / 2).min() > -1e-9


def test_matrix_sqrt_rejects_negative():
    with pytest.raises(NotPositiveError):
        matrix_sqrt_psd(np.diag([1.0, -1e-3]))


def test_matrix_sqrt_clips_roundoff():
    root = matrix_sqrt_psd(np.diag([1.0, -1e-11]))
    assert np.allclose(root, np.diag([1.0, 0.0]))


def test_fidelity_examples():
    assert fidelity(DensityMatrix.from_label("00"), DensityMatrix.from_label("++")) == (
        pytest.approx(0.5)
    )
    rho = DensityMatrix.from_label("0+")
    assert fidelity(rho, rho) == pytest.approx(1.0)
    assert fidelity(DensityMatrix.from_label("0"), DensityMatrix.from_label("1")) == (
        pytest.approx(0.0, abs=1e-12)
    )


def test_fidelity_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        fidelity(DensityMatrix.from_label("0"), DensityMatrix.from_label("00"))


def test_fidelity_symmetric(random_density):
    for _ in range(100):
        rho, sigma = random_density(4), random_density(4)
        assert abs(fidelity(rho, sigma) - fidelity(sigma, rho)) < 1e-10


def test_fuchs_van_de_graaf(random_density, random_pure):
    """1 - F <= D <= sqrt(1 - F^2), with equality on the right for pure states."""
    for _ in range(100):
        rho, sigma = random_density(4), random_density(4)
        f = fidelity(rho, sigma)
        d = trace_distance(rho, sigma)
        assert 1 - f <= d + 1e-10
        assert d <= np.sqrt(1 - f**2) + 1e-10

    for _ in range(100):
        psi, phi = random_pure(4).density_matrix(), random_pure(4).density_matrix()
        f = fidelity(psi, phi)
        assert trace_distance(psi, phi) == pytest.approx(np.sqrt(1 - f**2), abs=1e-8)


def test_trace_distance_examples():
    rho = DensityMatrix.from_label("+")
    assert trace_distance(rho, rho) == pytest.approx(0.0, abs=1e-12)
    assert trace_distance(DensityMatrix.from_label("0"), DensityMatrix.from_label("1")) == (
        pytest.approx(1.0)
    )
    assert trace_distance(rho, DensityMatrix.maximally_mixed(2)) == pytest.approx(0.5)


def test_maximal_overlap_purifications(random_density):
    """Outputs purify their inputs and overlap exactly at the fidelity."""
    for _ in range(20):
        rho, sigma = random_density(2), random_density(2)
        first, second = maximal_overlap_purifications(rho, sigma)
        assert first.dims == (2, 2)
        rho_back = partial_trace(first.density_matrix(), [2, 2], keep=[0])
        sigma_back = partial_trace(second.density_matrix(), [2, 2], keep=[0])
        assert np.max(np.abs(rho_back.matrix - rho.matrix)) < 1e-9
        assert np.max(np.abs(sigma_back.matrix - sigma.matrix)) < 1e-9
        assert abs(first.inner(second)) == pytest.approx(fidelity(rho, sigma), abs=1e-8)


def test_maximal_overlap_purifications_examples():
    same = DensityMatrix.from_label("+")
    first, second = maximal_overlap_purifications(same, same)
    assert abs(first.inner(second)) == pytest.approx(1.0)

    first, second = maximal_overlap_purifications(
        DensityMatrix.from_label("0"), DensityMatrix.from_label("1")
    )
    assert abs(first.inner(second)) == pytest.approx(0.0, abs=1e-12)

    sigma_00, sigma_01 = DensityMatrix.from_label("00"), DensityMatrix.from_label("++")
    first, second = maximal_overlap_purifications(sigma_00, sigma_01)
    assert abs(first.inner(second)) == pytest.approx(0.5, abs=1e-8)


def test_density_matrix_validation():
    with pytest.raises(NotHermitianError):
        DensityMatrix(np.array([[0.5, 0.1], [0.0, 0.5]]))
    with pytest.raises(ValueError):
        DensityMatrix(np.eye(2))
    with pytest.raises(NotPositiveError):
        DensityMatrix(np.diag([1.5, -0.5]))


def test_state_vector_is_read_only():
    state = StateVector.from_label("0")
    with pytest.raises(ValueError):
        state.amplitudes[0] = 0
