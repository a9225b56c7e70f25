"""Unit tests for the preparation circuit and local-unitary equivalence."""

import numpy as np
import pytest

from src.circuits import (
    CircuitParams,
    LocalUnitaryParams,
    ccp_gate,
    circuit_unitary,
    cp_gate,
    local_unitary,
    lu_equivalence,
    prepare_sigma,
    reduced_spectra,
    sigma_target,
    verify_preparation,
)
from src.linalg import StateVector, is_unitary, partial_trace


@pytest.fixture(scope="module")
def reference_report():
    """Verification of the tabulated circuit parameters (full multi-start)."""
    return verify_preparation(restarts=50, seed=1)


def test_phase_gates():
    assert np.allclose(cp_gate(0.0), np.eye(4))
    assert np.allclose(cp_gate(180.0), np.diag([1, 1, 1, -1]))
    assert np.allclose(ccp_gate(0.0), np.eye(8))
    assert np.allclose(ccp_gate(180.0), np.diag([1, 1, 1, 1, 1, 1, 1, -1]))
    assert cp_gate(-138.19)[3, 3] == pytest.approx(np.exp(1j * np.deg2rad(-138.19)))


def test_gates_are_unitary(rng: np.random.Generator):
    for _ in range(20):
        alpha, beta, a, b, c = rng.uniform(-360, 360, 5)
        assert is_unitary(circuit_unitary(alpha, beta), atol=1e-12)
        assert is_unitary(local_unitary(a, b, c), atol=1e-12)


def test_local_params_wrap_angles():
    params = LocalUnitaryParams.from_vector(np.array([190.0, -180.0, 360.0] * 3))
    assert params.angles[0] == pytest.approx((-170.0, 180.0, 0.0))
    assert np.allclose(params.operator(), LocalUnitaryParams(((190.0, -180.0, 360.0),) * 3).operator())


def test_circuit_params_reject_non_finite():
    with pytest.raises(ValueError):
        CircuitParams(theta=(np.nan, 0.0, 0.0), phi=(0.0, 0.0, 0.0), alpha=0.0, beta=0.0)
    with pytest.raises(ValueError):
        CircuitParams(theta=(0.0, 0.0, 0.0), phi=(0.0, 0.0, 0.0), alpha=np.inf, beta=0.0)


def test_zero_parameters_give_zero_plus_zero():
    state = prepare_sigma(CircuitParams.zero())
    assert np.allclose(state.amplitudes, StateVector.from_label("0+0").amplitudes)


def test_sigma_target():
    sigma = sigma_target()
    assert np.linalg.norm(sigma.amplitudes) == pytest.approx(1.0)
    assert sigma.amplitudes[0] == pytest.approx(1 / np.sqrt(2))
    bob = partial_trace(sigma.density_matrix(), (2, 2, 2), [0, 1])
    assert np.sort(np.linalg.eigvalsh(bob.matrix))[::-1] == pytest.approx([0.75, 0.25, 0.0, 0.0], abs=1e-12)


def test_sigma_reduced_spectra():
    b1, b2, a = reduced_spectra(sigma_target())
    expected_b = [(1 + 1 / np.sqrt(2)) / 2, (1 - 1 / np.sqrt(2)) / 2]
    assert b1 == pytest.approx(expected_b, abs=1e-12)
    assert b2 == pytest.approx(expected_b, abs=1e-12)
    assert a == pytest.approx([0.75, 0.25], abs=1e-12)


def test_identical_states_are_equivalent():
    result = lu_equivalence(sigma_target(), sigma_target(), restarts=10, seed=0)
    assert result.value == pytest.approx(1.0, abs=1e-10)


def test_recovers_random_local_unitaries(rng: np.random.Generator):
    target = sigma_target()
    hidden = LocalUnitaryParams.from_vector(rng.uniform(-180, 180, 9))
    candidate = target.evolve(hidden.operator())
    result = lu_equivalence(candidate, target, restarts=20, seed=2)
    assert result.value == pytest.approx(1.0, abs=1e-8)


def test_global_phase_does_not_matter(rng: np.random.Generator):
    target = sigma_target()
    candidate = target.evolve(LocalUnitaryParams.from_vector(rng.uniform(-180, 180, 9)).operator())
    plain = lu_equivalence(candidate, target, restarts=20, seed=3)
    shifted = lu_equivalence(candidate.with_global_phase(1.3), target.with_global_phase(-0.4), restarts=20, seed=3)
    assert shifted.value == pytest.approx(plain.value, abs=1e-9)


def test_history_never_decreases():
    prepared = prepare_sigma(CircuitParams.reference())
    result = lu_equivalence(prepared, sigma_target(), restarts=8, seed=4)
    assert len(result.history) == 8
    assert all(later >= earlier for earlier, later in zip(result.history, result.history[1:]))
    assert result.history[-1] == pytest.approx(result.value, abs=1e-12)


def test_reference_circuit_prepares_sigma(reference_report):
    assert reference_report.lu_equivalence >= 1 - 1e-6
    assert reference_report.one_minus_e <= 1e-6
    assert max(reference_report.spectrum_deltas) < 1e-5


def test_literal_phase_sense_misses_sigma():
    literal = CircuitParams(theta=(120.0, 90.0, 116.565), phi=(22.5, 90.0, 180.0), alpha=-138.190, beta=180.0)
    deltas = [
        np.max(np.abs(ours - theirs))
        for ours, theirs in zip(reduced_spectra(prepare_sigma(literal)), reduced_spectra(sigma_target()))
    ]
    assert max(deltas) > 1e-2
