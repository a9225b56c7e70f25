"""Unit tests for symmetric state sets, SRM and Helstrom discrimination."""

import numpy as np
import pytest

from src.exceptions import InvalidStateError
from src.linalg import DensityMatrix, StateVector, ket
from src.measurements import (
    SymmetricStateSet,
    gram_matrix,
    helstrom_discriminate,
    protocol_generator,
    protocol_state_set,
    srm_construct,
    srm_success_probability,
)

SRM_SUCCESS = (3 + 2 * np.sqrt(2)) / 8


@pytest.fixture
def protocol_states() -> list[DensityMatrix]:
    """Density matrices of the protocol encoding in generator order."""
    return list(protocol_state_set().density_matrices())


def test_protocol_state_set_overlaps():
    state_set = protocol_state_set()
    s00, spp, s11, smm = state_set.states
    assert s00.inner(spp) == pytest.approx(0.5)
    assert s00.inner(s11) == pytest.approx(0.0, abs=1e-12)
    assert state_set.case_tag == "case1"
    assert state_set.state_for("10").inner(StateVector(ket("--"))) == pytest.approx(1.0)


def test_protocol_generator_cycles():
    u = protocol_generator()
    assert np.allclose(u @ ket("00"), ket("++"))
    assert np.allclose(np.linalg.matrix_power(u, 4), np.eye(4))


def test_gram_matrix_examples():
    gram = gram_matrix(protocol_state_set())
    assert gram.f == pytest.approx(0.5)
    assert gram.G == pytest.approx(0.0, abs=1e-12)

    identical = SymmetricStateSet.generate(StateVector(ket("0+")), np.eye(4))
    gram = gram_matrix(identical)
    assert (gram.f, gram.G) == (pytest.approx(1.0), pytest.approx(1.0))

    shift = np.roll(np.eye(4), 1, axis=0)
    orthogonal = SymmetricStateSet.generate(StateVector(ket("00")), shift)
    gram = gram_matrix(orthogonal)
    assert (gram.f, gram.G) == (pytest.approx(0.0), pytest.approx(0.0))


def test_symmetric_set_rejects_bad_generator():
    states = tuple(StateVector(ket(label)) for label in ("00", "++", "11", "--"))
    with pytest.raises(InvalidStateError):
        SymmetricStateSet(states, np.eye(4))


def test_srm_orthogonal_pair_is_perfect():
    states = [DensityMatrix.from_label("0"), DensityMatrix.from_label("1")]
    povm = srm_construct(states, [0.5, 0.5])
    assert len(povm) == 2
    assert srm_success_probability(states, [0.5, 0.5]) == pytest.approx(1.0)


def test_srm_protocol_set(protocol_states):
    """SRM success on the encoding is (1 + 1/sqrt(2))^2 / 4."""
    povm = srm_construct(protocol_states)
    # The four states span three dimensions
    assert povm.labels[-1] == "residual"
    assert np.trace(povm.effect("residual")).real == pytest.approx(1.0)
    assert srm_success_probability(protocol_states) == pytest.approx(SRM_SUCCESS, abs=1e-12)
    assert SRM_SUCCESS == pytest.approx(0.25 * (1 + 1 / np.sqrt(2)) ** 2)


def test_srm_orthogonal_quadruple():
    states = [DensityMatrix.from_label(label) for label in ("00", "01", "10", "11")]
    assert srm_success_probability(states) == pytest.approx(1.0)


def test_srm_two_pure_states_match_helstrom(random_pure):
    for _ in range(20):
        a, b = random_pure(2), random_pure(2)
        expected = 0.5 * (1 + np.sqrt(1 - abs(a.inner(b)) ** 2))
        success = srm_success_probability([a.density_matrix(), b.density_matrix()])
        assert success == pytest.approx(expected, abs=1e-9)


def test_srm_rejects_empty_input():
    with pytest.raises(InvalidStateError):
        srm_construct([])


def test_helstrom_examples():
    _, success = helstrom_discriminate(DensityMatrix.from_label("+"), DensityMatrix.maximally_mixed(2))
    assert success == pytest.approx(0.75)

    rho = DensityMatrix.from_label("0")
    povm, success = helstrom_discriminate(rho, rho)
    assert success == pytest.approx(0.5)
    # Ties go to guess 0
    assert np.allclose(povm.effect("0"), np.eye(2))


def test_helstrom_rejects_bad_prior():
    rho = DensityMatrix.from_label("0")
    with pytest.raises(InvalidStateError):
        helstrom_discriminate(rho, rho, prior0=1.5)


def test_helstrom_beats_random_measurements(random_density, rng):
    """No random two-outcome POVM beats the Helstrom measurement."""
    rho0, rho1 = random_density(4), random_density(4)
    _, best = helstrom_discriminate(rho0, rho1, prior0=0.4)
    for _ in range(50):
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        q, _ = np.linalg.qr(a)
        e0 = (q * rng.random(4)) @ q.conj().T
        e1 = np.eye(4) - e0
        success = 0.4 * np.trace(e0 @ rho0.matrix).real + 0.6 * np.trace(e1 @ rho1.matrix).real
        assert success <= best + 1e-12
