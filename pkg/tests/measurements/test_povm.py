"""Unit tests for POVMs, the USE measurement and outcome sampling."""

import numpy as np
import pytest

from src.exceptions import InvalidPovmError
from src.linalg import DensityMatrix, StateVector, ket
from src.measurements import (
    INPUT_LABELS,
    Povm,
    born_table,
    product_basis_povm,
    protocol_state_set,
    sample_from_table,
    sample_measurement,
    use_measurement_povm,
    use_outcome_map,
)
from src.utils.random_streams import role_stream


@pytest.fixture
def use_povm() -> Povm:
    """USE measurement in the default orientation."""
    return use_measurement_povm()


def test_povm_rejects_incomplete_effects():
    with pytest.raises(InvalidPovmError):
        Povm(("0",), (np.diag([1.0, 0.0]),))


def test_povm_rejects_negative_effect():
    with pytest.raises(InvalidPovmError):
        Povm(("a", "b"), (np.diag([1.5, 1.0]), np.diag([-0.5, 0.0])))


def test_povm_rejects_duplicate_labels():
    with pytest.raises(InvalidPovmError):
        Povm(("a", "a"), (np.diag([1.0, 0.0]), np.diag([0.0, 1.0])))


def test_product_basis_labels():
    assert product_basis_povm("zz").labels == ("00", "01", "10", "11")
    assert product_basis_povm("xx").labels == ("++", "+-", "-+", "--")
    with pytest.raises(InvalidPovmError):
        product_basis_povm("zy")


def test_use_probabilities_on_protocol_states(use_povm: Povm):
    """|00> gives 0+ / 0- and |++> gives 0+ / 1+, each with probability 1/2."""
    probs = dict(zip(use_povm.labels, use_povm.probabilities(StateVector(ket("00")))))
    assert probs == pytest.approx({"0+": 0.5, "0-": 0.5, "1+": 0.0, "1-": 0.0}, abs=1e-12)

    probs = dict(zip(use_povm.labels, use_povm.probabilities(StateVector(ket("++")))))
    assert probs == pytest.approx({"0+": 0.5, "0-": 0.0, "1+": 0.5, "1-": 0.0}, abs=1e-12)


def test_use_outcome_meanings():
    outcomes = use_outcome_map()
    assert {label: o.c for label, o in outcomes.items()} == {"0+": 0, "1-": 0, "0-": 1, "1+": 1}
    assert [outcomes[label].star_label for label in ("0+", "1-", "0-", "1+")] == [
        "0*",
        "1*",
        "*0",
        "*1",
    ]


@pytest.mark.parametrize("orientation", ["zx", "xz"])
def test_use_never_reveals_a_wrong_bit(orientation: str):
    """Every protocol state yields x_c exactly, and c = 0 with probability 1/2."""
    povm = use_measurement_povm(orientation)
    outcomes = use_outcome_map(orientation)
    state_set = protocol_state_set()

    for bits, state in zip(INPUT_LABELS, state_set.states):
        probs = povm.probabilities(state)
        wrong = sum(
            p for label, p in zip(povm.labels, probs) if outcomes[label].y != int(bits[outcomes[label].c])
        )
        c_zero = sum(p for label, p in zip(povm.labels, probs) if outcomes[label].c == 0)
        assert wrong == pytest.approx(0.0, abs=1e-12)
        assert c_zero == pytest.approx(0.5, abs=1e-12)


def test_sample_measurement_eigenstate(use_povm: Povm):
    """An eigenstate of a projective measurement always yields its own outcome."""
    rng = role_stream(1, "bob")
    state = DensityMatrix.from_label("1-")
    assert {sample_measurement(state, use_povm, rng) for _ in range(50)} == {"1-"}


def test_sample_measurement_replays_with_same_seed(use_povm: Povm):
    state = DensityMatrix.from_label("00")
    rng_a, rng_b = role_stream(7, "bob"), role_stream(7, "bob")
    seq_a = [sample_measurement(state, use_povm, rng_a) for _ in range(100)]
    seq_b = [sample_measurement(state, use_povm, rng_b) for _ in range(100)]
    assert seq_a == seq_b
    assert set(seq_a) == {"0+", "0-"}


def test_vectorized_sampling_frequency(use_povm: Povm):
    """10^5 USE samples on |00>: frequency of 0+ within five binomial sigma of 1/2."""
    table = born_table([DensityMatrix.from_label("00")], use_povm)
    n = 100_000
    picks = sample_from_table(table, np.zeros(n, dtype=int), role_stream(11, "bob"))
    freq = np.mean(picks == use_povm.index("0+"))
    sigma = np.sqrt(0.25 / n)
    assert abs(freq - 0.5) < 5 * sigma
    assert not np.any(np.isin(picks, [use_povm.index("1+"), use_povm.index("1-")]))


def test_sample_from_table_rejects_bad_rows():
    with pytest.raises(InvalidPovmError):
        sample_from_table(np.array([[0.5, 0.6]]), np.zeros(3, dtype=int), role_stream(1, "bob"))
