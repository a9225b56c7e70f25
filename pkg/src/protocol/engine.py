"""Round-by-round simulation of the semi-random OT protocol.

Alice sends one of ``|00>, |++>, |11>, |-->`` per round. Bob picks a random
subset of rounds to test: Alice declares the state she sent and Bob measures
it in the basis it belongs to (XX for ``|++>``/``|-->``, ZZ otherwise). Any
mismatch aborts the protocol. The remaining payload rounds are measured with
the receiver's payload measurement, USE for an honest Bob.

Sampling is vectorized: every strategy exposes joint probability tables of
Alice's record (declaration, input or guess) and Bob's outcome, and rounds
are drawn from those tables on named random streams.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from math import isqrt
from typing import Any, Dict, Iterator, List, Literal, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, Field, model_validator

from src.config import get_config
from src.exceptions import InvalidStateError
from src.linalg.states import StateVector
from src.measurements.povm import Povm, product_basis_povm, sample_from_table
from src.measurements.state_sets import INPUT_LABELS, STATE_LABELS, protocol_state_set
from src.measurements.use import ORIENTATIONS, use_measurement_povm, use_outcome_map
from src.utils.logger import get_logger
from src.utils.random_streams import role_stream

logger = get_logger(__name__)

TEST_BASES: Tuple[str, str] = ("zz", "xx")
# Basis Bob tests each declared input in
TEST_BASIS_FOR_INPUT: Dict[str, str] = {"00": "zz", "01": "xx", "11": "zz", "10": "xx"}

NO_VALUE = -1


class ProtocolConfig(BaseModel):
    """Parameters of one protocol run."""

    total_rounds: int = Field(ge=2)
    test_count: Optional[int] = Field(default=None, ge=1)
    seed: int = Field(
        default_factory=lambda: get_config().simulation.default_seed, ge=0, lt=2**64
    )
    test_mode: Literal["declared", "blind"] = "declared"
    randomize_orientation: bool = False

    @model_validator(mode="after")
    def check_test_count(self) -> "ProtocolConfig":
        if self.test_count is None:
            self.test_count = isqrt(self.total_rounds)
        if self.test_count >= self.total_rounds:
            raise ValueError(
                f"test_count ({self.test_count}) must be below total_rounds ({self.total_rounds})"
            )
        return self


class SenderStrategy(ABC):
    """Alice's behavior, described by joint tables over (type, record, Bob outcome)."""

    name: str = "sender"
    # "input" when records are Alice's input bits, "guess" when they are her guess of c
    record_kind: str = "input"

    @property
    @abstractmethod
    def type_weights(self) -> NDArray[np.float64]:
        """Probability of each round type Alice may prepare."""

    @abstractmethod
    def declaration_table(self, povm: Povm) -> NDArray[np.float64]:
        """``P(declared input k, Bob outcome o | type)``, shape ``(types, 4, outcomes)``."""

    @abstractmethod
    def payload_table(self, povm: Povm) -> NDArray[np.float64]:
        """``P(record r, Bob outcome o | type)``, shape ``(types, records, outcomes)``."""

    def sample_types(self, rng: np.random.Generator, n: int) -> NDArray[np.int_]:
        weights = self.type_weights
        return rng.choice(len(weights), size=n, p=weights)


class ClassicalSender(SenderStrategy):
    """Alice prepares one of a fixed list of pure states and declares a fixed input for each."""

    def __init__(
        self,
        states: Sequence[StateVector],
        declared: Sequence[int],
        weights: Optional[Sequence[float]] = None,
        name: str = "honest",
    ):
        if len(states) != len(declared) or not states:
            raise InvalidStateError("One declared input per prepared state is required")
        self.states = tuple(states)
        self.declared = np.asarray(declared, dtype=int)
        self._weights = np.asarray(
            weights if weights is not None else [1 / len(states)] * len(states), dtype=float
        )
        self.name = name

    @classmethod
    def honest(cls) -> "ClassicalSender":
        """Uniformly random input, encoded with the protocol states."""
        return cls(protocol_state_set().states, range(4))

    @classmethod
    def substitution(cls, state_label: str, declared_bits: str = "00") -> "ClassicalSender":
        """Always send ``|state_label>`` and claim it encodes ``declared_bits``."""
        return cls(
            [StateVector.from_label(state_label)],
            [INPUT_LABELS.index(declared_bits)],
            name=f"substitution-{state_label}-as-{declared_bits}",
        )

    @property
    def type_weights(self) -> NDArray[np.float64]:
        return self._weights

    def _table(self, povm: Povm) -> NDArray[np.float64]:
        table = np.zeros((len(self.states), 4, len(povm)))
        for t, (state, k) in enumerate(zip(self.states, self.declared)):
            table[t, k] = povm.probabilities(state)
        return table

    def declaration_table(self, povm: Povm) -> NDArray[np.float64]:
        return self._table(povm)

    def payload_table(self, povm: Povm) -> NDArray[np.float64]:
        return self._table(povm)


@dataclass(frozen=True)
class PayloadReading:
    """Bob's interpretation of one payload outcome."""

    c: int
    y: int
    guess: int = NO_VALUE


class ReceiverStrategy(ABC):
    """Bob's payload measurement and how he reads its outcomes."""

    name: str = "receiver"

    @abstractmethod
    def payload_povm(self, orientation: str) -> Povm: ...

    @abstractmethod
    def interpret(self, label: str, orientation: str) -> PayloadReading: ...


class HonestReceiver(ReceiverStrategy):
    name = "honest"

    def payload_povm(self, orientation: str) -> Povm:
        return use_measurement_povm(orientation)

    def interpret(self, label: str, orientation: str) -> PayloadReading:
        outcome = use_outcome_map(orientation)[label]
        return PayloadReading(c=outcome.c, y=outcome.y)


@dataclass
class Transcript:
    """Columnar record of one protocol run, one entry per round.

    Integer columns use ``-1`` where a value does not apply: ``alice_input``
    for a sender without definite input bits, Bob's ``c``/``y`` on test rounds,
    guesses for honest parties, and ``test_passed`` on payload rounds and
    unchecked blind tests.
    """

    config: ProtocolConfig
    sender: str
    receiver: str
    is_test: NDArray[np.bool_]
    alice_input: NDArray[np.int_]
    alice_guess: NDArray[np.int_]
    bob_setting: NDArray[np.str_]
    bob_outcome: NDArray[np.str_]
    test_passed: NDArray[np.int_]
    bob_c: NDArray[np.int_]
    bob_y: NDArray[np.int_]
    bob_guess: NDArray[np.int_]
    abort_round: Optional[int] = None
    abort_reason: Optional[str] = None

    @property
    def aborted(self) -> bool:
        return self.abort_round is not None

    @property
    def rounds(self) -> int:
        return len(self.is_test)

    @property
    def payload_rounds(self) -> NDArray[np.int_]:
        return np.flatnonzero(~self.is_test)

    @property
    def checked_tests(self) -> int:
        return int(np.sum(self.test_passed >= 0))

    @property
    def failed_tests(self) -> int:
        return int(np.sum(self.test_passed == 0))

    def detection_rate(self) -> float:
        """Fraction of checked tests that failed."""
        return self.failed_tests / self.checked_tests if self.checked_tests else 0.0

    def correct_bits(self) -> NDArray[np.bool_]:
        """For payload rounds with a definite input: whether Bob's ``y`` equals ``x_c``."""
        rounds = self.payload_rounds
        rounds = rounds[(self.alice_input[rounds] >= 0) & (self.bob_c[rounds] >= 0)]
        bits = np.array([[int(b) for b in label] for label in INPUT_LABELS])
        x_c = bits[self.alice_input[rounds], self.bob_c[rounds]]
        return x_c == self.bob_y[rounds]

    def records(self) -> Iterator[Dict[str, Any]]:
        """One JSON-ready record per round."""
        for r in range(self.rounds):
            test = bool(self.is_test[r])
            record: Dict[str, Any] = {
                "round": r,
                "role": "test" if test else "payload",
                "alice_input": INPUT_LABELS[self.alice_input[r]] if self.alice_input[r] >= 0 else None,
                "bob_setting": str(self.bob_setting[r]),
                "bob_outcome": str(self.bob_outcome[r]),
                "bob_output": None if test else {"c": int(self.bob_c[r]), "y": int(self.bob_y[r])},
                "abort": self.abort_reason if r == self.abort_round else None,
            }
            if test:
                record["test_passed"] = None if self.test_passed[r] < 0 else bool(self.test_passed[r])
            if self.alice_guess[r] >= 0:
                record["alice_guess"] = int(self.alice_guess[r])
            if self.bob_guess[r] >= 0:
                record["bob_guess"] = INPUT_LABELS[self.bob_guess[r]]
            yield record

    @classmethod
    def from_records(
        cls,
        records: Sequence[Dict[str, Any]],
        config: ProtocolConfig,
        sender: str = "honest",
        receiver: str = "honest",
    ) -> "Transcript":
        """Rebuild a transcript from ``records()`` output."""
        n = len(records)

        def column(key: str, convert) -> NDArray[np.int_]:
            return np.array(
                [NO_VALUE if rec.get(key) is None else convert(rec[key]) for rec in records], dtype=int
            )

        outputs = [rec["bob_output"] or {"c": NO_VALUE, "y": NO_VALUE} for rec in records]
        abort = next(((rec["round"], rec["abort"]) for rec in records if rec.get("abort")), (None, None))
        return cls(
            config=config,
            sender=sender,
            receiver=receiver,
            is_test=np.array([rec["role"] == "test" for rec in records], dtype=bool),
            alice_input=column("alice_input", INPUT_LABELS.index),
            alice_guess=column("alice_guess", int),
            bob_setting=np.array([rec["bob_setting"] for rec in records]),
            bob_outcome=np.array([rec["bob_outcome"] for rec in records]),
            test_passed=column("test_passed", int),
            bob_c=np.array([o["c"] for o in outputs], dtype=int).reshape(n),
            bob_y=np.array([o["y"] for o in outputs], dtype=int).reshape(n),
            bob_guess=column("bob_guess", INPUT_LABELS.index),
            abort_round=abort[0],
            abort_reason=abort[1],
        )


def _draw_joint(
    tables: NDArray[np.float64], rows: NDArray[np.int_], rng: np.random.Generator
) -> Tuple[NDArray[np.int_], NDArray[np.int_]]:
    """Sample ``(record, outcome)`` pairs from tables of shape ``(rows, records, outcomes)``."""
    n_rows, n_records, n_outcomes = tables.shape
    flat = tables.reshape(n_rows, n_records * n_outcomes)
    draws = sample_from_table(flat, rows, rng)
    return draws // n_outcomes, draws % n_outcomes


DECLARED_BASIS = np.array([TEST_BASES.index(TEST_BASIS_FOR_INPUT[b]) for b in INPUT_LABELS])


def _test_povms() -> List[Povm]:
    return [product_basis_povm(basis) for basis in TEST_BASES]


def declared_test_table(sender: SenderStrategy) -> Tuple[NDArray[np.float64], NDArray[np.bool_]]:
    """Joint test statistics when Bob measures in the basis of the declared state.

    Returns:
        Tuple of the table ``P(declared k, outcome o | type)`` of shape
        ``(types, 4, 4)`` and the ``(4, 4)`` mask of outcomes that pass
    """
    povms = _test_povms()
    tables = np.stack([sender.declaration_table(p) for p in povms], axis=1)
    labels = np.array([p.labels for p in povms])
    passing = labels[DECLARED_BASIS] == np.array(STATE_LABELS)[:, None]
    return tables[:, DECLARED_BASIS, np.arange(4), :], passing


def _run_tests(
    config: ProtocolConfig,
    sender: SenderStrategy,
    types: NDArray[np.int_],
    transcript: Dict[str, NDArray],
) -> None:
    rounds = np.flatnonzero(transcript["is_test"])
    rng = role_stream(config.seed, "test-measurement")

    if config.test_mode == "declared":
        table, _ = declared_test_table(sender)
        declared, outcome = _draw_joint(table, types[rounds], rng)
        basis = DECLARED_BASIS[declared]
    else:
        # Bob fixes the basis before Alice declares
        tables = np.stack([sender.declaration_table(p) for p in _test_povms()], axis=1)
        basis = role_stream(config.seed, "bob-basis").integers(0, 2, len(rounds))
        declared, outcome = _draw_joint(
            tables.reshape(tables.shape[0] * 2, 4, -1), types[rounds] * 2 + basis, rng
        )

    labels = np.array([p.labels for p in _test_povms()])
    outcome_labels = labels[basis, outcome]
    expected = np.array(STATE_LABELS)[declared]
    checked = DECLARED_BASIS[declared] == basis
    passed = np.where(checked, (outcome_labels == expected).astype(int), NO_VALUE)

    transcript["alice_input"][rounds] = declared
    transcript["bob_setting"][rounds] = np.array(TEST_BASES)[basis]
    transcript["bob_outcome"][rounds] = outcome_labels
    transcript["test_passed"][rounds] = passed


def _run_payload(
    config: ProtocolConfig,
    sender: SenderStrategy,
    receiver: ReceiverStrategy,
    types: NDArray[np.int_],
    transcript: Dict[str, NDArray],
) -> None:
    rounds = np.flatnonzero(~transcript["is_test"])
    if config.randomize_orientation:
        orientation = role_stream(config.seed, "bob-orientation").integers(0, 2, len(rounds))
    else:
        orientation = np.zeros(len(rounds), dtype=int)

    povms = [receiver.payload_povm(o) for o in ORIENTATIONS]
    tables = np.stack([sender.payload_table(p) for p in povms], axis=1)
    n_types, _, n_records, n_outcomes = tables.shape
    record, outcome = _draw_joint(
        tables.reshape(n_types * 2, n_records, n_outcomes),
        types[rounds] * 2 + orientation,
        role_stream(config.seed, "payload-measurement"),
    )

    readings = [[receiver.interpret(label, o) for label in p.labels] for o, p in zip(ORIENTATIONS, povms)]
    lookup = {
        key: np.array([[getattr(reading, key) for reading in row] for row in readings])
        for key in ("c", "y", "guess")
    }

    if sender.record_kind == "input":
        transcript["alice_input"][rounds] = record
    else:
        transcript["alice_guess"][rounds] = record
    transcript["bob_setting"][rounds] = np.array(ORIENTATIONS)[orientation]
    transcript["bob_outcome"][rounds] = np.array([p.labels for p in povms])[orientation, outcome]
    transcript["bob_c"][rounds] = lookup["c"][orientation, outcome]
    transcript["bob_y"][rounds] = lookup["y"][orientation, outcome]
    transcript["bob_guess"][rounds] = lookup["guess"][orientation, outcome]


def run_protocol(
    config: ProtocolConfig,
    sender: Optional[SenderStrategy] = None,
    receiver: Optional[ReceiverStrategy] = None,
) -> Transcript:
    """Simulate one run of the protocol.

    Args:
        config: Run parameters
        sender: Alice's strategy, honest by default
        receiver: Bob's strategy, honest by default

    Returns:
        Transcript of every round; a failed test marks the run as aborted
    """
    sender = sender or ClassicalSender.honest()
    receiver = receiver or HonestReceiver()
    n = config.total_rounds
    logger.info(
        f"Running {n} rounds ({config.test_count} tests, {config.test_mode} mode) "
        f"with sender={sender.name}, receiver={receiver.name}"
    )

    types = sender.sample_types(role_stream(config.seed, "alice"), n)
    is_test = np.zeros(n, dtype=bool)
    is_test[role_stream(config.seed, "bob-select").choice(n, size=config.test_count, replace=False)] = True

    columns: Dict[str, NDArray] = {
        "is_test": is_test,
        "alice_input": np.full(n, NO_VALUE),
        "alice_guess": np.full(n, NO_VALUE),
        "bob_setting": np.full(n, "", dtype="<U2"),
        "bob_outcome": np.full(n, "", dtype="<U4"),
        "test_passed": np.full(n, NO_VALUE),
        "bob_c": np.full(n, NO_VALUE),
        "bob_y": np.full(n, NO_VALUE),
        "bob_guess": np.full(n, NO_VALUE),
    }
    _run_tests(config, sender, types, columns)
    _run_payload(config, sender, receiver, types, columns)

    abort_round, abort_reason = None, None
    failed = np.flatnonzero(columns["test_passed"] == 0)
    if failed.size:
        abort_round = int(failed[0])
        declared = STATE_LABELS[columns["alice_input"][abort_round]]
        abort_reason = (
            f"test failed: declared |{declared}>, "
            f"measured {columns['bob_outcome'][abort_round]}"
        )
        logger.info(f"Protocol aborted at round {abort_round}: {abort_reason}")

    return Transcript(
        config=config,
        sender=sender.name,
        receiver=receiver.name,
        abort_round=abort_round,
        abort_reason=abort_reason,
        **columns,
    )


def run_honest(config: ProtocolConfig) -> Transcript:
    """Both parties follow the protocol."""
    return run_protocol(config, ClassicalSender.honest(), HonestReceiver())


def transcript_summary(transcript: Transcript) -> Dict[str, Any]:
    """Headline rates of a run as a JSON-ready dict."""
    summary: Dict[str, Any] = {
        "rounds": transcript.rounds,
        "tests": int(transcript.is_test.sum()),
        "checked_tests": transcript.checked_tests,
        "failed_tests": transcript.failed_tests,
        "detection_rate": transcript.detection_rate(),
        "aborted": transcript.aborted,
        "abort_round": transcript.abort_round,
    }
    correct = transcript.correct_bits()
    if correct.size:
        summary["correct_bit_rate"] = float(correct.mean())
        summary["incorrect_bits"] = int((~correct).sum())
    payload = transcript.payload_rounds
    guesses: List[Tuple[str, NDArray[np.bool_]]] = []
    bob = payload[(transcript.bob_guess[payload] >= 0) & (transcript.alice_input[payload] >= 0)]
    if bob.size:
        guesses.append(("bob_cheat", transcript.bob_guess[bob] == transcript.alice_input[bob]))
    alice = payload[transcript.alice_guess[payload] >= 0]
    if alice.size:
        guesses.append(("alice_cheat", transcript.alice_guess[alice] == transcript.bob_c[alice]))
    for key, hits in guesses:
        rate = float(hits.mean())
        summary[f"{key}_rate"] = rate
        summary[f"{key}_sigma"] = float(np.sqrt(rate * (1 - rate) / hits.size))
    return summary
