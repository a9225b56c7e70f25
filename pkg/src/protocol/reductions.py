"""Semi-random OT -> random OT -> 1-2 OT.

Random OT is the semi-random protocol run with uniformly random inputs, so
the first step only relabels outputs. The second step uses one random-OT
instance per 1-2 OT: Bob announces ``d = b XOR c``, Alice replies with
``m_j = z_j XOR x_{j XOR d}`` and Bob outputs ``y' = m_b XOR y``. For
``b = c`` this is plain masking ``(z_0 XOR x_0, z_1 XOR x_1)`` with
``y' = z_c XOR x_c XOR y``.
"""

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
from numpy.typing import NDArray

from src.measurements.state_sets import INPUT_LABELS
from src.protocol.engine import NO_VALUE, Transcript
from src.utils.logger import get_logger

logger = get_logger(__name__)

BitInput = Union[int, NDArray[np.int_]]

INPUT_BITS = np.array([[int(b) for b in label] for label in INPUT_LABELS])


@dataclass(frozen=True)
class OtOutputs:
    """Outputs of many OT instances, one entry per instance.

    Attributes:
        mode: ``"random-ot"`` or ``"one-two-ot"``
        alice0: Alice's first bit, ``-1`` when she holds no definite bit
        alice1: Alice's second bit
        bob_choice: ``c`` for random OT, ``b`` for 1-2 OT
        bob_value: Bob's output bit
        bob_guess0: Cheating Bob's guess of Alice's first bit, ``-1`` otherwise
        bob_guess1: Cheating Bob's guess of Alice's second bit
        alice_guess: Cheating Alice's guess of ``bob_choice``, ``-1`` otherwise
        aborted: Whether the underlying run aborted
        abort_reason: Reason carried over from the run
    """

    mode: str
    alice0: NDArray[np.int_]
    alice1: NDArray[np.int_]
    bob_choice: NDArray[np.int_]
    bob_value: NDArray[np.int_]
    bob_guess0: NDArray[np.int_]
    bob_guess1: NDArray[np.int_]
    alice_guess: NDArray[np.int_]
    aborted: bool = False
    abort_reason: Optional[str] = None

    def __len__(self) -> int:
        return len(self.bob_choice)

    def correct(self) -> NDArray[np.bool_]:
        """Whether Bob's output equals Alice's bit at his choice, for definite bits."""
        bits = np.stack([self.alice0, self.alice1], axis=1)
        chosen = bits[np.arange(len(self)), self.bob_choice]
        return (chosen == self.bob_value)[chosen >= 0]

    def bob_cheat_hits(self) -> NDArray[np.bool_]:
        """Whether a cheating Bob guessed both of Alice's bits."""
        guessed = (self.bob_guess0 >= 0) & (self.alice0 >= 0)
        return ((self.bob_guess0 == self.alice0) & (self.bob_guess1 == self.alice1))[guessed]

    def alice_cheat_hits(self) -> NDArray[np.bool_]:
        """Whether a cheating Alice guessed Bob's choice bit."""
        guessed = self.alice_guess >= 0
        return (self.alice_guess == self.bob_choice)[guessed]

    @classmethod
    def aborted_run(cls, mode: str, reason: Optional[str]) -> "OtOutputs":
        empty = np.zeros(0, dtype=int)
        return cls(mode, empty, empty, empty, empty, empty, empty, empty, True, reason)


def reduce_to_random_ot(semi_random_run: Transcript) -> OtOutputs:
    """Random OT outputs from a semi-random run with uniform inputs.

    Args:
        semi_random_run: Completed protocol transcript

    Returns:
        One random-OT instance per payload round, or an aborted result
    """
    if semi_random_run.aborted:
        logger.info(f"Semi-random run aborted, propagating: {semi_random_run.abort_reason}")
        return OtOutputs.aborted_run("random-ot", semi_random_run.abort_reason)

    rounds = semi_random_run.payload_rounds
    inputs = semi_random_run.alice_input[rounds]
    definite = inputs >= 0
    alice = np.full((len(rounds), 2), NO_VALUE)
    alice[definite] = INPUT_BITS[inputs[definite]]

    guesses = semi_random_run.bob_guess[rounds]
    bob_guess = np.full((len(rounds), 2), NO_VALUE)
    bob_guess[guesses >= 0] = INPUT_BITS[guesses[guesses >= 0]]

    return OtOutputs(
        mode="random-ot",
        alice0=alice[:, 0],
        alice1=alice[:, 1],
        bob_choice=semi_random_run.bob_c[rounds],
        bob_value=semi_random_run.bob_y[rounds],
        bob_guess0=bob_guess[:, 0],
        bob_guess1=bob_guess[:, 1],
        alice_guess=semi_random_run.alice_guess[rounds],
    )


def _broadcast(value: BitInput, n: int) -> NDArray[np.int_]:
    out = np.broadcast_to(np.asarray(value, dtype=int), (n,)).copy()
    if np.any((out != 0) & (out != 1)):
        raise ValueError("Bits must be 0 or 1")
    return out


def _mask(bits: NDArray[np.int_], key: NDArray[np.int_]) -> NDArray[np.int_]:
    return np.where(bits >= 0, bits ^ key, NO_VALUE)


def reduce_to_one_two_ot(
    rot_run: OtOutputs,
    alice_inputs: Tuple[BitInput, BitInput],
    bob_choice: Optional[BitInput] = None,
) -> OtOutputs:
    """1-2 OT from random OT by one round of classical messages.

    Args:
        rot_run: Random OT instances
        alice_inputs: Alice's bits ``(z_0, z_1)``, scalars or one per instance
        bob_choice: Bob's choice ``b``; ``None`` keeps ``b = c``, which is the
            plain masking construction

    Returns:
        1-2 OT outputs with ``bob_value = y'``. A sender without definite
        random-OT bits masks with zeros.
    """
    if rot_run.aborted:
        return OtOutputs.aborted_run("one-two-ot", rot_run.abort_reason)

    n = len(rot_run)
    z0, z1 = (_broadcast(z, n) for z in alice_inputs)
    c = rot_run.bob_choice
    b = c.copy() if bob_choice is None else _broadcast(bob_choice, n)
    d = b ^ c

    x0 = np.where(rot_run.alice0 >= 0, rot_run.alice0, 0)
    x1 = np.where(rot_run.alice1 >= 0, rot_run.alice1, 0)
    m0 = z0 ^ np.where(d == 0, x0, x1)
    m1 = z1 ^ np.where(d == 0, x1, x0)
    y_prime = np.where(b == 0, m0, m1) ^ rot_run.bob_value

    g0 = np.where(d == 0, rot_run.bob_guess0, rot_run.bob_guess1)
    g1 = np.where(d == 0, rot_run.bob_guess1, rot_run.bob_guess0)

    return OtOutputs(
        mode="one-two-ot",
        alice0=z0,
        alice1=z1,
        bob_choice=b,
        bob_value=y_prime,
        bob_guess0=_mask(g0, m0),
        bob_guess1=_mask(g1, m1),
        alice_guess=np.where(rot_run.alice_guess >= 0, rot_run.alice_guess ^ d, NO_VALUE),
    )
