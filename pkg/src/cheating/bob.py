"""Bob's optimal cheat: guess both of Alice's bits with a minimum-error measurement.

Bob measures qubit 1 in the basis ``zeta`` and qubit 2 in ``xi``, both
rotated by pi/8 from the computational basis. Every outcome points to the
input that makes it most likely.
"""

from dataclasses import dataclass
from itertools import product
from typing import Dict, Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from src.cheating.reports import CheatReport
from src.experiments.monte_carlo import MonteCarloRunner, binomial_estimate
from src.linalg.operations import kron
from src.linalg.states import SINGLE_QUBIT_KETS
from src.measurements.discrimination import RESIDUAL_LABEL, srm_construct, srm_success_probability
from src.measurements.povm import Povm, born_table, sample_from_table
from src.measurements.state_sets import INPUT_LABELS, SymmetricStateSet, protocol_state_set
from src.protocol.engine import PayloadReading, ReceiverStrategy
from src.utils.logger import get_logger

logger = get_logger(__name__)

ALPHA = np.cos(np.pi / 8)
BETA = np.sin(np.pi / 8)

PRODUCT_LABELS: Tuple[str, ...] = ("z0x0", "z0x1", "z1x0", "z1x1")

Basis = Tuple[NDArray[np.complex128], NDArray[np.complex128]]


def bob_srm_bases() -> Tuple[Basis, Basis]:
    """The two single-qubit bases ``(zeta_0, zeta_1)`` and ``(xi_0, xi_1)``."""
    zero, one = SINGLE_QUBIT_KETS["0"], SINGLE_QUBIT_KETS["1"]
    zeta = (ALPHA * zero + BETA * one, BETA * zero - ALPHA * one)
    xi = (ALPHA * zero - BETA * one, BETA * zero + ALPHA * one)
    return zeta, xi


def bob_product_povm() -> Povm:
    """Projective measurement ``zeta (x) xi`` with labels ``z0x0 z0x1 z1x0 z1x1``."""
    zeta, xi = bob_srm_bases()
    vectors = [kron(z, x) for z, x in product(zeta, xi)]
    return Povm.from_vectors(PRODUCT_LABELS, vectors)


def bob_guess_map(
    povm: Optional[Povm] = None, state_set: Optional[SymmetricStateSet] = None
) -> Dict[str, str]:
    """Most likely input for every outcome, ties broken by input order.

    Args:
        povm: Bob's measurement, the product measurement by default
        state_set: Alice's encoding, the protocol states by default

    Returns:
        Outcome label to input bits
    """
    povm = povm or bob_product_povm()
    state_set = state_set or protocol_state_set()
    table = born_table(state_set.states, povm)
    return {label: state_set.labels[int(np.argmax(table[:, i]))] for i, label in enumerate(povm.labels)}


def bob_guess_success(povm: Optional[Povm] = None) -> float:
    """Average probability that the frozen guess map names Alice's input."""
    povm = povm or bob_product_povm()
    state_set = protocol_state_set()
    guesses = bob_guess_map(povm, state_set)
    table = born_table(state_set.states, povm)
    return float(
        sum(
            table[state_set.labels.index(guesses[label]), i] / len(state_set.states)
            for i, label in enumerate(povm.labels)
        )
    )


def bob_cheat_closed_form() -> float:
    """``(1 + 1/sqrt(2))^2 / 4``, about 0.72855."""
    return float((1 + 1 / np.sqrt(2)) ** 2 / 4)


class SrmReceiver(ReceiverStrategy):
    """Cheating Bob: product measurement instead of USE, reporting ``c = 0`` and his guess of ``x_0``."""

    name = "srm-cheat"

    def __init__(self) -> None:
        self.povm = bob_product_povm()
        self.guesses = bob_guess_map(self.povm)

    def payload_povm(self, orientation: str) -> Povm:
        return self.povm

    def interpret(self, label: str, orientation: str) -> PayloadReading:
        guess = self.guesses[label]
        return PayloadReading(c=0, y=int(guess[0]), guess=INPUT_LABELS.index(guess))


@dataclass(frozen=True)
class BasesComparison:
    """Product measurement versus the square-root measurement on the protocol states.

    Attributes:
        product_success: Success of the product measurement with its guess map
        srm_success: Success of the square-root measurement
        effect_deviation: Largest entry-wise difference between each product
            effect compressed onto the span of the states and the SRM effect
            for the same guess
    """

    product_success: float
    srm_success: float
    effect_deviation: float


def compare_bases_to_srm() -> BasesComparison:
    state_set = protocol_state_set()
    densities = state_set.density_matrices()
    srm = srm_construct(densities, labels=state_set.labels)
    product_povm = bob_product_povm()
    guesses = bob_guess_map(product_povm, state_set)

    support = np.eye(product_povm.dim, dtype=complex)
    if RESIDUAL_LABEL in srm.labels:
        support = support - srm.effect(RESIDUAL_LABEL)

    deviation = 0.0
    for label in product_povm.labels:
        compressed = support @ product_povm.effect(label) @ support
        deviation = max(deviation, float(np.max(np.abs(compressed - srm.effect(guesses[label])))))

    comparison = BasesComparison(
        product_success=bob_guess_success(product_povm),
        srm_success=srm_success_probability(densities),
        effect_deviation=deviation,
    )
    logger.debug(f"Product vs SRM: {comparison}")
    return comparison


async def bob_cheat_simulate(
    runs: int, seed: int, runner: Optional[MonteCarloRunner] = None
) -> CheatReport:
    """Monte Carlo estimate of Bob's chance to guess both bits against an honest Alice.

    Args:
        runs: Number of payload rounds
        seed: Root seed
        runner: Batch runner, default settings when omitted

    Returns:
        Report with per-input success rates in ``details``
    """
    runner = runner or MonteCarloRunner()
    state_set = protocol_state_set()
    povm = bob_product_povm()
    table = born_table(state_set.states, povm)
    guesses = bob_guess_map(povm, state_set)
    guess_index = np.array([state_set.labels.index(guesses[label]) for label in povm.labels])

    def task(rng: np.random.Generator, n: int) -> NDArray[np.int64]:
        inputs = rng.integers(0, 4, n)
        outcomes = sample_from_table(table, inputs, rng)
        hits = guess_index[outcomes] == inputs
        return np.concatenate(
            [
                np.bincount(inputs[hits], minlength=4),
                np.bincount(inputs, minlength=4),
            ]
        )

    counts = await runner.run(task, runs, seed, "bob-cheat")
    hits, totals = counts[:4], counts[4:]
    estimate, sigma = binomial_estimate(int(hits.sum()), runs)
    details = {
        f"success_{label}": float(hits[k] / totals[k]) if totals[k] else 0.0
        for k, label in enumerate(state_set.labels)
    }
    return CheatReport(
        strategy="bob-srm",
        estimate=estimate,
        sigma=sigma,
        closed_form=bob_cheat_closed_form(),
        runs=runs,
        details=details,
    )
