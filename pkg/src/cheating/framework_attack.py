"""Alice's generic attack on any protocol in the framework.

Instead of committing to one of two inputs that differ in a single bit,
Alice runs both in superposition, controlled on a private qubit ``D``. Up
to a rotation on her side, Bob then holds half of
``(|phi_a>|0>_D + |phi_b>|1>_D) / sqrt(2)``, where ``|phi_a>`` and ``|phi_b>``
are purifications of his honest outputs with maximal overlap. Bob's
outcome class ``c`` leaves ``D`` in one of two states, and Alice guesses
``c`` by discriminating them.
"""

from typing import Dict, Tuple

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel

from src.linalg.operations import eig_hermitian, fidelity, maximal_overlap_purifications, trace_distance
from src.measurements.state_sets import INPUT_LABELS
from src.protocol.framework import GenericFramework, star_class
from src.utils.logger import get_logger

logger = get_logger(__name__)

ZERO_PROBABILITY = 1e-12


class AliceAttackReport(BaseModel):
    """Quantities of the superposition attack on one pair of inputs."""

    framework: str
    pair: Tuple[str, str]
    fidelity: float
    distinguishability: float
    guess_probability: float
    class_probabilities: Tuple[float, float]
    no_signalling_deviation: float
    undetectability_deviation: float
    correctness_deviation: float


def _differing_bit(pair: Tuple[str, str]) -> int:
    first, second = pair
    if first not in INPUT_LABELS or second not in INPUT_LABELS:
        raise ValueError(f"Inputs must be among {INPUT_LABELS}, got {pair}")
    diff = [i for i in range(2) if first[i] != second[i]]
    if len(diff) != 1:
        raise ValueError(f"Inputs {pair} must differ in exactly one bit")
    return diff[0]


def _purification_matrices(fw: GenericFramework, pair: Tuple[str, str]) -> Tuple[NDArray, NDArray]:
    """Purifications reshaped to ``(system, purifier)`` matrices."""
    sigma_a, sigma_b = (fw.output_state(bits) for bits in pair)
    phi_a, phi_b = maximal_overlap_purifications(sigma_a, sigma_b)
    d = sigma_a.dim
    return phi_a.amplitudes.reshape(d, d), phi_b.amplitudes.reshape(d, d)


def _register_state(phis: Tuple[NDArray, NDArray], effect: NDArray) -> NDArray[np.complex128]:
    """Unnormalized ``D`` state after Bob's effect: entry ``[j, i] = <phi_i|Pi|phi_j> / 2``."""
    mu = np.zeros((2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            mu[j, i] = 0.5 * np.vdot(phis[i], effect @ phis[j])
    return mu


def framework_alice_attack(
    fw: GenericFramework, pair: Tuple[str, str] = ("00", "01")
) -> AliceAttackReport:
    """Run the superposition attack on ``fw`` for two inputs differing in one bit.

    Args:
        fw: Protocol in framework form
        pair: Alice's two inputs

    Returns:
        Report with the trace distance of ``D`` given ``c``, Alice's guess
        probability and the no-signalling and undetectability deviations
    """
    _differing_bit(pair)
    phis = _purification_matrices(fw, pair)
    d = phis[0].shape[0]
    povm = fw.final_povm

    mu: Dict[int, NDArray[np.complex128]] = {0: np.zeros((2, 2), dtype=complex), 1: np.zeros((2, 2), dtype=complex)}
    total = np.zeros((2, 2), dtype=complex)
    for label, effect in zip(povm.labels, povm.effects):
        # The effect acts on Bob's system only
        state = _register_state(phis, effect)
        mu[star_class(label)] += state
        total += state
    unmeasured = _register_state(phis, np.eye(d))

    probabilities = tuple(float(np.trace(mu[c]).real) for c in (0, 1))
    if min(probabilities) > ZERO_PROBABILITY:
        distinguishability = trace_distance(mu[0] / probabilities[0], mu[1] / probabilities[1])
    else:
        distinguishability = 0.0
    values, _ = eig_hermitian(mu[0] - mu[1])
    guess = 0.5 * (1 + float(np.sum(np.abs(values))))

    honest_mixture = 0.5 * (fw.output_state(pair[0]).matrix + fw.output_state(pair[1]).matrix)
    bob_marginal = 0.5 * sum(phi @ phi.conj().T for phi in phis)

    report = AliceAttackReport(
        framework=fw.name,
        pair=pair,
        fidelity=fidelity(fw.output_state(pair[0]), fw.output_state(pair[1])),
        distinguishability=distinguishability,
        guess_probability=min(guess, 1.0),
        class_probabilities=probabilities,
        no_signalling_deviation=float(np.max(np.abs(total - unmeasured))),
        undetectability_deviation=float(np.max(np.abs(bob_marginal - honest_mixture))),
        correctness_deviation=fw.correctness_deviation(),
    )
    logger.debug(f"Attack on {fw.name} {pair}: {report}")
    return report


def annihilation_residual(fw: GenericFramework) -> float:
    """Largest ``||(Pi_z (x) 1)|phi>||`` over outcomes that never occur on an honest output.

    ``|phi>`` is the canonical purification of each honest output. An outcome
    with zero probability on a state must also annihilate its purification.
    """
    worst = 0.0
    for bits in INPUT_LABELS:
        sigma = fw.output_state(bits)
        phi, _ = maximal_overlap_purifications(sigma, sigma)
        phi_matrix = phi.amplitudes.reshape(sigma.dim, sigma.dim)
        for effect in fw.final_povm.effects:
            if sigma.expectation(effect) < ZERO_PROBABILITY:
                worst = max(worst, float(np.linalg.norm(effect @ phi_matrix)))
    return worst
