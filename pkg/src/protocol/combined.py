"""Mixing the USE protocol with a trivial one through a fair coin.

With probability ``p`` the parties run the USE protocol, otherwise Alice
simply sends both bits, where Bob always wins and Alice can only guess.
The coin is ideal and drawn from the shared seed.
"""

from typing import Any, Dict, Literal, Optional, Tuple

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, Field

from src.cheating.alice import EntangledSender, alice_cheat_probability
from src.cheating.bob import bob_cheat_closed_form, bob_guess_map, bob_product_povm
from src.experiments.monte_carlo import MonteCarloRunner, binomial_estimate
from src.measurements.povm import born_table, sample_from_table
from src.measurements.state_sets import protocol_state_set
from src.measurements.use import use_measurement_povm, use_outcome_map
from src.utils.logger import get_logger

logger = get_logger(__name__)

TRIVIAL_ALICE = 0.5
TRIVIAL_BOB = 1.0


def combined_alice(p: float, alice_value: float = 0.75) -> float:
    """``p A + (1 - p) / 2``."""
    return p * alice_value + (1 - p) * TRIVIAL_ALICE


def combined_bob(p: float, bob_value: Optional[float] = None) -> float:
    """``p B + (1 - p)``."""
    bob_value = bob_cheat_closed_form() if bob_value is None else bob_value
    return p * bob_value + (1 - p) * TRIVIAL_BOB


def equalizing_mix_probability() -> Tuple[float, float]:
    """Mixing probability at which both cheat probabilities are equal.

    Returns:
        ``(p, value)`` with ``p = 4 / (7 - 2 sqrt(2))`` and ``value = 1/2 + p/4``
    """
    p = 4 / (7 - 2 * np.sqrt(2))
    return float(p), float(0.5 + p / 4)


def trivial_mixture() -> Dict[str, float]:
    """Mix ``(A=1, B=1/2)`` with ``(A=1/2, B=1)`` at ``p = 1/2``.

    Both cheat probabilities reach 3/4, and each party is certain of
    winning half of the time.
    """
    p = 0.5
    return {
        "p": p,
        "alice": p * 1.0 + (1 - p) * 0.5,
        "bob": p * 0.5 + (1 - p) * 1.0,
        "certainty_probability": p,
    }


class CombinedReport(BaseModel):
    """Analytic and simulated cheat probabilities of the mixed protocol."""

    p: float = Field(ge=0.0, le=1.0)
    strategy: str
    analytic_alice: float
    analytic_bob: float
    runs: int
    mc_alice: Optional[float] = None
    mc_alice_sigma: Optional[float] = None
    mc_bob: Optional[float] = None
    mc_bob_sigma: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump()


def _alice_task(p: float):
    sender = EntangledSender()
    povm = use_measurement_povm()
    classes = np.array([use_outcome_map()[label].c for label in povm.labels])
    payload = sender.payload_table(povm)[0].reshape(1, -1)
    n_outcomes = len(povm)

    def task(rng: np.random.Generator, n: int) -> NDArray[np.int64]:
        use_protocol = rng.random(n) < p
        draws = sample_from_table(payload, np.zeros(n, dtype=int), rng)
        hits_use = (draws // n_outcomes) == classes[draws % n_outcomes]
        # In the trivial protocol Alice learns nothing and flips a coin
        hits_trivial = rng.integers(0, 2, n) == rng.integers(0, 2, n)
        return np.array([np.where(use_protocol, hits_use, hits_trivial).sum()])

    return task


def _bob_task(p: float):
    state_set = protocol_state_set()
    povm = bob_product_povm()
    table = born_table(state_set.states, povm)
    guesses = bob_guess_map(povm, state_set)
    guess_index = np.array([state_set.labels.index(guesses[label]) for label in povm.labels])

    def task(rng: np.random.Generator, n: int) -> NDArray[np.int64]:
        use_protocol = rng.random(n) < p
        inputs = rng.integers(0, 4, n)
        hits_use = guess_index[sample_from_table(table, inputs, rng)] == inputs
        return np.array([np.where(use_protocol, hits_use, True).sum()])

    return task


async def run_combined(
    p: float,
    strategy: Literal["alice", "bob", "both"] = "both",
    runs: int = 100_000,
    seed: int = 0,
    runner: Optional[MonteCarloRunner] = None,
) -> CombinedReport:
    """Cheat probabilities of the mixed protocol, closed form and Monte Carlo.

    Args:
        p: Probability that the coin selects the USE protocol
        strategy: Which party cheats in the simulation
        runs: Monte Carlo rounds per cheating party
        seed: Root seed
        runner: Batch runner, default settings when omitted

    Returns:
        Report with analytic values and simulated estimates with sigma
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"Mixing probability must lie in [0, 1], got {p}")
    runner = runner or MonteCarloRunner()

    report = CombinedReport(
        p=p,
        strategy=strategy,
        analytic_alice=combined_alice(p, alice_cheat_probability(EntangledSender().params)),
        analytic_bob=combined_bob(p),
        runs=runs,
    )
    if strategy in ("alice", "both"):
        hits = int((await runner.run(_alice_task(p), runs, seed, "combined-alice"))[0])
        report.mc_alice, report.mc_alice_sigma = binomial_estimate(hits, runs)
    if strategy in ("bob", "both"):
        hits = int((await runner.run(_bob_task(p), runs, seed, "combined-bob"))[0])
        report.mc_bob, report.mc_bob_sigma = binomial_estimate(hits, runs)

    logger.info(
        f"Combined protocol at p={p:.5f}: Alice {report.analytic_alice:.5f}, Bob {report.analytic_bob:.5f}"
    )
    return report
