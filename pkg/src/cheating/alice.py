"""Alice's optimal cheat: entangle the sent qubits with a private register.

Alice prepares ``a|00>|0> + b|++>|1> + c|11>|2> + d|-->|3>`` with Bob's two
qubits first and her four-level register last. Measuring the register in
the computational basis collapses Bob's qubits onto a protocol state she can
declare, so every test passes. On payload rounds Bob's USE outcome leaves
her register in one of two states depending on ``c``, which she
discriminates with the Helstrom measurement.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import OptimizeResult, minimize
from tenacity import RetryCallState, Retrying, retry_if_result, stop_after_attempt

from src.cheating.reports import CheatReport
from src.config import get_config
from src.exceptions import InvalidStateError
from src.experiments.monte_carlo import MonteCarloRunner, binomial_estimate
from src.linalg.states import SQRT_HALF, DensityMatrix, StateVector
from src.measurements.discrimination import helstrom_discriminate
from src.measurements.povm import Povm, sample_from_table
from src.measurements.state_sets import protocol_state_set
from src.measurements.use import use_measurement_povm, use_outcome_map
from src.protocol.engine import SenderStrategy, declared_test_table
from src.utils.logger import get_logger
from src.utils.random_streams import role_stream

logger = get_logger(__name__)

NORM_ATOL = 1e-10
CERTAINTY_ATOL = 1e-12


@dataclass(frozen=True)
class CheatStateParams:
    """Amplitudes of Alice's cheating state.

    Attributes:
        a: Weight of ``|00>_B |0>_A``
        b: Weight of ``|++>_B |1>_A``
        c: Weight of ``|11>_B |2>_A``
        d: Weight of ``|-->_B |3>_A``
    """

    a: complex
    b: complex = 0j
    c: complex = 0j
    d: complex = 0j

    def __post_init__(self) -> None:
        norm = float(np.sum(np.abs(self.amplitudes) ** 2))
        if abs(norm - 1.0) > NORM_ATOL:
            raise InvalidStateError(f"Cheat amplitudes have squared norm {norm}, expected 1")

    @property
    def amplitudes(self) -> NDArray[np.complex128]:
        return np.array([self.a, self.b, self.c, self.d], dtype=complex)

    @property
    def balance(self) -> float:
        """``|a|^2 + |c|^2``; the cheat is optimal when this equals 1/2."""
        return float(abs(self.a) ** 2 + abs(self.c) ** 2)

    @classmethod
    def optimal(cls) -> "CheatStateParams":
        """``a = b = 1/sqrt(2)``, the state Alice prepares in the experiment."""
        return cls(SQRT_HALF, SQRT_HALF)

    @classmethod
    def from_real_vector(cls, x: NDArray[np.float64]) -> "CheatStateParams":
        """Normalized parameters from eight reals (real and imaginary parts in turn)."""
        z = np.asarray(x, dtype=float).reshape(4, 2) @ np.array([1, 1j])
        norm = np.linalg.norm(z)
        if norm == 0:
            raise InvalidStateError("Cannot normalize the zero vector")
        return cls(*(z / norm))


def cheat_state(params: CheatStateParams) -> StateVector:
    """The joint state on Bob's two qubits and Alice's register, in that order."""
    states = protocol_state_set().states
    amplitudes = sum(
        np.kron(state.amplitudes, np.eye(4)[k]) * amp
        for k, (state, amp) in enumerate(zip(states, params.amplitudes))
    )
    return StateVector(amplitudes, dims=(2, 2, 4))


def _register_states(params: CheatStateParams, povm: Povm) -> List[NDArray[np.complex128]]:
    """Unnormalized register state left by each of Bob's outcomes."""
    psi = cheat_state(params).amplitudes.reshape(4, 4)
    return [psi.T @ effect.T @ psi.conj() for effect in povm.effects]


def alice_conditional_states(
    params: CheatStateParams, orientation: str = "zx"
) -> Tuple[DensityMatrix, DensityMatrix, Tuple[float, float]]:
    """Alice's register state given Bob's ``c``.

    Args:
        params: Cheat amplitudes
        orientation: Bob's USE orientation

    Returns:
        Tuple of (rho_0, rho_1, (P(c=0), P(c=1)))
    """
    povm = use_measurement_povm(orientation)
    meanings = use_outcome_map(orientation)
    sums = [np.zeros((4, 4), dtype=complex), np.zeros((4, 4), dtype=complex)]
    for label, state in zip(povm.labels, _register_states(params, povm)):
        sums[meanings[label].c] += state

    priors = tuple(float(np.trace(m).real) for m in sums)
    rho0, rho1 = (DensityMatrix((m + m.conj().T) / (2 * p), dims=(4,)) for m, p in zip(sums, priors))
    return rho0, rho1, priors


def alice_cheat_probability(params: CheatStateParams) -> float:
    """Closed form ``(1 + sqrt((|a|^2 + |c|^2)(|b|^2 + |d|^2))) / 2``."""
    u = params.balance
    return float(0.5 * (1 + np.sqrt(max(u * (1 - u), 0.0))))


def alice_helstrom(params: CheatStateParams) -> Tuple[Povm, float]:
    """Alice's optimal guess of ``c`` and its success probability."""
    rho0, rho1, priors = alice_conditional_states(params)
    return helstrom_discriminate(rho0, rho1, prior0=priors[0])


class EntangledSender(SenderStrategy):
    """Alice holds a register entangled with the qubits she sends.

    On test rounds she measures the register in the computational basis and
    declares the matching input. On payload rounds she applies her Helstrom
    measurement, tuned to the default USE orientation, and records a guess
    of ``c``.
    """

    record_kind = "guess"

    def __init__(self, params: Optional[CheatStateParams] = None):
        self.params = params or CheatStateParams.optimal()
        self.name = "entangled-cheat"
        self.guess_povm, _ = alice_helstrom(self.params)
        self._psi = cheat_state(self.params).amplitudes.reshape(4, 4)

    @property
    def type_weights(self) -> NDArray[np.float64]:
        return np.ones(1)

    def declaration_table(self, povm: Povm) -> NDArray[np.float64]:
        table = np.zeros((1, 4, len(povm)))
        for k in range(4):
            column = self._psi[:, k]
            table[0, k] = [float(np.vdot(column, effect @ column).real) for effect in povm.effects]
        return np.clip(table, 0.0, None)

    def payload_table(self, povm: Povm) -> NDArray[np.float64]:
        register = _register_states(self.params, povm)
        table = np.array(
            [[float(np.trace(g @ r).real) for r in register] for g in self.guess_povm.effects]
        )
        return np.clip(table, 0.0, None)[None]


@dataclass(frozen=True)
class CertaintyProfile:
    """How often Alice's outcome pins down ``c`` with certainty.

    Attributes:
        certain_fraction: Probability of an outcome that excludes one value of ``c``
        accuracy_otherwise: Guess accuracy conditioned on the remaining outcomes
    """

    certain_fraction: float
    accuracy_otherwise: float
    certain_outcomes: Tuple[str, ...] = field(default=())


def guess_class_table(sender: EntangledSender) -> NDArray[np.float64]:
    """``P(guess g, c)`` for the default orientation."""
    povm = use_measurement_povm()
    meanings = use_outcome_map()
    joint = sender.payload_table(povm)[0]
    table = np.zeros((2, 2))
    for i, label in enumerate(povm.labels):
        table[:, meanings[label].c] += joint[:, i]
    return table


def alice_certainty_profile(params: Optional[CheatStateParams] = None) -> CertaintyProfile:
    sender = EntangledSender(params)
    table = guess_class_table(sender)
    certain = table.min(axis=1) <= CERTAINTY_ATOL
    uncertain_mass = table[~certain].sum()
    return CertaintyProfile(
        certain_fraction=float(table[certain].sum()),
        accuracy_otherwise=(
            float(table[~certain][:, np.flatnonzero(~certain)].trace() / uncertain_mass)
            if uncertain_mass > 0
            else 0.0
        ),
        certain_outcomes=tuple(sender.guess_povm.labels[g] for g in np.flatnonzero(certain)),
    )


async def alice_cheat_simulate(
    params: Optional[CheatStateParams],
    runs: int,
    seed: int,
    runner: Optional[MonteCarloRunner] = None,
) -> CheatReport:
    """Joint simulation of Alice's cheat against an honest Bob.

    Every run samples one payload round (Bob's USE outcome together with
    Alice's guess) and one test round (Alice's declaration together with
    Bob's test outcome).

    Args:
        params: Cheat amplitudes, the optimal state when ``None``
        runs: Number of runs
        seed: Root seed
        runner: Batch runner, default settings when omitted

    Returns:
        Report with the guess rate, detection rate and certainty profile
    """
    runner = runner or MonteCarloRunner()
    sender = EntangledSender(params)
    povm = use_measurement_povm()
    meanings = use_outcome_map()
    payload = sender.payload_table(povm)[0].reshape(1, -1)
    class_of = np.array([meanings[label].c for label in povm.labels])
    certain_guess = guess_class_table(sender).min(axis=1) <= CERTAINTY_ATOL
    tests, passing = declared_test_table(sender)
    tests = tests.reshape(1, -1)
    passing = passing.reshape(-1)
    n_outcomes = len(povm)

    def task(rng: np.random.Generator, n: int) -> NDArray[np.int64]:
        rows = np.zeros(n, dtype=int)
        draws = sample_from_table(payload, rows, rng)
        guess, c = draws // n_outcomes, class_of[draws % n_outcomes]
        hits = guess == c
        certain = certain_guess[guess]
        failed = ~passing[sample_from_table(tests, rows, rng)]
        return np.array(
            [
                hits.sum(),
                certain.sum(),
                (hits & certain).sum(),
                (hits & ~certain).sum(),
                failed.sum(),
            ]
        )

    counts = await runner.run(task, runs, seed, "alice-cheat")
    hits, certain, certain_hits, uncertain_hits, failures = (int(v) for v in counts)
    estimate, sigma = binomial_estimate(hits, runs)
    certain_fraction, certain_sigma = binomial_estimate(certain, runs)
    details = {
        "certain_fraction": certain_fraction,
        "certain_fraction_sigma": certain_sigma,
        "certain_accuracy": certain_hits / certain if certain else 0.0,
    }
    if runs > certain:
        accuracy, accuracy_sigma = binomial_estimate(uncertain_hits, runs - certain)
        details["accuracy_otherwise"] = accuracy
        details["accuracy_otherwise_sigma"] = accuracy_sigma

    return CheatReport(
        strategy="alice-entangled",
        estimate=estimate,
        sigma=sigma,
        closed_form=alice_cheat_probability(sender.params),
        detection=failures / runs,
        runs=runs,
        details=details,
    )


@dataclass(frozen=True)
class AliceOptimizationResult:
    """Best cheat state found by the multi-start optimizer.

    Attributes:
        params: Best amplitudes
        value: Closed-form cheat probability at ``params``
        helstrom_value: Helstrom success on the conditional register states at
            ``params``, the quantity the optimizer maximizes
        converged: Whether every start reported success
        start_values: Best value reached from each start
    """

    params: CheatStateParams
    value: float
    helstrom_value: float
    converged: bool
    start_values: Tuple[float, ...]


def _negative_cheat(x: NDArray[np.float64]) -> float:
    return -alice_helstrom(CheatStateParams.from_real_vector(x))[1]


def _optimize_from(rng: np.random.Generator, max_iterations: int) -> OptimizeResult:
    return minimize(
        _negative_cheat,
        rng.normal(size=8),
        method="Powell",
        options={"maxiter": max_iterations, "xtol": 1e-10, "ftol": 1e-13},
    )


def _last_result(retry_state: RetryCallState) -> OptimizeResult:
    result = retry_state.outcome.result()
    logger.warning(
        f"Optimizer start did not converge after {retry_state.attempt_number} attempts: "
        f"{result.message}"
    )
    return result


def alice_cheat_optimize(
    restarts: Optional[int] = None, seed: Optional[int] = None
) -> AliceOptimizationResult:
    """Maximize the cheat probability over normalized amplitudes.

    The objective is the Helstrom success on Alice's conditional register
    states, built from the joint state. Each start is a Powell run over eight
    reals that are normalized inside the objective. A start that reports
    failure is retried from a fresh point. The closed form at the best point is kept for comparison.

    Args:
        restarts: Number of random starts, QOTSIM_ALICE_RESTARTS by default
        seed: Root seed for the start points

    Returns:
        The best start, with per-start values for the consistency check
    """
    config = get_config()
    restarts = restarts or config.optimizer.alice_restarts
    seed = config.simulation.default_seed if seed is None else seed

    results: List[OptimizeResult] = []
    for start in range(restarts):
        rng = role_stream(seed, "alice-optimizer", start)
        retrying = Retrying(
            retry=retry_if_result(lambda r: not r.success),
            stop=stop_after_attempt(config.optimizer.retry_attempts),
            retry_error_callback=_last_result,
        )
        results.append(retrying(_optimize_from, rng, config.optimizer.max_iterations))

    best = min(results, key=lambda r: r.fun)
    params = CheatStateParams.from_real_vector(best.x)
    outcome = AliceOptimizationResult(
        params=params,
        value=alice_cheat_probability(params),
        helstrom_value=-float(best.fun),
        converged=all(r.success for r in results),
        start_values=tuple(-float(r.fun) for r in results),
    )
    logger.info(
        f"Alice optimizer: Helstrom {outcome.helstrom_value:.10f}, "
        f"closed form {outcome.value:.10f}, balance {params.balance:.6f}"
    )
    return outcome
