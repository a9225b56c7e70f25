"""Preparing Alice's cheating state with a controlled-phase circuit.

A product input is sent through ``U(alpha, beta)`` and the output is
compared with the target ``|Sigma> = (|00>_B |0>_A + |++>_B |1>_A) / sqrt(2)``
up to local unitaries. Qubits are ordered ``(B_1, B_2, A)``, which is also
the wire order of the circuit: the controlled phase and the Hadamard act on
Bob's two qubits and only the doubly-controlled phase touches ``A``.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, Field, field_validator
from scipy.optimize import OptimizeResult, minimize
from tenacity import RetryCallState, Retrying, retry_if_result, stop_after_attempt

from src.circuits.gates import LocalUnitaryParams, circuit_unitary, local_unitary
from src.config import get_config
from src.linalg.operations import eig_hermitian, kron_all, partial_trace
from src.linalg.states import SINGLE_QUBIT_KETS, SQRT_HALF, StateVector
from src.utils.logger import get_logger
from src.utils.random_streams import role_stream

logger = get_logger(__name__)

Triple = Tuple[float, float, float]


class CircuitParams(BaseModel):
    """Input angles and gate phases, all in degrees."""

    theta: Triple
    phi: Triple
    alpha: float
    beta: float

    @field_validator("theta", "phi")
    @classmethod
    def check_finite_triple(cls, value: Triple) -> Triple:
        if not np.all(np.isfinite(value)):
            raise ValueError(f"Angles must be finite, got {value}")
        return value

    @field_validator("alpha", "beta")
    @classmethod
    def check_finite(cls, value: float) -> float:
        if not np.isfinite(value):
            raise ValueError(f"Angle must be finite, got {value}")
        return value

    @classmethod
    def reference(cls) -> "CircuitParams":
        """Tabulated optimum for preparing ``|Sigma>``.

        The tabulated input phases ``phi_1 = 22.5`` and ``phi_2 = 90`` are
        taken in the opposite rotation sense. With ``e^{+i phi}`` and
        ``alpha = -138.19`` the output's single-qubit spectra differ from
        those of ``|Sigma>``, so no local unitary can reach it.
        """
        return cls(theta=(120.0, 90.0, 116.565), phi=(-22.5, -90.0, 180.0), alpha=-138.190, beta=180.0)

    @classmethod
    def zero(cls) -> "CircuitParams":
        return cls(theta=(0.0, 0.0, 0.0), phi=(0.0, 0.0, 0.0), alpha=0.0, beta=0.0)


def input_state(params: CircuitParams) -> StateVector:
    """``prod_i [cos(theta_i/2)|0> + sin(theta_i/2) e^{i phi_i}|1>]``."""
    qubits = []
    for theta, phi in zip(np.deg2rad(params.theta), np.deg2rad(params.phi)):
        qubits.append(np.array([np.cos(theta / 2), np.sin(theta / 2) * np.exp(1j * phi)], dtype=complex))
    return StateVector(kron_all(*qubits), dims=(2, 2, 2))


def prepare_sigma(params: CircuitParams) -> StateVector:
    """Circuit output ``U(alpha, beta)|psi_in>`` on ``(B_1, B_2, A)``."""
    return input_state(params).evolve(circuit_unitary(params.alpha, params.beta))


def sigma_target() -> StateVector:
    """``(|00>|0> + |++>|1>) / sqrt(2)`` in the order ``(B_1, B_2, A)``."""
    zero, one, plus = SINGLE_QUBIT_KETS["0"], SINGLE_QUBIT_KETS["1"], SINGLE_QUBIT_KETS["+"]
    amplitudes = SQRT_HALF * (kron_all(zero, zero, zero) + kron_all(plus, plus, one))
    return StateVector(amplitudes, dims=(2, 2, 2))


def reduced_spectra(state: StateVector) -> List[NDArray[np.float64]]:
    """Descending eigenvalues of each single-qubit reduced state."""
    rho = state.density_matrix()
    spectra = []
    for k in range(len(state.dims)):
        values, _ = eig_hermitian(partial_trace(rho, state.dims, [k]).matrix)
        spectra.append(values)
    return spectra


def _apply_locals(x: NDArray[np.float64], candidate: NDArray[np.complex128]) -> NDArray[np.complex128]:
    v1, v2, v3 = (local_unitary(*triple) for triple in np.reshape(x, (3, 3)))
    return np.einsum("ai,bj,ck,ijk->abc", v1, v2, v3, candidate.reshape(2, 2, 2)).reshape(-1)


def local_overlap(x: NDArray[np.float64], candidate: StateVector, target: StateVector) -> float:
    """``|<target|V(x)|candidate>|^2`` for nine angles ``x`` in degrees."""
    return float(abs(np.vdot(target.amplitudes, _apply_locals(x, candidate.amplitudes))) ** 2)


@dataclass(frozen=True)
class LuEquivalence:
    """Result of maximizing the overlap over local unitaries.

    Attributes:
        value: Best overlap ``E``
        params: Local unitary achieving it
        converged: False when the best start stopped without meeting its tolerance
        history: Best value after each start, never decreasing
    """

    value: float
    params: LocalUnitaryParams
    converged: bool
    history: Tuple[float, ...]


def _optimize_from(
    rng: np.random.Generator, candidate: StateVector, target: StateVector, max_iterations: int
) -> OptimizeResult:
    # Radians inside the optimizer
    return minimize(
        lambda x: 1.0 - local_overlap(np.rad2deg(x), candidate, target),
        rng.uniform(-np.pi, np.pi, 9),
        method="BFGS",
        options={"maxiter": max_iterations, "gtol": 1e-9},
    )


def _keep_last(retry_state: RetryCallState) -> OptimizeResult:
    return retry_state.outcome.result()


def lu_equivalence(
    candidate: StateVector,
    target: StateVector,
    restarts: Optional[int] = None,
    seed: Optional[int] = None,
) -> LuEquivalence:
    """Maximize ``|<target|V_1 (x) V_2 (x) V_3|candidate>|^2`` over nine angles.

    Args:
        candidate: Three-qubit state the local unitaries act on
        target: Three-qubit reference state
        restarts: Random starts, QOTSIM_LU_RESTARTS by default
        seed: Root seed for the start points

    Returns:
        Best overlap with its parameters and the best-so-far history
    """
    if candidate.dims != (2, 2, 2) or target.dims != (2, 2, 2):
        raise ValueError("Local-unitary equivalence needs two three-qubit states")
    config = get_config()
    restarts = restarts or config.optimizer.lu_restarts
    seed = config.simulation.default_seed if seed is None else seed

    best: Optional[OptimizeResult] = None
    history: List[float] = []
    for start in range(restarts):
        rng = role_stream(seed, "lu-optimizer", start)
        retrying = Retrying(
            retry=retry_if_result(lambda r: r.status == 1),
            stop=stop_after_attempt(config.optimizer.retry_attempts),
            retry_error_callback=_keep_last,
        )
        result = retrying(_optimize_from, rng, candidate, target, config.optimizer.max_iterations)
        if best is None or result.fun < best.fun:
            best = result
        history.append(1.0 - float(best.fun))

    if best.status == 1:
        logger.warning(f"LU optimizer hit its iteration cap, best E = {1.0 - best.fun:.12f}")
    params = LocalUnitaryParams.from_vector(np.rad2deg(best.x))
    value = local_overlap(params.as_vector(), candidate, target)
    logger.info(f"LU equivalence after {restarts} starts: 1 - E = {1.0 - value:.3e}")
    # Status 2 is BFGS precision loss at the optimum, not a cap
    return LuEquivalence(value=value, params=params, converged=best.status != 1, history=tuple(history))


class PreparationReport(BaseModel):
    """Check of the circuit output against ``|Sigma>``."""

    params: CircuitParams
    lu_equivalence: float
    one_minus_e: float
    converged: bool
    local_unitary: List[List[float]]
    spectrum_deltas: List[float] = Field(description="Max eigenvalue difference per qubit")


def verify_preparation(
    params: Optional[CircuitParams] = None,
    restarts: Optional[int] = None,
    seed: Optional[int] = None,
) -> PreparationReport:
    """Compare ``prepare_sigma(params)`` with ``|Sigma>``, tabulated parameters by default."""
    params = params or CircuitParams.reference()
    prepared = prepare_sigma(params)
    target = sigma_target()
    result = lu_equivalence(prepared, target, restarts=restarts, seed=seed)
    deltas = [
        float(np.max(np.abs(ours - theirs)))
        for ours, theirs in zip(reduced_spectra(prepared), reduced_spectra(target))
    ]
    return PreparationReport(
        params=params,
        lu_equivalence=result.value,
        one_minus_e=1.0 - result.value,
        converged=result.converged,
        local_unitary=[list(triple) for triple in result.params.angles],
        spectrum_deltas=deltas,
    )
