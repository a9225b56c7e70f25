"""Minimum-error discrimination: square-root and Helstrom measurements."""

from typing import Optional, Sequence, Tuple

import numpy as np

from src.exceptions import DimensionMismatchError, InvalidStateError
from src.linalg.operations import eig_hermitian
from src.linalg.states import DensityMatrix
from src.measurements.povm import Povm
from src.utils.logger import get_logger

logger = get_logger(__name__)

SUPPORT_CUTOFF = 1e-12
RESIDUAL_LABEL = "residual"


def _check_priors(priors: Sequence[float], count: int) -> np.ndarray:
    p = np.asarray(priors, dtype=float)
    if p.shape != (count,):
        raise InvalidStateError(f"Expected {count} priors, got {len(p)}")
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-10:
        raise InvalidStateError(f"Priors must be a probability vector, got {p.tolist()}")
    return p


def srm_construct(
    states: Sequence[DensityMatrix],
    priors: Optional[Sequence[float]] = None,
    labels: Optional[Sequence[str]] = None,
) -> Povm:
    """Square-root measurement ``Pi_i = rho^-1/2 p_i rho_i rho^-1/2``.

    ``rho = sum_i p_i rho_i`` is inverted on its support only. When the states
    do not span the whole space, an extra ``"residual"`` effect projects onto
    the orthocomplement so the POVM stays complete.

    Args:
        states: Candidate states
        priors: Prior probabilities, uniform when omitted
        labels: Outcome labels, ``"0", "1", ...`` when omitted

    Returns:
        The square-root measurement
    """
    if not states:
        raise InvalidStateError("srm_construct needs at least one state")
    p = _check_priors(priors if priors is not None else [1 / len(states)] * len(states), len(states))
    labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(len(states)))
    if len(labels) != len(states):
        raise InvalidStateError(f"{len(labels)} labels for {len(states)} states")

    dim = states[0].dim
    if any(s.dim != dim for s in states):
        raise DimensionMismatchError("All states must share one dimension")

    average = sum(w * s.matrix for w, s in zip(p, states))
    values, vectors = eig_hermitian(average)
    support = values > SUPPORT_CUTOFF * max(values[0], 1.0)
    inv_sqrt = (vectors[:, support] / np.sqrt(values[support])) @ vectors[:, support].conj().T

    effects = []
    for w, s in zip(p, states):
        effect = inv_sqrt @ (w * s.matrix) @ inv_sqrt
        effects.append((effect + effect.conj().T) / 2)

    kernel = vectors[:, ~support]
    if kernel.shape[1]:
        logger.debug(f"SRM: states span {int(support.sum())} of {dim} dimensions")
        effects.append(kernel @ kernel.conj().T)
        labels = labels + (RESIDUAL_LABEL,)

    return Povm(labels, tuple(effects))


def srm_success_probability(
    states: Sequence[DensityMatrix], priors: Optional[Sequence[float]] = None
) -> float:
    """Average success ``sum_i p_i Tr(Pi_i rho_i)`` of the square-root measurement."""
    povm = srm_construct(states, priors)
    p = _check_priors(priors if priors is not None else [1 / len(states)] * len(states), len(states))
    return float(
        sum(w * np.trace(povm.effects[i] @ s.matrix).real for i, (w, s) in enumerate(zip(p, states)))
    )


def helstrom_discriminate(
    rho0: DensityMatrix,
    rho1: DensityMatrix,
    prior0: float = 0.5,
    labels: Tuple[str, str] = ("0", "1"),
) -> Tuple[Povm, float]:
    """Optimal two-state discrimination.

    Guess 1 on the positive eigenspace of ``p1 rho1 - p0 rho0`` and 0 on the
    rest, zero eigenvalues included.

    Args:
        rho0: State for hypothesis 0
        rho1: State for hypothesis 1
        prior0: Prior of hypothesis 0
        labels: Outcome labels for the two guesses

    Returns:
        Tuple of (measurement, success probability)
    """
    if rho0.dim != rho1.dim:
        raise DimensionMismatchError(f"Dimension mismatch: {rho0.dim} vs {rho1.dim}")
    if not 0.0 <= prior0 <= 1.0:
        raise InvalidStateError(f"Prior must lie in [0, 1], got {prior0}")

    prior1 = 1.0 - prior0
    values, vectors = eig_hermitian(prior1 * rho1.matrix - prior0 * rho0.matrix)
    positive = values > SUPPORT_CUTOFF

    guess1 = vectors[:, positive] @ vectors[:, positive].conj().T
    guess0 = np.eye(rho0.dim) - guess1
    success = prior0 + float(values[positive].sum())
    return Povm(tuple(labels), ((guess0 + guess0.conj().T) / 2, guess1)), success
