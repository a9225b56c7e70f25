"""Closed-form SRM success for symmetric pure four-state sets."""

from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from src.exceptions import InvalidStateError, NotPositiveError
from src.linalg.operations import fidelity
from src.linalg.states import DensityMatrix

EIGENVALUE_FLOOR = -1e-10


def gram_eigenvalues(f: complex, G: float) -> NDArray[np.float64]:
    """Eigenvalues of the circulant Gram matrix with row ``(1, f, G, f*)``.

    Args:
        f: Adjacent overlap
        G: Opposite overlap, real

    Returns:
        ``(lambda_0, lambda_1, lambda_2, lambda_3)`` in formula order, not sorted

    Raises:
        NotPositiveError: If the parameters do not describe a PSD Gram matrix
    """
    f = complex(f)
    fc = f.conjugate()
    values = np.array(
        [
            1 + f + G + fc,
            1 + 1j * f - G - 1j * fc,
            1 - f + G - fc,
            1 - 1j * f - G + 1j * fc,
        ]
    ).real
    if values.min() < EIGENVALUE_FLOOR:
        raise NotPositiveError(f"Gram parameters f={f}, G={G} give eigenvalue {values.min():.3e}")
    return values


def srm_success_from_gram(f: complex, G: float) -> float:
    """``(1/16) (sum_i sqrt(lambda_i))^2`` for equiprobable symmetric pure states."""
    roots = np.sqrt(np.clip(gram_eigenvalues(f, G), 0.0, None))
    return float(roots.sum() ** 2 / 16)


def bob_cheat_case2(G_abs: float) -> float:
    """Bob's SRM success when adjacent states are orthogonal.

    Args:
        G_abs: Overlap between opposite states, ``|G| <= 1``

    Returns:
        ``(sqrt(1 + G) + sqrt(1 - G))^2 / 4``
    """
    if not -1.0 <= G_abs <= 1.0:
        raise ValueError(f"|G| must not exceed 1, got {G_abs}")
    return float((np.sqrt(1 + G_abs) + np.sqrt(1 - G_abs)) ** 2 / 4)


def phase_scan(F: float, thetas: Sequence[float], G: float = 0.0) -> NDArray[np.float64]:
    """SRM success for ``f = F exp(i theta)`` over a grid of phases."""
    return np.array([srm_success_from_gram(F * np.exp(1j * t), G) for t in thetas])


def srm_fidelity_lower_bound(states: Sequence[DensityMatrix]) -> float:
    """Fidelity lower bound on the SRM success for four equiprobable states.

    ``1 - (1/8) sum F(sigma_a, sigma_b)`` over ordered pairs ``a != b``.
    """
    if len(states) != 4:
        raise InvalidStateError(f"The bound is stated for four states, got {len(states)}")
    total = sum(
        fidelity(a, b) for i, a in enumerate(states) for j, b in enumerate(states) if i != j
    )
    return 1.0 - total / 8
