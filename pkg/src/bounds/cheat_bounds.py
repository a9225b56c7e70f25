"""Cheating-probability bounds as functions of the output-state fidelity F.

Bounds are returned as raw formula values. ``bob_bound_general`` drops below
1/2 for F > 1/2, where it says nothing because Bob can always guess.
"""

from typing import Iterable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator
from scipy.optimize import bisect

from src.utils.logger import get_logger

logger = get_logger(__name__)

PURE_SYMMETRIC_MAX_F = 0.5
BISECTION_BRACKET = (0.4, 0.5)
BISECTION_XTOL = 1e-10


def _check_fidelity(F: float) -> None:
    if not 0.0 <= F <= 1.0:
        raise ValueError(f"Fidelity must lie in [0, 1], got {F}")


def bob_bound_general(F: float) -> float:
    """Lower bound ``1 - F`` on Bob's cheating probability for any protocol."""
    _check_fidelity(F)
    return 1.0 - F


def bob_bound_pure_symmetric(F: float) -> float:
    """Lower bound on Bob's cheating probability for symmetric pure output states.

    Args:
        F: Adjacent-state fidelity, at most 1/2

    Returns:
        ``(1 + sqrt(1 - 2F)/2 + sqrt(1 + 2F)/2)^2 / 4``
    """
    _check_fidelity(F)
    if F > PURE_SYMMETRIC_MAX_F:
        raise ValueError(f"Pure symmetric bound needs F <= 1/2, got {F}")
    return float((1 + 0.5 * np.sqrt(1 - 2 * F) + 0.5 * np.sqrt(1 + 2 * F)) ** 2 / 4)


def alice_bound(F: float) -> float:
    """Lower bound ``(1 + F) / 2`` on Alice's cheating probability."""
    _check_fidelity(F)
    return (1.0 + F) / 2


def minimax_general() -> Tuple[float, float]:
    """Fidelity minimizing ``max(alice_bound, bob_bound_general)``.

    The two lines cross at ``(1 + F)/2 = 1 - F``.

    Returns:
        ``(1/3, 2/3)``
    """
    return 1.0 / 3.0, 2.0 / 3.0


def minimax_pure_symmetric() -> Tuple[float, float]:
    """Crossing of ``alice_bound`` and ``bob_bound_pure_symmetric``, found by bisection.

    Returns:
        Tuple of (F at the crossing, common bound value), value close to 0.749
    """

    def gap(F: float) -> float:
        return alice_bound(F) - bob_bound_pure_symmetric(F)

    low, high = BISECTION_BRACKET
    if not gap(low) < 0 < gap(high):
        raise ArithmeticError("Pure symmetric minimax is not bracketed by [0.4, 0.5]")

    F_star = float(bisect(gap, low, high, xtol=BISECTION_XTOL))
    value = max(alice_bound(F_star), bob_bound_pure_symmetric(F_star))
    logger.debug(f"Pure symmetric minimax at F={F_star:.10f}, value {value:.10f}")
    return F_star, value


class TradeoffPoint(BaseModel):
    """All bounds evaluated at one fidelity value."""

    F: float = Field(ge=0.0, le=1.0)
    alice_bound: float
    bob_bound_general: float
    bob_bound_pure_symmetric: Optional[float] = None

    @model_validator(mode="after")
    def check_alice_bound(self) -> "TradeoffPoint":
        if abs(self.alice_bound - (1 + self.F) / 2) > 1e-12:
            raise ValueError("alice_bound must equal (1 + F) / 2")
        return self

    @classmethod
    def at(cls, F: float) -> "TradeoffPoint":
        return cls(
            F=F,
            alice_bound=alice_bound(F),
            bob_bound_general=bob_bound_general(F),
            bob_bound_pure_symmetric=(
                bob_bound_pure_symmetric(F) if F <= PURE_SYMMETRIC_MAX_F else None
            ),
        )


def tradeoff_curve(F_grid: Iterable[float]) -> List[TradeoffPoint]:
    """Evaluate every bound on a grid of fidelities."""
    return [TradeoffPoint.at(float(F)) for F in F_grid]


def parse_grid(spec: str) -> List[float]:
    """Grid from ``"start:stop:step"``, stop included when it falls on the grid.

    Args:
        spec: e.g. ``"0:0.5:0.1"``

    Returns:
        Grid values clipped to [0, 1]
    """
    try:
        start, stop, step = (float(part) for part in spec.split(":"))
    except ValueError as e:
        raise ValueError(f"Curve must be start:stop:step, got {spec!r}") from e
    if step <= 0 or stop < start:
        raise ValueError(f"Invalid curve range {spec!r}")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    grid = [round(start + i * step, 12) for i in range(count)]
    for F in grid:
        _check_fidelity(F)
    return grid
