"""Unambiguous state elimination (USE) measurement used by an honest Bob.

One qubit is measured in Z and the other in X. For outcome bit ``z`` and
sign bit ``s`` (0 for ``+``, 1 for ``-``) Bob learns ``c = z XOR s`` and
``y = x_c = z``. With the default ``"zx"`` orientation outcomes ``0+`` and
``1-`` give ``c = 0``; ``0-`` and ``1+`` give ``c = 1``.
"""

from dataclasses import dataclass
from typing import Dict, Tuple

from src.exceptions import InvalidPovmError
from src.measurements.povm import Povm, product_basis_povm

ORIENTATIONS: Tuple[str, ...] = ("zx", "xz")


@dataclass(frozen=True)
class UseOutcome:
    """Meaning of one USE outcome.

    Attributes:
        label: Outcome label in qubit order, e.g. ``"0+"`` or ``"+0"``
        c: Index of the bit Bob learns
        y: Value Bob assigns to ``x_c``
    """

    label: str
    c: int
    y: int

    @property
    def star_label(self) -> str:
        """Outcome in star notation: ``"j*"`` reveals ``x_0 = j``, ``"*j"`` reveals ``x_1 = j``."""
        return f"{self.y}*" if self.c == 0 else f"*{self.y}"


def use_measurement_povm(orientation: str = "zx") -> Povm:
    """The four rank-one projectors of the USE measurement.

    Args:
        orientation: ``"zx"`` measures qubit 1 in Z and qubit 2 in X,
            ``"xz"`` the other way round

    Returns:
        Projective measurement with labels such as ``0+ 0- 1+ 1-``
    """
    if orientation not in ORIENTATIONS:
        raise InvalidPovmError(f"Unknown USE orientation {orientation!r}")
    return product_basis_povm(orientation)


def use_outcome_map(orientation: str = "zx") -> Dict[str, UseOutcome]:
    """Outcome label to ``(c, y)`` for the given orientation."""
    if orientation not in ORIENTATIONS:
        raise InvalidPovmError(f"Unknown USE orientation {orientation!r}")

    z_pos = orientation.index("z")
    outcomes = {}
    for label in use_measurement_povm(orientation).labels:
        z = int(label[z_pos])
        s = 1 if label[1 - z_pos] == "-" else 0
        outcomes[label] = UseOutcome(label=label, c=z ^ s, y=z)
    return outcomes
