"""Analytic bounds on the cheating probabilities."""

from src.bounds.cheat_bounds import (
    TradeoffPoint,
    alice_bound,
    bob_bound_general,
    bob_bound_pure_symmetric,
    minimax_general,
    minimax_pure_symmetric,
    parse_grid,
    tradeoff_curve,
)
from src.bounds.gram import (
    bob_cheat_case2,
    gram_eigenvalues,
    phase_scan,
    srm_fidelity_lower_bound,
    srm_success_from_gram,
)

__all__ = [
    "TradeoffPoint",
    "alice_bound",
    "bob_bound_general",
    "bob_bound_pure_symmetric",
    "bob_cheat_case2",
    "gram_eigenvalues",
    "minimax_general",
    "minimax_pure_symmetric",
    "parse_grid",
    "phase_scan",
    "srm_fidelity_lower_bound",
    "srm_success_from_gram",
    "tradeoff_curve",
]
