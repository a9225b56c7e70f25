"""Optimal cheating strategies for both parties."""

from src.cheating.alice import (
    AliceOptimizationResult,
    CertaintyProfile,
    CheatStateParams,
    EntangledSender,
    alice_certainty_profile,
    alice_cheat_optimize,
    alice_cheat_probability,
    alice_cheat_simulate,
    alice_conditional_states,
    alice_helstrom,
    cheat_state,
    guess_class_table,
)
from src.cheating.bob import (
    BasesComparison,
    SrmReceiver,
    bob_cheat_closed_form,
    bob_cheat_simulate,
    bob_guess_map,
    bob_guess_success,
    bob_product_povm,
    bob_srm_bases,
    compare_bases_to_srm,
)
from src.cheating.framework_attack import AliceAttackReport, annihilation_residual, framework_alice_attack
from src.cheating.reports import CheatReport

__all__ = [
    "AliceAttackReport",
    "AliceOptimizationResult",
    "BasesComparison",
    "CertaintyProfile",
    "CheatReport",
    "CheatStateParams",
    "EntangledSender",
    "SrmReceiver",
    "alice_certainty_profile",
    "alice_cheat_optimize",
    "alice_cheat_probability",
    "alice_cheat_simulate",
    "alice_conditional_states",
    "alice_helstrom",
    "annihilation_residual",
    "bob_cheat_closed_form",
    "bob_cheat_simulate",
    "bob_guess_map",
    "bob_guess_success",
    "bob_product_povm",
    "bob_srm_bases",
    "cheat_state",
    "compare_bases_to_srm",
    "framework_alice_attack",
    "guess_class_table",
]
