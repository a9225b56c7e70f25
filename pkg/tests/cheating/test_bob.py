"""Unit tests for Bob's minimum-error cheat."""

import numpy as np
import pytest

from src.cheating.bob import (
    ALPHA,
    PRODUCT_LABELS,
    bob_cheat_closed_form,
    bob_cheat_simulate,
    bob_guess_map,
    bob_guess_success,
    bob_product_povm,
    bob_srm_bases,
    compare_bases_to_srm,
)
from src.experiments.monte_carlo import MonteCarloRunner
from src.measurements import INPUT_LABELS, born_table, protocol_state_set

SRM_SUCCESS = (3 + 2 * np.sqrt(2)) / 8


def test_bases_are_orthonormal():
    for basis in bob_srm_bases():
        gram = np.array([[np.vdot(u, v) for v in basis] for u in basis])
        assert np.allclose(gram, np.eye(2), atol=1e-12)


def test_product_povm_labels():
    assert bob_product_povm().labels == PRODUCT_LABELS


def test_each_outcome_points_to_its_own_input():
    guesses = bob_guess_map()
    assert sorted(guesses.values()) == sorted(INPUT_LABELS)


def test_every_input_is_guessed_with_alpha_to_the_fourth():
    state_set = protocol_state_set()
    povm = bob_product_povm()
    table = born_table(state_set.states, povm)
    guesses = bob_guess_map(povm, state_set)
    for i, label in enumerate(povm.labels):
        k = state_set.labels.index(guesses[label])
        assert table[k, i] == pytest.approx(ALPHA**4, abs=1e-12)


def test_closed_form_value():
    assert bob_cheat_closed_form() == pytest.approx(SRM_SUCCESS, abs=1e-12)
    assert bob_cheat_closed_form() == pytest.approx(0.72855, abs=1e-5)
    assert bob_guess_success() == pytest.approx(SRM_SUCCESS, abs=1e-12)


def test_product_measurement_is_as_good_as_srm():
    comparison = compare_bases_to_srm()
    assert comparison.product_success == pytest.approx(comparison.srm_success, abs=1e-10)
    assert comparison.srm_success == pytest.approx(SRM_SUCCESS, abs=1e-10)
    assert comparison.effect_deviation >= 0.0


@pytest.mark.asyncio
async def test_simulation_within_five_sigma():
    runner = MonteCarloRunner(threads=2, batch_size=25_000, show_progress=False)
    report = await bob_cheat_simulate(100_000, seed=1, runner=runner)
    assert report.strategy == "bob-srm"
    assert report.runs == 100_000
    assert abs(report.z_score()) <= 5
    for label in INPUT_LABELS:
        # About a quarter of the runs per input
        assert abs(report.details[f"success_{label}"] - SRM_SUCCESS) <= 5 * np.sqrt(0.2 / 25_000) * 1.1


@pytest.mark.asyncio
async def test_simulation_independent_of_thread_count():
    single = MonteCarloRunner(threads=1, batch_size=5_000, show_progress=False)
    many = MonteCarloRunner(threads=4, batch_size=5_000, show_progress=False)
    first = await bob_cheat_simulate(30_000, seed=9, runner=single)
    second = await bob_cheat_simulate(30_000, seed=9, runner=many)
    assert first.estimate == second.estimate
    assert first.details == second.details
