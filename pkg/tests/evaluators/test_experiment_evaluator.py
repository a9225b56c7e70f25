"""Reanalysis of the measured count tables."""

from typing import Dict, List, Tuple

import numpy as np
import pytest

from src.data import BUNDLED_TABLES, CountRow, CountTable, load_bundled_table
from src.evaluators.experiment_evaluator import (
    ExperimentEvaluator,
    compare_to_theory,
    model_theory,
    relative_frequencies,
    theory_deviation,
)
from src.exceptions import CountTableError
from src.utils.text_utils import last_digit_unit

# Printed f cells, in file order
PRINTED_F: Dict[str, List[str]] = {
    "correct_transfer": [
        "0.52(1)", "0.48(1)", "0.002(1)", "0.002(1)",
        "0.51(1)", "0.0012(9)", "0.48(1)", "0.004(2)",
        "0.004(2)", "0.48(1)", "0.009(2)", "0.51(1)",
        "0.000(0)", "0.0006(5)", "0.49(1)", "0.51(1)",
    ],
    "honest_alarms": [
        "0.998(1)", "0.002(1)", "0.0006(5)", "0.000(0)",
        "0.000(0)", "0.000(0)", "0.009(2)", "0.991(2)",
        "0.973(4)", "0.0006(5)", "0.026(4)", "0.0006(5)",
        "0.003(1)", "0.005(2)", "0.005(2)", "0.986(3)",
    ],
    "bob_cheating": [
        "0.060(6)", "0.857(9)", "0.003(1)", "0.080(7)",
        "0.65(1)", "0.119(8)", "0.19(1)", "0.034(5)",
        "0.030(4)", "0.118(7)", "0.179(8)", "0.67(1)",
        "0.121(7)", "0.025(4)", "0.72(1)", "0.134(8)",
    ],
    "alice_guess": ["0.53(1)", "0.22(1)", "0.010(3)", "0.25(1)"],
    "alice_tests": [
        "0.52(1)", "0.009(2)", "0.017(3)", "0.019(3)",
        "0.42(1)", "0.004(2)", "0.007(2)", "0.002(1)",
    ],
}

HEADLINES: Dict[str, Tuple[str, str]] = {
    "correct_transfer": ("honest_transfer_success", "0.9943(9)"),
    "honest_alarms": ("false_alarm_rate", "0.013(1)"),
    "bob_cheating": ("bob_cheat_rate", "0.718(5)"),
    "alice_guess": ("alice_guess_rate", "0.77(1)"),
    "alice_tests": ("alice_detection_rate", "0.059(6)"),
}


def _printed(cell: str) -> Tuple[float, float, float]:
    value, digit = cell.rstrip(")").split("(")
    unit = last_digit_unit(cell)
    return float(value), int(digit) * unit, unit


@pytest.fixture(scope="module")
def evaluator() -> ExperimentEvaluator:
    return ExperimentEvaluator()


@pytest.mark.parametrize("table_id", BUNDLED_TABLES)
def test_frequencies_match_printed_cells(table_id: str):
    rows = relative_frequencies(load_bundled_table(table_id))
    assert len(rows) == len(PRINTED_F[table_id])
    for row, cell in zip(rows, PRINTED_F[table_id]):
        value, sigma, unit = _printed(cell)
        assert abs(row.f - value) <= unit, (row.input_state, row.outcome, cell)
        # Single-count cells are printed one digit below sqrt(f(1 - f)/T)
        if row.counts != 1:
            assert abs(row.sigma_f - sigma) <= unit, (row.input_state, row.outcome, cell)


def test_single_count_cells_round_to_six():
    rows = relative_frequencies(load_bundled_table("honest_alarms"))
    singles = [row for row in rows if row.counts == 1]
    assert len(singles) == 3
    assert all(row.display.startswith("0.0006(") for row in singles)


@pytest.mark.parametrize("table_id", BUNDLED_TABLES)
def test_group_frequencies_sum_to_one(table_id: str):
    rows = relative_frequencies(load_bundled_table(table_id))
    sums: Dict[str, float] = {}
    for row in rows:
        sums[row.input_state] = sums.get(row.input_state, 0.0) + row.f
    assert all(abs(total - 1.0) <= 1e-12 for total in sums.values())


def test_first_rows_display():
    rows = relative_frequencies(load_bundled_table("correct_transfer"))
    assert rows[0].display == "0.52(1)"
    assert rows[12].display == "0.000(0)"
    assert rows[12].sigma_f == 0.0
    bob = relative_frequencies(load_bundled_table("bob_cheating"))
    assert bob[1].display == "0.857(9)"


def test_single_outcome_group_has_zero_sigma():
    table = CountTable(table_id="t", rows=[CountRow(input_state="a", outcome="x", counts=12)])
    (row,) = relative_frequencies(table)
    assert row.f == 1.0
    assert row.sigma_f == 0.0
    assert row.display == "1.000(0)"


def test_zero_count_group_is_rejected():
    table = CountTable(table_id="t", rows=[CountRow(input_state="a", outcome="x", counts=0)])
    with pytest.raises(CountTableError):
        relative_frequencies(table)


@pytest.mark.parametrize("table_id", BUNDLED_TABLES)
def test_headline_numbers(evaluator: ExperimentEvaluator, table_id: str):
    name, printed = HEADLINES[table_id]
    report = evaluator.evaluate_table(table_id)
    assert report.aggregate.name == name
    assert report.aggregate.display == printed
    assert len(report.checksum) == 64


def test_headline_counts(evaluator: ExperimentEvaluator):
    metrics = evaluator.headline_metrics()
    assert set(metrics) == {name for name, _ in HEADLINES.values()}
    assert (metrics["honest_transfer_success"].successes, metrics["honest_transfer_success"].trials) == (6658, 6696)
    assert (metrics["false_alarm_rate"].successes, metrics["false_alarm_rate"].trials) == (87, 6655)
    assert (metrics["bob_cheat_rate"].successes, metrics["bob_cheat_rate"].trials) == (5029, 7000)
    assert (metrics["alice_guess_rate"].successes, metrics["alice_guess_rate"].trials) == (1256, 1629)
    assert (metrics["alice_detection_rate"].successes, metrics["alice_detection_rate"].trials) == (96, 1635)


def test_headline_theory_values(evaluator: ExperimentEvaluator):
    metrics = evaluator.headline_metrics()
    assert metrics["honest_transfer_success"].theory == 1.0
    assert metrics["false_alarm_rate"].theory == 0.0
    assert metrics["bob_cheat_rate"].theory == pytest.approx((3 + 2 * np.sqrt(2)) / 8, abs=1e-12)
    assert metrics["alice_guess_rate"].theory == pytest.approx(0.75, abs=1e-12)
    assert metrics["alice_detection_rate"].theory == 0.0
    # 0.718 sits about two sigma below 0.72855
    assert -3.0 < metrics["bob_cheat_rate"].z_score < 0.0


def test_bob_per_input_success():
    report = compare_to_theory(load_bundled_table("bob_cheating"))
    assert {k: m.successes for k, m in report.per_input.items()} == {
        "00": 1215,
        "++": 1013,
        "--": 1441,
        "11": 1360,
    }
    assert all(m.theory == pytest.approx(0.729) for m in report.per_input.values())


def test_per_input_false_alarms():
    report = compare_to_theory(load_bundled_table("honest_alarms"))
    assert report.per_input["00"].display == "0.002(1)"
    assert report.per_input["--"].display == "0.014(3)"
    assert report.per_input["++"].display == "0.027(4)"


def test_row_z_scores():
    report = compare_to_theory(load_bundled_table("correct_transfer"))
    first = report.rows[0]
    assert first.z_score == pytest.approx((first.f - 0.5) / first.sigma_f)
    # f = p_t = 0 with zero sigma
    assert report.rows[12].z_score == 0.0


@pytest.mark.parametrize("table_id", BUNDLED_TABLES)
def test_printed_theory_agrees_with_model(table_id: str):
    assert theory_deviation(load_bundled_table(table_id)) < 1e-3


def test_model_theory_groups_are_normalized():
    for table_id in ("correct_transfer", "honest_alarms", "bob_cheating"):
        theory = model_theory(table_id)
        for state in ("00", "++", "--", "11"):
            assert sum(p for (s, _), p in theory.items() if s == state) == pytest.approx(1.0, abs=1e-12)
    assert sum(model_theory("alice_guess").values()) == pytest.approx(1.0, abs=1e-12)
    assert sum(model_theory("alice_tests").values()) == pytest.approx(1.0, abs=1e-12)


def test_compare_with_model_theory():
    table = load_bundled_table("alice_tests")
    report = compare_to_theory(table, model_theory("alice_tests"))
    assert report.aggregate.display == "0.059(6)"
    assert report.rows[0].p_t == pytest.approx(0.5, abs=1e-12)


def test_label_mismatch_is_rejected():
    table = load_bundled_table("alice_guess")
    theory = model_theory("alice_guess")
    theory.pop(("sigma", "11"))
    with pytest.raises(CountTableError, match="labels"):
        compare_to_theory(table, theory)


def test_unknown_table_without_theory():
    table = CountTable(table_id="other", rows=[CountRow(input_state="a", outcome="x", counts=1)])
    with pytest.raises(CountTableError):
        compare_to_theory(table)


def test_unknown_table_with_printed_theory():
    table = CountTable(
        table_id="other",
        rows=[
            CountRow(input_state="a", outcome="x", counts=3, p_t=0.5),
            CountRow(input_state="a", outcome="y", counts=1, p_t=0.5),
        ],
    )
    report = compare_to_theory(table)
    assert report.aggregate is None
    assert report.rows[0].f == pytest.approx(0.75)


def test_evaluate_file(tmp_path, evaluator: ExperimentEvaluator):
    path = tmp_path / "alice_guess.csv"
    path.write_text(
        "table_id,input_state,outcome,counts\n"
        "alice_guess,sigma,00,50\nalice_guess,sigma,01,25\nalice_guess,sigma,10,0\nalice_guess,sigma,11,25\n",
        encoding="utf-8",
    )
    report = evaluator.evaluate_file(path)
    assert report.aggregate.value == pytest.approx(0.75)
    assert report.rows[2].p_t == pytest.approx(0.0, abs=1e-12)
