"""Comparison of measured count tables with the model predictions.

Relative frequencies are ``f_i = C_i / T`` within each input group of total
``T``. Treating every count as an independent Poisson variable, first-order
propagation of the ratio gives ``sigma_f^2 = f (1 - f) / T``, the binomial
form. At ``f = 0`` or ``f = 1`` this is zero and is displayed as ``(0)``.
"""

from dataclasses import dataclass
from math import isclose, sqrt
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from src.cheating.alice import CheatStateParams, EntangledSender, alice_cheat_probability, guess_class_table
from src.cheating.bob import bob_cheat_closed_form, bob_product_povm
from src.config import get_config
from src.data.csv_processor import BUNDLED_TABLES, file_checksum, load_bundled_table, load_counts
from src.data.models import AggregateMetric, ComparisonRow, CountRow, CountTable, TableComparison
from src.exceptions import CountTableError
from src.measurements.povm import born_table, product_basis_povm
from src.measurements.state_sets import INPUT_LABELS, STATE_LABELS, protocol_state_set
from src.measurements.use import use_measurement_povm, use_outcome_map
from src.protocol.engine import TEST_BASIS_FOR_INPUT, declared_test_table
from src.utils.logger import get_logger
from src.utils.text_utils import format_uncertainty

logger = get_logger(__name__)

Cell = Tuple[str, str]
Theory = Dict[Cell, float]
Predicate = Callable[[CountRow, Dict[str, float]], bool]

BITS_FOR_STATE: Dict[str, str] = dict(zip(STATE_LABELS, INPUT_LABELS))
# Alice's register value 0 announces |00>, value 1 announces |++>
DECLARED_KET: Dict[str, str] = {"0": "00", "1": "++"}


def relative_frequencies(table: CountTable) -> List[ComparisonRow]:
    """Per-group relative frequencies with their Poisson errors.

    Args:
        table: Validated count table

    Returns:
        One row per cell, in table order

    Raises:
        CountTableError: If an input group has no counts at all
    """
    rows = []
    for input_state, group in table.groups().items():
        total = sum(row.counts for row in group)
        if total == 0:
            raise CountTableError(f"Table {table.table_id}: group {input_state!r} has zero counts")
        for row in group:
            f = row.counts / total
            sigma = sqrt(f * (1.0 - f) / total)
            rows.append(
                ComparisonRow(
                    input_state=row.input_state,
                    outcome=row.outcome,
                    counts=row.counts,
                    f=f,
                    sigma_f=sigma,
                    p_t=row.p_t,
                    display=format_uncertainty(f, sigma),
                )
            )
    return rows


def _z_score(value: float, theory: float, sigma: float) -> Optional[float]:
    if sigma == 0:
        return 0.0 if isclose(value, theory, abs_tol=1e-12) else None
    return (value - theory) / sigma


def _transfer_correct(row: CountRow, _: Dict[str, float]) -> bool:
    meaning = use_outcome_map()[row.outcome]
    return int(BITS_FOR_STATE[row.input_state][meaning.c]) == meaning.y


def _test_passes(row: CountRow, _: Dict[str, float]) -> bool:
    return row.outcome == row.input_state


def _bob_guess_correct(row: CountRow, group_theory: Dict[str, float]) -> bool:
    # Bob names the input whose predicted probability for this cell is largest
    return row.outcome == max(group_theory, key=group_theory.get)


def _guess_matches(row: CountRow, _: Dict[str, float]) -> bool:
    guess, bit = row.outcome
    return guess == bit


def _declaration_confirmed(row: CountRow, _: Dict[str, float]) -> bool:
    register, outcome = row.outcome.split("|")
    return DECLARED_KET.get(register) == outcome


@dataclass(frozen=True)
class MetricSpec:
    """How one table collapses into a headline rate.

    Attributes:
        name: Metric name in reports
        predicate: Whether a cell is a success (or a passed test)
        counts_failures: Report the complement of the predicate
        theory: Ideal value of the metric
    """

    name: str
    predicate: Predicate
    counts_failures: bool
    theory: Callable[[], float]


METRICS: Dict[str, MetricSpec] = {
    "correct_transfer": MetricSpec("honest_transfer_success", _transfer_correct, False, lambda: 1.0),
    "honest_alarms": MetricSpec("false_alarm_rate", _test_passes, True, lambda: 0.0),
    "bob_cheating": MetricSpec("bob_cheat_rate", _bob_guess_correct, False, bob_cheat_closed_form),
    "alice_guess": MetricSpec(
        "alice_guess_rate",
        _guess_matches,
        False,
        lambda: alice_cheat_probability(CheatStateParams.optimal()),
    ),
    "alice_tests": MetricSpec("alice_detection_rate", _declaration_confirmed, True, lambda: 0.0),
}


def model_theory(table_id: str) -> Theory:
    """Predicted cell probabilities for one of the bundled tables.

    Args:
        table_id: One of ``BUNDLED_TABLES``

    Returns:
        ``(input_state, outcome)`` to probability
    """
    states = protocol_state_set().states
    theory: Theory = {}
    if table_id in ("correct_transfer", "bob_cheating"):
        povm = use_measurement_povm() if table_id == "correct_transfer" else bob_product_povm()
        probs = born_table(states, povm)
        for i, state_label in enumerate(STATE_LABELS):
            theory.update({(state_label, o): float(p) for o, p in zip(povm.labels, probs[i])})
    elif table_id == "honest_alarms":
        for state, state_label, bits in zip(states, STATE_LABELS, INPUT_LABELS):
            povm = product_basis_povm(TEST_BASIS_FOR_INPUT[bits])
            theory.update({(state_label, o): float(p) for o, p in zip(povm.labels, povm.probabilities(state))})
    elif table_id == "alice_guess":
        joint = guess_class_table(EntangledSender())
        theory = {("sigma", f"{g}{c}"): float(joint[g, c]) for g in range(2) for c in range(2)}
    elif table_id == "alice_tests":
        tables, _ = declared_test_table(EntangledSender())
        for register, ket in DECLARED_KET.items():
            k = STATE_LABELS.index(ket)
            povm = product_basis_povm(TEST_BASIS_FOR_INPUT[INPUT_LABELS[k]])
            theory.update({("sigma", f"{register}|{o}"): float(p) for o, p in zip(povm.labels, tables[0, k])})
    else:
        raise CountTableError(f"No model for table {table_id!r}")
    return theory


def printed_theory(table: CountTable) -> Theory:
    if not table.has_theory():
        raise CountTableError(f"Table {table.table_id} has no p_t column")
    return {(row.input_state, row.outcome): float(row.p_t) for row in table.rows}


def theory_deviation(table: CountTable, theory: Optional[Theory] = None) -> float:
    """Largest gap between the printed ``p_t`` column and the model.

    Outcome columns of ``bob_cheating`` are matched up to a permutation within
    each group, so only the sorted group values are compared there.
    """
    theory = theory or model_theory(table.table_id)
    printed = printed_theory(table)
    if set(theory) != set(printed):
        raise CountTableError(f"Table {table.table_id}: model and table cells differ")
    if table.table_id != "bob_cheating":
        return max(abs(printed[cell] - theory[cell]) for cell in printed)

    gaps = []
    for input_state, group in table.groups().items():
        cells = [(input_state, row.outcome) for row in group]
        gaps.append(np.max(np.abs(np.sort([printed[c] for c in cells]) - np.sort([theory[c] for c in cells]))))
    return float(max(gaps))


def _metric(rows: List[CountRow], spec: MetricSpec, theory: Theory, value_theory: float) -> AggregateMetric:
    hits = trials = 0
    per_group: Dict[str, Dict[str, float]] = {}
    for row in rows:
        per_group.setdefault(row.input_state, {})[row.outcome] = theory[(row.input_state, row.outcome)]
    for row in rows:
        passed = spec.predicate(row, per_group[row.input_state])
        trials += row.counts
        if passed != spec.counts_failures:
            hits += row.counts
    value = hits / trials
    sigma = sqrt(value * (1.0 - value) / trials)
    return AggregateMetric(
        name=spec.name,
        successes=hits,
        trials=trials,
        value=value,
        sigma=sigma,
        display=format_uncertainty(value, sigma),
        theory=value_theory,
        z_score=_z_score(value, value_theory, sigma),
    )


def _group_theory(rows: List[CountRow], spec: MetricSpec, theory: Theory) -> float:
    cells = {row.outcome: theory[(row.input_state, row.outcome)] for row in rows}
    return float(sum(cells[row.outcome] for row in rows if spec.predicate(row, cells) != spec.counts_failures))


def compare_to_theory(table: CountTable, theory: Optional[Theory] = None) -> TableComparison:
    """Frequencies, z-scores and pooled metrics for one table.

    Args:
        table: Measured counts
        theory: Cell probabilities; the table's ``p_t`` column when omitted,
            otherwise the model prediction

    Returns:
        Report with one row per cell, per-input summaries and the headline
        metric when the table id is known

    Raises:
        CountTableError: If the theory does not cover exactly the table's cells
    """
    if theory is None:
        theory = printed_theory(table) if table.has_theory() else model_theory(table.table_id)
    cells = {(row.input_state, row.outcome) for row in table.rows}
    if cells != set(theory):
        missing = sorted(cells - set(theory))
        extra = sorted(set(theory) - cells)
        logger.error(f"Label mismatch in {table.table_id}: missing {missing}, extra {extra}")
        raise CountTableError(f"Table {table.table_id}: theory labels do not match (missing {missing}, extra {extra})")

    rows = relative_frequencies(table)
    for row in rows:
        row.p_t = theory[(row.input_state, row.outcome)]
        row.z_score = _z_score(row.f, row.p_t, row.sigma_f)

    spec = METRICS.get(table.table_id)
    per_input: Dict[str, AggregateMetric] = {}
    aggregate = None
    if spec is not None:
        for input_state, group in table.groups().items():
            per_input[input_state] = _metric(group, spec, theory, _group_theory(group, spec, theory))
        aggregate = _metric(table.rows, spec, theory, spec.theory())
        logger.info(f"{table.table_id}: {spec.name} = {aggregate.display} (theory {aggregate.theory:.5f})")
    else:
        logger.warning(f"No headline metric defined for table {table.table_id}")

    return TableComparison(table_id=table.table_id, rows=rows, per_input=per_input, aggregate=aggregate)


class ExperimentEvaluator:
    """Evaluate the bundled count tables or user-supplied ones."""

    def __init__(self, data_dir: Optional[Path] = None):
        """Initialize the evaluator.

        Args:
            data_dir: Directory of the bundled tables, QOTSIM_DATA_DIR by default
        """
        self.data_dir = data_dir

    def evaluate_table(self, table_id: str) -> TableComparison:
        table = load_bundled_table(table_id, data_dir=self.data_dir)
        report = compare_to_theory(table)
        path = (self.data_dir or get_config().data_dir) / f"{table_id}.csv"
        report.checksum = file_checksum(path)
        return report

    def evaluate_file(self, path: Path) -> TableComparison:
        """Load any CSV in the count-table schema and compare it."""
        try:
            report = compare_to_theory(load_counts(path))
        except Exception as e:
            logger.error(f"Error evaluating {path}: {e}")
            raise
        report.checksum = file_checksum(path)
        return report

    def evaluate_all(self) -> Dict[str, TableComparison]:
        return {table_id: self.evaluate_table(table_id) for table_id in BUNDLED_TABLES}

    def headline_metrics(self) -> Dict[str, AggregateMetric]:
        """The five pooled rates, keyed by metric name."""
        return {
            report.aggregate.name: report.aggregate
            for report in self.evaluate_all().values()
            if report.aggregate is not None
        }