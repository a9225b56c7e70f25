"""Unit tests for count-table loading."""

import json
from pathlib import Path

import pytest

from src.data import BUNDLED_TABLES, CountTableReader, file_checksum, load_bundled_table, load_counts
from src.exceptions import CountTableError

HEADER = "table_id,input_state,outcome,counts,p_t\n"


@pytest.fixture
def write_csv(tmp_path: Path):
    """Write CSV text to a temporary file and return its path."""

    def make(text: str, name: str = "table.csv") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return make


def test_parses_correct_transfer_row():
    table = load_bundled_table("correct_transfer")
    first = table.rows[0]
    assert (first.input_state, first.outcome, first.counts) == ("00", "0+", 892)
    assert first.p_t == pytest.approx(0.5)
    assert list(table.groups()) == ["00", "++", "--", "11"]
    assert table.total == 6696


@pytest.mark.parametrize("table_id", BUNDLED_TABLES)
def test_bundled_tables_load_with_checksum(table_id: str):
    table = load_bundled_table(table_id)
    assert table.table_id == table_id
    assert table.has_theory()


def test_labels_are_kept_as_text(write_csv):
    path = write_csv(HEADER + "t,00,01,5,\nt,00,10,7,\n")
    table = load_counts(path)
    assert [row.outcome for row in table.rows] == ["01", "10"]
    assert table.rows[0].p_t is None
    assert not table.has_theory()


def test_theory_column_is_optional(write_csv):
    table = load_counts(write_csv("table_id,input_state,outcome,counts\nt,a,x,3\n"))
    assert table.rows[0].counts == 3


def test_empty_file_is_rejected(write_csv):
    with pytest.raises(CountTableError):
        load_counts(write_csv(""))


def test_header_only_is_rejected(write_csv):
    with pytest.raises(CountTableError):
        load_counts(write_csv(HEADER))


def test_duplicate_cell_is_rejected(write_csv):
    with pytest.raises(CountTableError, match="duplicate"):
        load_counts(write_csv(HEADER + "t,00,0+,1,\nt,00,0+,2,\n"))


def test_negative_counts_are_rejected(write_csv):
    with pytest.raises(CountTableError, match="negative"):
        load_counts(write_csv(HEADER + "t,00,0+,-1,\n"))


@pytest.mark.parametrize("counts", ["abc", "1.5", ""])
def test_malformed_counts_are_rejected(write_csv, counts: str):
    with pytest.raises(CountTableError):
        load_counts(write_csv(HEADER + f"t,00,0+,{counts},\n"))


def test_missing_column_is_rejected(write_csv):
    with pytest.raises(CountTableError, match="missing columns"):
        load_counts(write_csv("table_id,input_state,counts\nt,00,1\n"))


def test_mixed_table_ids_are_rejected(write_csv):
    with pytest.raises(CountTableError, match="one table_id"):
        load_counts(write_csv(HEADER + "a,00,0+,1,\nb,00,0-,1,\n"))


def test_bad_theory_value_is_rejected(write_csv):
    with pytest.raises(CountTableError):
        load_counts(write_csv(HEADER + "t,00,0+,1,half\n"))


def test_missing_file_raises():
    with pytest.raises(FileNotFoundError):
        CountTableReader("does/not/exist.csv")


def test_checksum_mismatch_is_detected(tmp_path: Path):
    source = load_bundled_table("alice_guess")
    path = tmp_path / "alice_guess.csv"
    rows = "".join(f"alice_guess,{r.input_state},{r.outcome},{r.counts + 1},{r.p_t}\n" for r in source.rows)
    path.write_text(HEADER + rows, encoding="utf-8")
    (tmp_path / "checksums.json").write_text(json.dumps({"alice_guess.csv": "0" * 64}), encoding="utf-8")

    with pytest.raises(CountTableError, match="Checksum"):
        load_bundled_table("alice_guess", data_dir=tmp_path)
    assert load_bundled_table("alice_guess", data_dir=tmp_path, verify=False).total == source.total + 4
    assert len(file_checksum(path)) == 64


def test_unknown_bundled_table():
    with pytest.raises(CountTableError):
        load_bundled_table("table_vi")


def test_write_csv_round_trip(tmp_path: Path):
    path = tmp_path / "out" / "rows.csv"
    CountTableReader.write_csv(
        [{"table_id": "t", "input_state": "++", "outcome": "+-", "counts": 4}], path
    )
    table = load_counts(path)
    assert table.rows[0].outcome == "+-"
    assert table.rows[0].counts == 4
