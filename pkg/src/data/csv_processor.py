"""Reading and writing count tables as CSV."""

import csv
import hashlib
import json
from pathlib import Path
from typing import Dict, List, Optional, Union

import pandas as pd
from pydantic import ValidationError

from src.config import get_config
from src.data.models import CountRow, CountTable
from src.exceptions import CountTableError
from src.utils.logger import get_logger

logger = get_logger(__name__)

REQUIRED_COLUMNS = ("table_id", "input_state", "outcome", "counts")
CHECKSUM_FILE = "checksums.json"
BUNDLED_TABLES = ("correct_transfer", "honest_alarms", "bob_cheating", "alice_guess", "alice_tests")


def file_checksum(path: Union[str, Path]) -> str:
    """SHA-256 of the file contents."""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


class CountTableReader:
    """Read one count table from a CSV file."""

    def __init__(self, input_path: Union[str, Path]):
        """Initialize the reader.

        Args:
            input_path: Path to a CSV with header ``table_id,input_state,outcome,counts[,p_t]``
        """
        self.input_path = Path(input_path)
        if not self.input_path.exists():
            raise FileNotFoundError(f"Count table not found: {self.input_path}")

    def _normalize_column_names(self, df: pd.DataFrame) -> pd.DataFrame:
        df.columns = [str(col).strip().lower().replace(" ", "_") for col in df.columns]
        missing = [col for col in REQUIRED_COLUMNS if col not in df.columns]
        if missing:
            raise CountTableError(f"{self.input_path.name}: missing columns {missing}")
        return df

    def _process_numeric_fields(self, df: pd.DataFrame) -> pd.DataFrame:
        counts = pd.to_numeric(df["counts"], errors="coerce")
        bad = counts.isna() | (counts % 1 != 0)
        if bad.any():
            raise CountTableError(
                f"{self.input_path.name}: non-integer counts in rows {list(df.index[bad] + 2)}"
            )
        if (counts < 0).any():
            raise CountTableError(f"{self.input_path.name}: negative counts")
        df["counts"] = counts.astype(int)

        if "p_t" in df.columns:
            blank = df["p_t"].str.strip() == ""
            theory = pd.to_numeric(df["p_t"].where(~blank), errors="coerce")
            if (theory.isna() & ~blank).any():
                raise CountTableError(f"{self.input_path.name}: non-numeric p_t values")
            df["p_t"] = theory
        return df

    def read_table(self) -> CountTable:
        """Parse and validate the file.

        Returns:
            CountTable with rows in file order

        Raises:
            CountTableError: On an empty file, malformed rows, negative counts
                or duplicate ``(input_state, outcome)`` cells
        """
        logger.info(f"Reading count table: {self.input_path}")
        try:
            df = pd.read_csv(self.input_path, dtype=str, keep_default_na=False)
        except pd.errors.EmptyDataError as e:
            raise CountTableError(f"{self.input_path.name} is empty") from e

        if df.empty:
            raise CountTableError(f"{self.input_path.name} has a header but no rows")
        df = self._normalize_column_names(df)
        for col in ("table_id", "input_state", "outcome"):
            df[col] = df[col].str.strip()
            if (df[col] == "").any():
                raise CountTableError(f"{self.input_path.name}: empty {col} values")
        df = self._process_numeric_fields(df)

        table_ids = df["table_id"].unique()
        if len(table_ids) != 1:
            raise CountTableError(f"{self.input_path.name}: expected one table_id, got {list(table_ids)}")

        has_theory = "p_t" in df.columns
        try:
            table = CountTable(
                table_id=str(table_ids[0]),
                rows=[
                    CountRow(
                        input_state=record["input_state"],
                        outcome=record["outcome"],
                        counts=int(record["counts"]),
                        p_t=float(record["p_t"]) if has_theory and pd.notna(record["p_t"]) else None,
                    )
                    for record in df.to_dict(orient="records")
                ],
            )
        except ValidationError as e:
            logger.error(f"Invalid count table {self.input_path}: {e}")
            raise CountTableError(f"{self.input_path.name}: {e.errors()[0]['msg']}") from e

        logger.info(f"Loaded {len(table.rows)} cells of table {table.table_id}")
        return table

    @staticmethod
    def write_csv(
        data: List[Dict], output_path: Union[str, Path], fieldnames: Optional[List[str]] = None
    ) -> None:
        """Write rows of dictionaries to a CSV file.

        Args:
            data: Rows to write
            output_path: Path to the output CSV file
            fieldnames: Column order, keys of the first row by default
        """
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        field_names = fieldnames or (list(data[0].keys()) if data else [])

        logger.info(f"Writing CSV file: {output_path}")
        try:
            with open(output_path, "w", newline="", encoding="utf-8") as csvfile:
                writer = csv.DictWriter(csvfile, fieldnames=field_names)
                writer.writeheader()
                writer.writerows(data)
        except Exception as e:
            logger.error(f"Error writing CSV: {e}")
            raise


def load_counts(path: Union[str, Path]) -> CountTable:
    return CountTableReader(path).read_table()


def bundled_checksums(data_dir: Optional[Path] = None) -> Dict[str, str]:
    data_dir = data_dir or get_config().data_dir
    return json.loads((data_dir / CHECKSUM_FILE).read_text(encoding="utf-8"))


def load_bundled_table(table_id: str, data_dir: Optional[Path] = None, verify: bool = True) -> CountTable:
    """Load one of the shipped tables, checking its transcription checksum.

    Args:
        table_id: One of ``BUNDLED_TABLES``
        data_dir: Directory holding the CSV files, QOTSIM_DATA_DIR by default
        verify: Compare the file's SHA-256 with ``checksums.json``

    Returns:
        The parsed table
    """
    if table_id not in BUNDLED_TABLES:
        raise CountTableError(f"Unknown table {table_id!r}, expected one of {BUNDLED_TABLES}")
    data_dir = data_dir or get_config().data_dir
    path = data_dir / f"{table_id}.csv"
    if verify:
        expected = bundled_checksums(data_dir).get(path.name)
        actual = file_checksum(path)
        if expected != actual:
            raise CountTableError(f"Checksum mismatch for {path.name}: {actual} != {expected}")
    return load_counts(path)
