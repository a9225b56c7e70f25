"""Count tables: models, CSV loading and the bundled measurement data."""

from src.data.csv_processor import (
    BUNDLED_TABLES,
    CountTableReader,
    file_checksum,
    load_bundled_table,
    load_counts,
)
from src.data.models import AggregateMetric, ComparisonRow, CountRow, CountTable, TableComparison

__all__ = [
    "BUNDLED_TABLES",
    "AggregateMetric",
    "ComparisonRow",
    "CountRow",
    "CountTable",
    "CountTableReader",
    "TableComparison",
    "file_checksum",
    "load_bundled_table",
    "load_counts",
]
