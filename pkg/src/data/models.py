"""Data models for measured count tables."""

from collections import OrderedDict
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, model_validator

from src.exceptions import CountTableError


class CountRow(BaseModel):
    """One cell of a count table: a prepared state and a measurement outcome."""

    input_state: str
    outcome: str
    counts: int = Field(ge=0)
    p_t: Optional[float] = Field(default=None, ge=0.0, le=1.0)


class CountTable(BaseModel):
    """Measured counts grouped by input state.

    Rows keep the order of the source file, so groups and outcomes come out
    in the order they were transcribed.
    """

    table_id: str
    rows: List[CountRow]

    @model_validator(mode="after")
    def check_rows(self) -> "CountTable":
        if not self.rows:
            raise CountTableError(f"Table {self.table_id} has no rows")
        seen = set()
        for row in self.rows:
            key = (row.input_state, row.outcome)
            if key in seen:
                raise CountTableError(f"Table {self.table_id}: duplicate cell {key}")
            seen.add(key)
        return self

    def groups(self) -> Dict[str, List[CountRow]]:
        """Rows per input state, in file order."""
        grouped: Dict[str, List[CountRow]] = OrderedDict()
        for row in self.rows:
            grouped.setdefault(row.input_state, []).append(row)
        return grouped

    @property
    def total(self) -> int:
        return sum(row.counts for row in self.rows)

    def has_theory(self) -> bool:
        return all(row.p_t is not None for row in self.rows)


class ComparisonRow(BaseModel):
    """Relative frequency of one cell next to its theoretical probability."""

    input_state: str
    outcome: str
    counts: int
    f: float = Field(ge=0.0, le=1.0)
    sigma_f: float = Field(ge=0.0)
    p_t: Optional[float] = None
    z_score: Optional[float] = None
    display: str


class AggregateMetric(BaseModel):
    """A headline rate pooled over a whole table."""

    name: str
    successes: int
    trials: int
    value: float
    sigma: float
    display: str
    theory: float
    z_score: Optional[float] = None


class TableComparison(BaseModel):
    """JSON report for one table: rows, per-input summaries and the pooled metric."""

    table_id: str
    rows: List[ComparisonRow]
    per_input: Dict[str, AggregateMetric] = Field(default_factory=dict)
    aggregate: Optional[AggregateMetric] = None
    checksum: Optional[str] = None
