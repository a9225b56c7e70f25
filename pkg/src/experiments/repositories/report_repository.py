"""Repositories for command reports and protocol transcripts."""

import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

from src.utils.logger import get_logger
from src.utils.text_utils import sanitize_filename

logger = get_logger(__name__)


def _default_dir(name: str) -> Path:
    root_dir = Path(__file__).parent.parent.parent.parent
    return root_dir / "results" / name


class ReportRepository:
    """Stores JSON reports, one file per report name."""

    def __init__(self, reports_dir: Optional[Union[str, Path]] = None):
        """Initialize the report repository.

        Args:
            reports_dir: Directory for reports, defaults to results/reports
        """
        self.reports_dir = Path(reports_dir) if reports_dir is not None else _default_dir("reports")
        self.reports_dir.mkdir(exist_ok=True, parents=True)

    def path_for(self, name: str) -> Path:
        return self.reports_dir / f"{sanitize_filename(name)}.json"

    def save_report(self, name: str, report: Dict[str, Any]) -> Path:
        """Write ``report`` as indented JSON with sorted keys.

        Args:
            name: Report name, sanitized into the file name
            report: JSON-ready dictionary

        Returns:
            Path of the written file
        """
        path = self.path_for(name)
        try:
            with open(path, "w", encoding="utf-8") as f:
                json.dump(report, f, indent=2, sort_keys=True)
                f.write("\n")
        except (OSError, TypeError) as e:
            logger.error(f"Error saving report {name}: {e}")
            raise
        logger.info(f"Saved report: {path}")
        return path

    def load_report(self, name: str) -> Dict[str, Any]:
        path = self.path_for(name)
        if not path.exists():
            raise FileNotFoundError(f"Report not found: {path}")
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)

    def list_reports(self) -> List[str]:
        return sorted(p.stem for p in self.reports_dir.glob("*.json"))


class TranscriptRepository:
    """Stores protocol transcripts as line-delimited JSON, one round per line."""

    def save_transcript(
        self, path: Union[str, Path], records: Iterable[Dict[str, Any]], header: Optional[Dict[str, Any]] = None
    ) -> int:
        """Write a transcript.

        Args:
            path: Output file
            records: Per-round records
            header: Written as the first line under the key ``"manifest"``

        Returns:
            Number of round records written
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        count = 0
        with open(path, "w", encoding="utf-8") as f:
            if header is not None:
                f.write(json.dumps({"manifest": header}, sort_keys=True) + "\n")
            for record in records:
                f.write(json.dumps(record, sort_keys=True) + "\n")
                count += 1
        logger.info(f"Saved {count} transcript records: {path}")
        return count

    def load_transcript(self, path: Union[str, Path]) -> Dict[str, Any]:
        """Read a transcript written by ``save_transcript``.

        Returns:
            Dictionary with ``manifest`` (or None) and the list of ``records``
        """
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Transcript not found: {path}")

        manifest = None
        records = []
        with open(path, "r", encoding="utf-8") as f:
            for number, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                try:
                    entry = json.loads(line)
                except json.JSONDecodeError as e:
                    logger.error(f"Malformed transcript line {number} in {path}: {e}")
                    raise
                if number == 1 and "manifest" in entry:
                    manifest = entry["manifest"]
                else:
                    records.append(entry)
        return {"manifest": manifest, "records": records}
