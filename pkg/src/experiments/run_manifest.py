"""Run manifests embedded in every command output."""

import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict, Optional

from src.config import get_config

TIMESTAMP_ENV = "QOTSIM_TIMESTAMP"


def manifest_timestamp() -> str:
    """QOTSIM_TIMESTAMP when set, otherwise the current UTC time."""
    fixed = os.environ.get(TIMESTAMP_ENV)
    if fixed:
        return fixed
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class RunManifest:
    """Everything needed to reproduce one command's output."""

    subcommand: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    seed: Optional[int] = None
    artifact_version: str = field(default_factory=lambda: get_config().artifact_version)
    timestamp: str = field(default_factory=manifest_timestamp)

    def to_dict(self) -> Dict[str, Any]:
        """Convert manifest to dictionary for storage."""
        return {
            "subcommand": self.subcommand,
            "parameters": dict(sorted(self.parameters.items())),
            "seed": self.seed,
            "artifact_version": self.artifact_version,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunManifest":
        """Rebuild a saved manifest; its timestamp is reused as-is."""
        return cls(
            subcommand=data["subcommand"],
            parameters=dict(data.get("parameters", {})),
            seed=data.get("seed"),
            artifact_version=data.get("artifact_version", get_config().artifact_version),
            timestamp=data["timestamp"],
        )
