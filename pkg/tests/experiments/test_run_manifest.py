"""Unit tests for run manifests and the report/transcript repositories."""

import ast
import json
from pathlib import Path

import numpy as np
import pytest

from src.experiments import MonteCarloRunner, RunManifest, binomial_estimate
from src.experiments.repositories import ReportRepository, TranscriptRepository
from src.protocol import ProtocolConfig, Transcript, run_honest


def test_timestamp_from_environment(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.setenv("QOTSIM_TIMESTAMP", "fixed")
    manifest = RunManifest("bounds", {"minimax": True})
    assert manifest.timestamp == "fixed"
    assert manifest.to_dict()["artifact_version"] == "0.1.0"


def test_timestamp_defaults_to_utc_now(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.delenv("QOTSIM_TIMESTAMP", raising=False)
    assert RunManifest("bounds").timestamp.endswith("+00:00")


def test_replayed_manifest_is_identical(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.delenv("QOTSIM_TIMESTAMP", raising=False)
    original = RunManifest("simulate", {"rounds": 10, "cheat": "bob"}, seed=4)
    replayed = RunManifest.from_dict(json.loads(json.dumps(original.to_dict())))
    assert json.dumps(replayed.to_dict()) == json.dumps(original.to_dict())


def test_parameters_are_sorted():
    manifest = RunManifest("x", {"b": 1, "a": 2}, timestamp="t")
    assert list(manifest.to_dict()["parameters"]) == ["a", "b"]


def test_report_repository(tmp_path: Path):
    repo = ReportRepository(tmp_path / "reports")
    path = repo.save_report("bob: cheat", {"value": 0.7285, "nested": {"b": 1, "a": 2}})
    assert path.name == "bob__cheat.json"
    assert repo.load_report("bob: cheat")["nested"] == {"a": 2, "b": 1}
    assert repo.list_reports() == ["bob__cheat"]
    with pytest.raises(FileNotFoundError):
        repo.load_report("missing")


def test_transcript_round_trip(tmp_path: Path):
    config = ProtocolConfig(total_rounds=50, seed=9)
    transcript = run_honest(config)
    repo = TranscriptRepository()
    path = tmp_path / "t" / "run.jsonl"
    assert repo.save_transcript(path, transcript.records(), header={"subcommand": "simulate"}) == 50

    loaded = repo.load_transcript(path)
    assert loaded["manifest"] == {"subcommand": "simulate"}
    rebuilt = Transcript.from_records(loaded["records"], config)
    assert np.array_equal(rebuilt.bob_y, transcript.bob_y)
    assert np.array_equal(rebuilt.is_test, transcript.is_test)


def test_transcript_without_header(tmp_path: Path):
    path = tmp_path / "plain.jsonl"
    path.write_text('{"round": 0}\n\n{"round": 1}\n', encoding="utf-8")
    loaded = TranscriptRepository().load_transcript(path)
    assert loaded["manifest"] is None
    assert [r["round"] for r in loaded["records"]] == [0, 1]


def test_malformed_transcript_line(tmp_path: Path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"round": 0}\nnot json\n', encoding="utf-8")
    with pytest.raises(json.JSONDecodeError):
        TranscriptRepository().load_transcript(path)


def test_binomial_estimate():
    p, sigma = binomial_estimate(75, 100)
    assert p == 0.75
    assert sigma == pytest.approx(np.sqrt(0.75 * 0.25 / 100))
    with pytest.raises(ValueError):
        binomial_estimate(0, 0)


@pytest.mark.asyncio
async def test_runner_counts_do_not_depend_on_threads():
    def task(rng: np.random.Generator, n: int) -> np.ndarray:
        return np.bincount(rng.integers(0, 3, size=n), minlength=3)

    single = await MonteCarloRunner(threads=1, batch_size=700).run(task, 5000, 1, "test")
    many = await MonteCarloRunner(threads=4, batch_size=700).run(task, 5000, 1, "test")
    assert np.array_equal(single, many)
    assert single.sum() == 5000
    assert MonteCarloRunner(batch_size=700).batch_sizes(1500) == [700, 700, 100]


def test_every_source_module_has_a_docstring():
    root = Path(__file__).resolve().parents[2]
    missing = [
        str(path.relative_to(root))
        for path in sorted((root / "src").rglob("*.py"))
        if ast.get_docstring(ast.parse(path.read_text(encoding="utf-8"))) is None
    ]
    assert missing == []
