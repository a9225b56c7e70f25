"""Repositories for reports and transcripts."""

from src.experiments.repositories.report_repository import ReportRepository, TranscriptRepository

__all__ = ["ReportRepository", "TranscriptRepository"]
