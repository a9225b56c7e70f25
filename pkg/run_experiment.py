"""Reproduce every headline number and write one JSON report per command."""

import argparse
import asyncio
import os
from pathlib import Path

from src.experiments.experiment_manager import ExperimentManager
from src.experiments.repositories import ReportRepository
from src.utils.logger import get_logger

logger = get_logger(__name__)


async def main(output_dir: Path, rounds: int, seed: int) -> None:
    """Run all reproduction steps.

    Args:
        output_dir: Directory for the JSON reports
        rounds: Monte Carlo rounds for the simulations
        seed: Root seed shared by every step
    """
    manager = ExperimentManager()
    reports = ReportRepository(output_dir)

    steps = {
        "bounds_minimax_general": lambda: manager.bounds(minimax=True),
        "bounds_minimax_pure_symmetric": lambda: manager.bounds(minimax=True, pure_symmetric=True),
        "bounds_at_one_half": lambda: manager.bounds(f=0.5),
        "bounds_curve": lambda: manager.bounds(curve="0:1:0.05"),
        "simulate_honest": lambda: manager.simulate(rounds, seed=seed),
        "simulate_bob_cheat": lambda: manager.simulate(rounds, seed=seed, cheat="bob"),
        "simulate_alice_cheat": lambda: manager.simulate(rounds, seed=seed, cheat="alice"),
        "simulate_blind_tests": lambda: manager.simulate(
            rounds, seed=seed, test_mode="blind", randomize_orientation=True
        ),
        "optimize_cheat": lambda: manager.optimize_cheat(seed=seed),
        "prep_reference_circuit": lambda: manager.prep(seed=seed),
        "compare_tables": lambda: manager.compare(),
    }

    for name, step in steps.items():
        logger.info(f"Running {name}")
        try:
            reports.save_report(name, step())
        except Exception as e:
            logger.error(f"Step {name} failed: {e}")

    try:
        reports.save_report("combined", await manager.combined(runs=rounds, seed=seed))
    except Exception as e:
        logger.error(f"Step combined failed: {e}")

    logger.info(f"Reports written to {output_dir}: {', '.join(reports.list_reports())}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Reproduce all headline results")
    parser.add_argument("--output", type=Path, default=Path("results/reports"))
    parser.add_argument("--rounds", type=int, default=100_000)
    parser.add_argument("--seed", type=int, default=int(os.environ.get("QOTSIM_SEED", "20210611")))
    args = parser.parse_args()
    asyncio.run(main(args.output, args.rounds, args.seed))
