"""Manager behind every command-line subcommand."""

from dataclasses import asdict
from pathlib import Path
from typing import Any, Dict, Literal, Optional, Sequence

import pandas as pd

from src.bounds.cheat_bounds import (
    TradeoffPoint,
    minimax_general,
    minimax_pure_symmetric,
    parse_grid,
    tradeoff_curve,
)
from src.bounds.gram import srm_fidelity_lower_bound
from src.cheating.alice import (
    EntangledSender,
    alice_certainty_profile,
    alice_cheat_optimize,
    alice_cheat_probability,
)
from src.cheating.bob import SrmReceiver, bob_cheat_closed_form, compare_bases_to_srm
from src.cheating.framework_attack import framework_alice_attack
from src.circuits.preparation import CircuitParams, verify_preparation
from src.config import get_config
from src.evaluators.experiment_evaluator import ExperimentEvaluator
from src.experiments.monte_carlo import MonteCarloRunner
from src.experiments.repositories.report_repository import TranscriptRepository
from src.experiments.run_manifest import RunManifest
from src.measurements.state_sets import protocol_state_set
from src.protocol.combined import equalizing_mix_probability, run_combined, trivial_mixture
from src.protocol.engine import ProtocolConfig, run_protocol, transcript_summary
from src.protocol.framework import example_framework
from src.utils.logger import get_logger

logger = get_logger(__name__)

MIN_ROUNDS = 4
CheatMode = Literal["none", "alice", "bob"]


def _complex_pairs(values: Sequence[complex]) -> list:
    return [[float(v.real), float(v.imag)] for v in values]


class ExperimentManager:
    """Runs one subcommand and wraps its result with the run manifest.

    Every public method returns a JSON-ready dictionary with the keys
    ``manifest`` and ``result``.
    """

    def __init__(
        self,
        runner: Optional[MonteCarloRunner] = None,
        evaluator: Optional[ExperimentEvaluator] = None,
        transcript_repo: Optional[TranscriptRepository] = None,
    ):
        """Initialize the experiment manager.

        Args:
            runner: Monte Carlo runner for the combined protocol
            evaluator: Count-table evaluator
            transcript_repo: Where exported transcripts are written
        """
        self.runner = runner or MonteCarloRunner()
        self.evaluator = evaluator or ExperimentEvaluator()
        self.transcript_repo = transcript_repo or TranscriptRepository()

    @staticmethod
    def _wrap(manifest: RunManifest, result: Dict[str, Any]) -> Dict[str, Any]:
        return {"manifest": manifest.to_dict(), "result": result}

    def bounds(
        self,
        f: Optional[float] = None,
        curve: Optional[str] = None,
        minimax: bool = False,
        pure_symmetric: bool = False,
    ) -> Dict[str, Any]:
        """Evaluate the cheat bounds at one fidelity, on a grid, or at the minimax point.

        Raises:
            ValueError: If not exactly one mode is selected, or F is out of range
        """
        modes = sum([f is not None, curve is not None, minimax])
        if modes != 1:
            raise ValueError("Choose exactly one of --f, --curve and --minimax")
        manifest = RunManifest(
            "bounds", {"f": f, "curve": curve, "minimax": minimax, "pure_symmetric": pure_symmetric}
        )

        if f is not None:
            result: Dict[str, Any] = TradeoffPoint.at(f).model_dump()
        elif curve is not None:
            points = tradeoff_curve(parse_grid(curve))
            frame = pd.DataFrame([point.model_dump() for point in points])
            result = {"columns": list(frame.columns), "csv": frame.to_csv(index=False), "points": len(points)}
        else:
            F, value = minimax_pure_symmetric() if pure_symmetric else minimax_general()
            result = {"F": F, "value": value, "family": "pure_symmetric" if pure_symmetric else "general"}
        return self._wrap(manifest, result)

    def simulate(
        self,
        rounds: int,
        seed: Optional[int] = None,
        cheat: CheatMode = "none",
        export: Optional[Path] = None,
        test_mode: Literal["declared", "blind"] = "declared",
        randomize_orientation: bool = False,
    ) -> Dict[str, Any]:
        """Run the protocol once with the chosen cheating party.

        Args:
            rounds: Total rounds, tests included
            seed: Root seed, QOTSIM_SEED by default
            cheat: ``"alice"`` uses the entangled sender, ``"bob"`` the product measurement
            export: Optional JSONL path for the per-round transcript
            test_mode: ``"declared"`` or ``"blind"`` test phase
            randomize_orientation: Let Bob pick which qubit he measures in Z

        Returns:
            Rates with their binomial sigma, and the closed-form value of the cheat
        """
        if rounds < MIN_ROUNDS:
            raise ValueError(f"Need at least {MIN_ROUNDS} rounds (one test and one payload round), got {rounds}")
        seed = get_config().simulation.default_seed if seed is None else seed
        config = ProtocolConfig(
            total_rounds=rounds, seed=seed, test_mode=test_mode, randomize_orientation=randomize_orientation
        )
        manifest = RunManifest(
            "simulate",
            {
                "rounds": rounds,
                "cheat": cheat,
                "test_mode": test_mode,
                "randomize_orientation": randomize_orientation,
                "test_count": config.test_count,
            },
            seed=seed,
        )

        sender = EntangledSender() if cheat == "alice" else None
        receiver = SrmReceiver() if cheat == "bob" else None
        transcript = run_protocol(config, sender, receiver)
        result = transcript_summary(transcript)
        result["cheat"] = cheat
        if cheat == "bob":
            result["closed_form"] = bob_cheat_closed_form()
        elif cheat == "alice":
            result["closed_form"] = alice_cheat_probability(sender.params)

        if export is not None:
            written = self.transcript_repo.save_transcript(export, transcript.records(), header=manifest.to_dict())
            result["exported_records"] = written
        return self._wrap(manifest, result)

    async def combined(
        self,
        p: Optional[float] = None,
        strategy: Literal["alice", "bob", "both"] = "both",
        runs: Optional[int] = None,
        seed: Optional[int] = None,
    ) -> Dict[str, Any]:
        """Mixed protocol at ``p`` (the equalizing probability by default)."""
        config = get_config()
        p_star, value = equalizing_mix_probability()
        p = p_star if p is None else p
        runs = runs or config.simulation.default_rounds
        seed = config.simulation.default_seed if seed is None else seed
        manifest = RunManifest("combined", {"p": p, "strategy": strategy, "runs": runs}, seed=seed)

        report = await run_combined(p, strategy=strategy, runs=runs, seed=seed, runner=self.runner)
        result = report.to_dict()
        result["equalizing"] = {"p": p_star, "value": value}
        result["trivial_mixture"] = trivial_mixture()
        return self._wrap(manifest, result)

    def optimize_cheat(self, restarts: Optional[int] = None, seed: Optional[int] = None) -> Dict[str, Any]:
        """Alice's optimal cheat state, her certainty profile, Bob's bases and the generic attack."""
        config = get_config()
        restarts = restarts or config.optimizer.alice_restarts
        seed = config.simulation.default_seed if seed is None else seed
        manifest = RunManifest("optimize-cheat", {"restarts": restarts}, seed=seed)

        best = alice_cheat_optimize(restarts=restarts, seed=seed)
        profile = alice_certainty_profile(best.params)
        result = {
            "alice": {
                "value": best.value,
                "helstrom_value": best.helstrom_value,
                "converged": best.converged,
                "balance": best.params.balance,
                "amplitudes": _complex_pairs(best.params.amplitudes),
                "start_value_spread": max(best.start_values) - min(best.start_values),
                "certainty": {
                    "certain_fraction": profile.certain_fraction,
                    "accuracy_otherwise": profile.accuracy_otherwise,
                    "certain_outcomes": list(profile.certain_outcomes),
                },
            },
            "bob": {
                "closed_form": bob_cheat_closed_form(),
                "srm_lower_bound": srm_fidelity_lower_bound(protocol_state_set().density_matrices()),
                **asdict(compare_bases_to_srm()),
            },
            "framework_attack": framework_alice_attack(example_framework()).model_dump(),
        }
        return self._wrap(manifest, result)

    def prep(
        self,
        params: Optional[CircuitParams] = None,
        restarts: Optional[int] = None,
        seed: Optional[int] = None,
    ) -> Dict[str, Any]:
        """Check a preparation circuit against the target state, tabulated parameters by default."""
        config = get_config()
        params = params or CircuitParams.reference()
        restarts = restarts or config.optimizer.lu_restarts
        seed = config.simulation.default_seed if seed is None else seed
        manifest = RunManifest("prep", {"circuit": params.model_dump(), "restarts": restarts}, seed=seed)

        report = verify_preparation(params, restarts=restarts, seed=seed)
        return self._wrap(manifest, report.model_dump())

    def compare(self, data: Optional[Path] = None) -> Dict[str, Any]:
        """Compare one CSV, or every bundled table, with the model."""
        manifest = RunManifest("compare", {"data": str(data) if data is not None else None})
        if data is not None:
            result: Dict[str, Any] = self.evaluator.evaluate_file(Path(data)).model_dump()
        else:
            reports = self.evaluator.evaluate_all()
            result = {
                "tables": {table_id: report.model_dump() for table_id, report in reports.items()},
                "aggregates": {
                    report.aggregate.name: report.aggregate.model_dump()
                    for report in reports.values()
                    if report.aggregate is not None
                },
            }
        return self._wrap(manifest, result)
