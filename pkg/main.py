"""Command-line entry point for the quantum oblivious transfer simulator."""

import argparse
import asyncio
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

from src.circuits.preparation import CircuitParams
from src.config import get_config, validate_config
from src.experiments.experiment_manager import ExperimentManager
from src.utils.logger import get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INTERRUPTED = 130


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subparser per command.

    Returns:
        Configured parser
    """
    parser = argparse.ArgumentParser(
        prog="qotsim", description="Simulate and analyze semi-random quantum oblivious transfer"
    )
    parser.add_argument("--pretty", action="store_true", help="Print a human-readable summary instead of JSON")
    sub = parser.add_subparsers(dest="command", required=True)

    bounds = sub.add_parser("bounds", help="Cheat-probability bounds as functions of the fidelity")
    bounds.add_argument("--f", type=float, default=None, help="Evaluate every bound at this fidelity")
    bounds.add_argument("--curve", type=str, default=None, help="Grid start:stop:step, emitted as CSV")
    bounds.add_argument("--minimax", action="store_true", help="Fidelity minimizing the larger bound")
    bounds.add_argument("--pure-symmetric", action="store_true", help="Use the pure symmetric bound for Bob")

    simulate = sub.add_parser("simulate", help="Run the protocol with an optional cheating party")
    simulate.add_argument("--rounds", type=int, default=None, help="Total rounds, QOTSIM_ROUNDS by default")
    simulate.add_argument("--seed", type=int, default=None, help="Root seed, QOTSIM_SEED by default")
    simulate.add_argument("--cheat", choices=["none", "alice", "bob"], default="none")
    simulate.add_argument("--export", type=Path, default=None, help="Write the transcript as JSONL")
    simulate.add_argument("--test-mode", choices=["declared", "blind"], default="declared")
    simulate.add_argument("--randomize-orientation", action="store_true")

    combined = sub.add_parser("combined", help="Protocol mixed with a trivial one by a fair coin")
    combined.add_argument("--p", type=float, default=None, help="Mixing probability, equalizing by default")
    combined.add_argument("--strategy", choices=["alice", "bob", "both"], default="both")
    combined.add_argument("--runs", type=int, default=None)
    combined.add_argument("--seed", type=int, default=None)

    optimize = sub.add_parser("optimize-cheat", help="Optimize Alice's cheat state and report both attacks")
    optimize.add_argument("--restarts", type=int, default=None)
    optimize.add_argument("--seed", type=int, default=None)

    prep = sub.add_parser("prep", help="Check the state-preparation circuit")
    prep.add_argument("--verify-table-iv", action="store_true", help="Use the tabulated circuit parameters")
    prep.add_argument("--theta", type=float, nargs=3, default=None, metavar="DEG")
    prep.add_argument("--phi", type=float, nargs=3, default=None, metavar="DEG")
    prep.add_argument("--alpha", type=float, default=None)
    prep.add_argument("--beta", type=float, default=None)
    prep.add_argument("--restarts", type=int, default=None)
    prep.add_argument("--seed", type=int, default=None)

    compare = sub.add_parser("compare", help="Compare measured count tables with the model")
    compare.add_argument("--data", type=Path, default=None, help="CSV file, all bundled tables by default")

    return parser


def circuit_from_args(args: argparse.Namespace) -> Optional[CircuitParams]:
    """Custom circuit parameters, or None for the tabulated ones.

    Raises:
        ValueError: If custom parameters are incomplete or combined with --verify-table-iv
    """
    custom = [args.theta, args.phi, args.alpha, args.beta]
    if all(value is None for value in custom):
        return None
    if args.verify_table_iv:
        raise ValueError("--verify-table-iv cannot be combined with custom circuit parameters")
    if any(value is None for value in custom):
        raise ValueError("Custom circuits need --theta, --phi, --alpha and --beta")
    return CircuitParams(theta=tuple(args.theta), phi=tuple(args.phi), alpha=args.alpha, beta=args.beta)


async def dispatch(args: argparse.Namespace, manager: ExperimentManager) -> Dict[str, Any]:
    """Run the selected subcommand.

    Args:
        args: Parsed arguments
        manager: Manager executing the command

    Returns:
        The command's JSON-ready output
    """
    if args.command == "bounds":
        return manager.bounds(f=args.f, curve=args.curve, minimax=args.minimax, pure_symmetric=args.pure_symmetric)
    if args.command == "simulate":
        rounds = get_config().simulation.default_rounds if args.rounds is None else args.rounds
        return manager.simulate(
            rounds,
            seed=args.seed,
            cheat=args.cheat,
            export=args.export,
            test_mode=args.test_mode,
            randomize_orientation=args.randomize_orientation,
        )
    if args.command == "combined":
        return await manager.combined(p=args.p, strategy=args.strategy, runs=args.runs, seed=args.seed)
    if args.command == "optimize-cheat":
        return manager.optimize_cheat(restarts=args.restarts, seed=args.seed)
    if args.command == "prep":
        return manager.prep(circuit_from_args(args), restarts=args.restarts, seed=args.seed)
    if args.command == "compare":
        return manager.compare(args.data)
    raise ValueError(f"Unknown command {args.command!r}")


def render(output: Dict[str, Any], pretty: bool) -> str:
    """JSON with sorted keys, or one ``key: value`` line per leaf when ``pretty``."""
    if not pretty:
        return json.dumps(output, indent=2, sort_keys=True)
    flat = pd.json_normalize(output, sep=".").iloc[0]
    return "\n".join(f"{key}: {value}" for key, value in flat.items())


async def async_main(argv: Optional[List[str]] = None) -> int:
    """Async main function."""
    args = build_parser().parse_args(argv)

    config_error = validate_config()
    if config_error:
        logger.error(f"Configuration error: {config_error}")
        return EXIT_ERROR

    try:
        output = await dispatch(args, ExperimentManager())
    except (ValueError, FileNotFoundError, ArithmeticError) as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_ERROR

    sys.stdout.write(render(output, args.pretty) + "\n")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point."""
    try:
        return asyncio.run(async_main(argv))
    except KeyboardInterrupt:
        logger.info("Process interrupted by user")
        return EXIT_INTERRUPTED
    except Exception as e:
        logger.error(f"Unhandled error: {e}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
