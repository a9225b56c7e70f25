"""Run orchestration: Monte Carlo batches, manifests, reports and repositories.

``ExperimentManager`` is imported from ``src.experiments.experiment_manager``
directly, since it depends on modules that use the runner defined here.
"""

from src.experiments.monte_carlo import MonteCarloRunner, binomial_estimate
from src.experiments.run_manifest import RunManifest

__all__ = [
    "MonteCarloRunner",
    "RunManifest",
    "binomial_estimate",
]
