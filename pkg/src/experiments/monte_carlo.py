"""Batched Monte Carlo execution with order-independent aggregation."""

import asyncio
import sys
from typing import Callable, List, Optional, Tuple

import numpy as np
from numpy.typing import NDArray
from tqdm import tqdm

from src.config import Config, get_config
from src.utils.logger import get_logger
from src.utils.random_streams import role_stream

logger = get_logger(__name__)

# A task draws `size` samples from the generator and returns integer counts
CountTask = Callable[[np.random.Generator, int], NDArray[np.int64]]


def binomial_estimate(successes: int, trials: int) -> Tuple[float, float]:
    """Success frequency and its binomial standard error ``sqrt(p(1-p)/n)``."""
    if trials <= 0:
        raise ValueError(f"Need at least one trial, got {trials}")
    p = successes / trials
    return p, float(np.sqrt(p * (1 - p) / trials))


class MonteCarloRunner:
    """Runs a counting task over fixed-size batches, each on its own random stream.

    Batch boundaries depend only on ``batch_size``, so the summed counts are
    the same for any number of worker threads.
    """

    def __init__(
        self,
        threads: Optional[int] = None,
        batch_size: Optional[int] = None,
        show_progress: Optional[bool] = None,
        config: Optional[Config] = None,
    ):
        """Initialize the runner.

        Args:
            threads: Maximum concurrent batches, defaults to QOTSIM_THREADS
            batch_size: Samples per batch, defaults to QOTSIM_BATCH_SIZE
            show_progress: Show a progress bar on stderr
            config: Configuration to read defaults from
        """
        config = config or get_config()
        self.threads = threads or config.simulation.threads
        self.batch_size = batch_size or config.simulation.batch_size
        self.show_progress = (
            config.simulation.show_progress if show_progress is None else show_progress
        )
        if self.threads < 1 or self.batch_size < 1:
            raise ValueError("threads and batch_size must be at least 1")

    def batch_sizes(self, total: int) -> List[int]:
        full, rest = divmod(total, self.batch_size)
        return [self.batch_size] * full + ([rest] if rest else [])

    async def run(self, task: CountTask, total: int, seed: int, role: str) -> NDArray[np.int64]:
        """Run ``task`` on ``total`` samples and sum the returned count arrays.

        Args:
            task: Counting function called once per batch
            total: Total number of samples
            seed: Root seed
            role: Stream name; batch ``i`` draws from ``role_stream(seed, role, i)``

        Returns:
            Element-wise sum of the per-batch counts
        """
        if total < 1:
            raise ValueError(f"Monte Carlo needs at least one sample, got {total}")

        sizes = self.batch_sizes(total)
        semaphore = asyncio.Semaphore(self.threads)
        progress = tqdm(
            total=len(sizes), desc=role, file=sys.stderr, disable=not self.show_progress
        )
        logger.info(f"Running {total} samples for {role} in {len(sizes)} batches")

        async def run_batch(index: int, size: int) -> NDArray[np.int64]:
            async with semaphore:
                rng = role_stream(seed, role, index)
                try:
                    counts = await asyncio.to_thread(task, rng, size)
                except Exception as e:
                    logger.error(f"Batch {index} of {role} failed: {e}")
                    raise
                progress.update(1)
                logger.debug(f"{role} batch {index}: {size} samples done")
                return np.asarray(counts, dtype=np.int64)

        try:
            results = await asyncio.gather(*(run_batch(i, s) for i, s in enumerate(sizes)))
        finally:
            progress.close()
        return np.sum(results, axis=0)
