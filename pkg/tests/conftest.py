"""Shared fixtures for the test suite."""

from typing import Callable

import numpy as np
import pytest

from src.linalg import DensityMatrix, StateVector


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for randomized property checks."""
    return np.random.default_rng(20210611)


@pytest.fixture
def random_density(rng: np.random.Generator) -> Callable[[int], DensityMatrix]:
    """Factory for random full-rank density matrices of a given dimension."""

    def make(dim: int) -> DensityMatrix:
        a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        m = a @ a.conj().T
        m = m / np.trace(m).real
        return DensityMatrix((m + m.conj().T) / 2)

    return make


@pytest.fixture
def random_pure(rng: np.random.Generator) -> Callable[[int], StateVector]:
    """Factory for random pure states of a given dimension."""

    def make(dim: int) -> StateVector:
        v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        return StateVector.normalized(v)

    return make
