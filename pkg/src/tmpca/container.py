"""Dependency injection container for tmpca.

The Container holds the side-effecting collaborators an Experiment needs:
the clock timings are measured on, the eigensolver every PCA fit uses and
optionally a prebuilt embedding source. Factory methods give production
and test configurations.

Example:
    # Production usage
    container = Container.create_default(solver="auto", threads=4)

    # Test usage: scripted clock, Jacobi solver, in-memory embedding
    container = Container.create_for_testing(embedding=HashEmbedding(dim=4))
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from tmpca.adapters.time_provider import MockTimeProvider, SystemTimeProvider
from tmpca.core.eigen import DEFAULT_JACOBI_MAX_DIM, JacobiEigenSolver, create_solver
from tmpca.core.interfaces import EigenSolver, EmbeddingSource, TimeProvider

TEST_CLOCK_TICK = 0.001
"""Seconds the test clock advances per reading, so every measured span is positive."""


@dataclass
class Container:
    """DI container - all dependencies injected, no global state.

    Attributes:
        time_provider: Clock for fit and benchmark timings.
        solver: Eigensolver for every PCA and tree-level fit.
        threads: Worker threads for numericalization; recorded in timings.
        embedding: Embedding source to use instead of the configured one.
    """

    time_provider: TimeProvider
    solver: EigenSolver
    threads: int = 1
    embedding: Optional[EmbeddingSource] = None

    @classmethod
    def create_default(
        cls,
        solver: str = "auto",
        max_jacobi_dim: int = DEFAULT_JACOBI_MAX_DIM,
        threads: int = 1,
    ) -> Container:
        """Factory for command-line runs.

        Args:
            solver: "auto", "jacobi" or "lapack".
            max_jacobi_dim: Largest matrix the auto solver gives to Jacobi.
            threads: Worker threads.

        Raises:
            InvalidArgumentError: If the solver name is unknown.
        """
        return cls(
            time_provider=SystemTimeProvider(),
            solver=create_solver(solver, max_jacobi_dim),
            threads=threads,
        )

    @classmethod
    def create_for_testing(
        cls,
        time_provider: Optional[TimeProvider] = None,
        solver: Optional[EigenSolver] = None,
        embedding: Optional[EmbeddingSource] = None,
        threads: int = 1,
    ) -> Container:
        """Factory for tests.

        Defaults to a MockTimeProvider that advances TEST_CLOCK_TICK per
        reading (timings become deterministic) and the Jacobi solver.

        Example:
            clock = MockTimeProvider(start=0.0, tick=0.5)
            container = Container.create_for_testing(time_provider=clock)
        """
        return cls(
            time_provider=(
                time_provider
                if time_provider is not None
                else MockTimeProvider(tick=TEST_CLOCK_TICK)
            ),
            solver=solver if solver is not None else JacobiEigenSolver(),
            threads=threads,
            embedding=embedding,
        )
