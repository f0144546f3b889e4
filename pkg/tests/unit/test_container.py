"""Unit tests for the tmpca container module.

This module tests the Container class and its factory methods, including
solver selection and the deterministic test clock.
"""

from __future__ import annotations

import pytest

from tmpca.adapters.embeddings import HashEmbedding
from tmpca.adapters.time_provider import MockTimeProvider, SystemTimeProvider
from tmpca.container import TEST_CLOCK_TICK, Container
from tmpca.core.eigen import AutoEigenSolver, JacobiEigenSolver, LapackEigenSolver
from tmpca.core.errors import InvalidArgumentError

# ============================================================================
# Test: Production factory
# ============================================================================


class TestCreateDefault:
    """Tests for Container.create_default()."""

    def test_uses_system_clock_and_auto_solver(self):
        """Defaults are the real clock and the size-dispatching solver."""
        container = Container.create_default()
        assert isinstance(container.time_provider, SystemTimeProvider)
        assert isinstance(container.solver, AutoEigenSolver)
        assert container.threads == 1
        assert container.embedding is None

    def test_solver_by_name(self):
        """The solver name picks the implementation."""
        assert isinstance(Container.create_default("lapack").solver, LapackEigenSolver)
        assert isinstance(Container.create_default("jacobi").solver, JacobiEigenSolver)

    def test_jacobi_threshold_passed_through(self):
        """max_jacobi_dim reaches the auto solver."""
        container = Container.create_default("auto", max_jacobi_dim=16)
        assert container.solver.max_jacobi_dim == 16

    def test_threads(self):
        """The thread count is stored."""
        assert Container.create_default(threads=4).threads == 4

    def test_unknown_solver(self):
        """An unknown solver name raises InvalidArgumentError."""
        with pytest.raises(InvalidArgumentError):
            Container.create_default("qr")


# ============================================================================
# Test: Test factory
# ============================================================================


class TestCreateForTesting:
    """Tests for Container.create_for_testing()."""

    def test_defaults(self):
        """A ticking mock clock and the Jacobi solver."""
        container = Container.create_for_testing()
        assert isinstance(container.time_provider, MockTimeProvider)
        assert isinstance(container.solver, JacobiEigenSolver)

    def test_clock_ticks_once_per_reading(self):
        """A timed block measures exactly one tick."""
        clock = Container.create_for_testing().time_provider
        start = clock.monotonic()
        assert clock.monotonic() - start == pytest.approx(TEST_CLOCK_TICK)

    def test_overrides(self):
        """Every collaborator can be replaced."""
        clock = MockTimeProvider(tick=0.5)
        solver = LapackEigenSolver()
        embedding = HashEmbedding(dim=4)
        container = Container.create_for_testing(
            time_provider=clock, solver=solver, embedding=embedding, threads=3
        )
        assert container.time_provider is clock
        assert container.solver is solver
        assert container.embedding is embedding
        assert container.threads == 3
