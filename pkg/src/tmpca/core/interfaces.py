"""Abstract base classes (ports) for tmpca.

The core numerics depend only on these interfaces. Concrete implementations
live in tmpca.core.eigen (solvers) and tmpca.adapters (clocks, embedding
sources) and are wired together by tmpca.container.Container.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Optional

import numpy as np


class TimeProvider(ABC):
    """Abstract interface for a monotonic clock.

    Benchmarks measure elapsed time through this port so tests can drive
    the median, slope and clock-resolution logic with a scripted clock.
    """

    @abstractmethod
    def monotonic(self) -> float:
        """Return a monotonic timestamp in seconds (arbitrary origin)."""
        pass

    @abstractmethod
    def resolution(self) -> float:
        """Return the smallest distinguishable time step in seconds."""
        pass


class EigenSolver(ABC):
    """Abstract interface for symmetric eigendecomposition.

    Implementations return raw eigenpairs; ordering, clamping and the sign
    convention are applied afterwards by
    tmpca.core.eigen.symmetric_eigendecomposition so every solver produces
    identically normalized output.
    """

    name: str = "abstract"

    @abstractmethod
    def decompose(self, S: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Decompose a symmetric matrix.

        Args:
            S: Symmetric K×K float64 matrix (validated by the caller).

        Returns:
            Tuple (eigenvalues, vectors): eigenvalues has length K in the
            solver's natural slot order; vectors is K×K with eigenvector i
            in column i.

        Raises:
            NumericalFailureError: If the solver fails to converge.
        """
        pass


class EmbeddingSource(ABC):
    """Abstract interface mapping a token to a D-dimensional vector."""

    @property
    @abstractmethod
    def dim(self) -> int:
        """Embedding dimension D."""
        pass

    @abstractmethod
    def lookup(self, token: str) -> Optional[np.ndarray]:
        """Return the token's vector, or None if the token is unknown.

        Returned arrays must be treated as read-only.
        """
        pass
