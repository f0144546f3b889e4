"""Time provider implementations.

This module provides implementations of the TimeProvider interface:
- SystemTimeProvider: the process's high-resolution monotonic clock
- MockTimeProvider: controllable time for deterministic tests

Benchmarks read time only through this port, so median, slope and
clock-resolution logic can be tested without real waiting.
"""

from __future__ import annotations

import time

from tmpca.core.interfaces import TimeProvider


class SystemTimeProvider(TimeProvider):
    """Real monotonic clock (time.perf_counter)."""

    def monotonic(self) -> float:
        """Get the current perf_counter reading.

        Returns:
            Seconds since an arbitrary, fixed origin.
        """
        return time.perf_counter()

    def resolution(self) -> float:
        """Get the clock resolution reported by the platform.

        Returns:
            Smallest distinguishable step in seconds.
        """
        return time.get_clock_info("perf_counter").resolution


class MockTimeProvider(TimeProvider):
    """Controllable clock for deterministic testing.

    Every call to monotonic() returns the current simulated time and then
    advances it by `tick`, so a timed block measures exactly `tick` seconds.

    Example:
        >>> clock = MockTimeProvider(start=10.0, tick=0.5)
        >>> clock.monotonic()
        10.0
        >>> clock.monotonic()
        10.5
    """

    def __init__(self, start: float = 0.0, tick: float = 0.0, resolution: float = 1e-9) -> None:
        """Initialize with a starting time.

        Args:
            start: Initial time value in seconds.
            tick: Amount the clock advances after each reading.
            resolution: Value reported by resolution().
        """
        self._current_time = start
        self._tick = tick
        self._resolution = resolution

    def monotonic(self) -> float:
        """Return the simulated time, then advance it by one tick."""
        now = self._current_time
        self._current_time += self._tick
        return now

    def resolution(self) -> float:
        """Return the configured resolution."""
        return self._resolution
