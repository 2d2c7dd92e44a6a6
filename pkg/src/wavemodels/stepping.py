"""Shared time-stepping plumbing: step control, trajectories, halt records."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class DtControl:
    """Time-step policy for the method-of-lines solvers.

    ``dt`` pins the step explicitly.  Otherwise the step is derived from
    the CFL number and the solver's speed scale, capped at ``dt_max``.
    ``refine_tol`` (integrating-factor schemes only) requests successive
    halving of the step until the final states of two consecutive
    refinements differ by less than the tolerance in the max norm.
    """

    dt: float | None = None
    cfl: float = 0.4
    dt_max: float = math.inf
    refine_tol: float | None = None

    def __post_init__(self):
        if self.dt is not None and self.dt <= 0.0:
            raise ValueError("explicit dt must be positive")
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError("cfl must lie in (0, 1]")


@dataclass(frozen=True)
class HaltEvent:
    """Why and where a run stopped before reaching its end time."""

    reason: str  # "breaking" or "cavitation"
    time: float
    location: float
    max_gradient: float
    breaking_time_estimate: float | None = None


@dataclass
class Trajectory:
    """Snapshots of an evolution, plus the halt record if the run stopped."""

    states: list = field(default_factory=list)
    halt: HaltEvent | None = None

    @property
    def times(self):
        return [s.time for s in self.states]

    @property
    def final_state(self):
        return self.states[-1]

    def __len__(self):
        return len(self.states)


def resolve_substeps(interval: float, dt_raw: float) -> tuple[int, float]:
    """Split an output interval into equal steps no larger than dt_raw."""
    if interval <= 0.0:
        return 0, 0.0
    m = max(1, math.ceil(interval / dt_raw - 1e-12))
    return m, interval / m


def snapshot_times(t_end: float, n_intervals: int) -> list[float]:
    """Equispaced output times 0 = t_0 < ... < t_n = t_end."""
    if t_end < 0.0:
        raise ValueError("t_end must be nonnegative")
    if n_intervals < 1:
        raise ValueError("need at least one output interval")
    if t_end == 0.0:
        return [0.0]
    return [t_end * j / n_intervals for j in range(n_intervals + 1)]
