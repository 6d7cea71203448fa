"""Shared domain types and trajectory utilities.

Conventions used throughout the package:

* all quantities are SI (meters, seconds, m/s); speed limits quoted in
  km/h are converted at the boundary via :func:`kmh_to_mps`;
* the lateral coordinate ``y`` is measured from the lane centerline,
  positive to the left;
* time ``t`` within a trajectory is strictly increasing.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np


def kmh_to_mps(speed_kmh: float) -> float:
    """Convert a speed in km/h to m/s."""
    return speed_kmh / 3.6


class VehicleSample(NamedTuple):
    """One kinematic sample: time, longitudinal/lateral position, speed."""

    t: float
    x: float
    y: float
    v: float


def _as_locked_array(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Trajectory:
    """Time-indexed kinematic record of one vehicle.

    Arrays ``t``, ``x``, ``y``, ``v`` have equal length and are immutable.
    ``t`` must be finite, non-negative and strictly increasing; ``v`` must
    be non-negative.  Most consumers (ingestion, episode segmentation,
    resampling input) additionally require at least two samples so that a
    time span exists; single-sample trajectories are only produced by
    degenerate resampling grids.
    """

    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    v: np.ndarray
    vehicle_id: str = ""
    lane_id: str = ""

    def __post_init__(self) -> None:
        for name in ("t", "x", "y", "v"):
            object.__setattr__(self, name, _as_locked_array(getattr(self, name)))
        n = len(self.t)
        if n < 1:
            raise ValueError("trajectory needs at least one sample")
        if not (len(self.x) == len(self.y) == len(self.v) == n):
            raise ValueError("t, x, y, v must have equal length")
        if not np.all(np.isfinite(self.t)) or self.t[0] < 0:
            raise ValueError("t must be finite and non-negative")
        if n > 1 and not np.all(np.diff(self.t) > 0):
            raise ValueError("t must be strictly increasing")
        if not np.all(np.isfinite(self.x)) or not np.all(np.isfinite(self.y)):
            raise ValueError("positions must be finite")
        if not np.all(np.isfinite(self.v)) or np.any(self.v < 0):
            raise ValueError("v must be finite and non-negative")

    def __len__(self) -> int:
        return len(self.t)

    @property
    def duration(self) -> float:
        return float(self.t[-1] - self.t[0])

    def samples(self) -> list[VehicleSample]:
        return [VehicleSample(*row) for row in zip(self.t, self.x, self.y, self.v)]

    @classmethod
    def from_samples(
        cls,
        samples: Iterable[VehicleSample | tuple],
        vehicle_id: str = "",
        lane_id: str = "",
    ) -> "Trajectory":
        rows = [VehicleSample(*s) for s in samples]
        if not rows:
            raise ValueError("trajectory needs at least one sample")
        return cls(
            t=[s.t for s in rows],
            x=[s.x for s in rows],
            y=[s.y for s in rows],
            v=[s.v for s in rows],
            vehicle_id=vehicle_id,
            lane_id=lane_id,
        )

    def covers(self, t0: float, t1: float) -> bool:
        """Whether [t0, t1] lies inside this trajectory's time span."""
        return bool(self.t[0] <= t0 and t1 <= self.t[-1])


@dataclass(frozen=True)
class LaneGeometry:
    """Straight-lane geometry: lane width, safety margin, ego width.

    The safe corridor is the lane shrunk by ``safe_margin`` on each side;
    the ego center may wander while the whole body stays inside it.  A
    zero-freedom geometry (ego exactly fills the corridor) is admitted.
    """

    lane_width: float = 3.75
    safe_margin: float = 0.2
    ego_width: float = 2.1

    def __post_init__(self) -> None:
        if self.lane_width <= 0 or self.ego_width <= 0 or self.safe_margin < 0:
            raise ValueError("lane_width and ego_width must be positive, safe_margin non-negative")
        if self.lane_width - 2 * self.safe_margin - self.ego_width < 0:
            raise ValueError("ego is wider than the safe corridor, no admissible lateral freedom")


def max_lateral_freedom(geometry: LaneGeometry) -> float:
    """Largest admissible |y| of the ego center inside the safe corridor.

    Boundaries are symmetric about the lane centerline at +/- the returned
    value.
    """
    return (geometry.lane_width - 2 * geometry.safe_margin - geometry.ego_width) / 2


def resample(trajectory: Trajectory, grid: Sequence[float] | np.ndarray) -> Trajectory:
    """Linearly interpolate a trajectory onto a new time grid.

    The grid must be strictly increasing and lie inside the trajectory's
    time span; this function never extrapolates.  Resampling a trajectory
    onto its own time stamps returns identical samples.

    Args:
        trajectory: source trajectory with at least two samples.
        grid: target time stamps, strictly increasing, within
            ``[trajectory.t[0], trajectory.t[-1]]``.

    Returns:
        A new :class:`Trajectory` whose ``t`` equals ``grid``.

    Raises:
        ValueError: on a degenerate (single-sample) source trajectory, an
            empty or non-increasing grid, or grid points outside the span.
    """
    if len(trajectory) < 2:
        raise ValueError("cannot resample a degenerate trajectory with fewer than 2 samples")
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("resampling grid is empty")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise ValueError("resampling grid must be strictly increasing")
    if grid[0] < trajectory.t[0] or grid[-1] > trajectory.t[-1]:
        raise ValueError(
            f"grid [{grid[0]}, {grid[-1]}] outside trajectory span "
            f"[{trajectory.t[0]}, {trajectory.t[-1]}]"
        )
    return Trajectory(
        t=grid,
        x=np.interp(grid, trajectory.t, trajectory.x),
        y=np.interp(grid, trajectory.t, trajectory.y),
        v=np.interp(grid, trajectory.t, trajectory.v),
        vehicle_id=trajectory.vehicle_id,
        lane_id=trajectory.lane_id,
    )
