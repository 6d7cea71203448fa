"""Stimulus-response lane keeping driven by the leader's lateral movement.

The desired lateral position integrates the leader's per-step lateral
displacement, scaled by a sensitivity ``alpha`` and delayed by a reaction
time ``tau``:

    y_e(k) = y_e(k-1) + alpha * dy_lead(k - d),      d = round(tau / ts)

With ``alpha = 1`` and ``tau = 0`` the ego reproduces the leader's lateral
behaviour exactly (telescoping sum); with ``alpha = 0`` it ignores the
leader.  Negative ``alpha`` mirrors the response to the opposite side and
is used by the opposite-type comparison configuration.  The state is
clamped to the safe-boundary corridor so the ego body never leaves it.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .core import LaneGeometry, max_lateral_freedom


@dataclass(frozen=True)
class LateralParams:
    """Personalization pair (sensitivity, reaction delay) plus sampling time.

    ``ts`` defaults to 0.02 s (50 Hz stepping).  ``return_tc`` is the time
    constant of the exponential return to the centerline when no leader is
    present.
    """

    alpha: float
    tau: float
    ts: float = 0.02
    return_tc: float = 2.0

    def __post_init__(self) -> None:
        if abs(self.alpha) > 1:
            raise ValueError("alpha must lie in [-1, 1]")
        if not 0 <= self.tau <= 2:
            raise ValueError("tau must lie in [0, 2] seconds")
        if self.ts <= 0:
            raise ValueError("ts must be positive")
        if self.return_tc <= 0:
            raise ValueError("return_tc must be positive")

    @property
    def delay_steps(self) -> int:
        return delay_steps(self.tau, self.ts)


def delay_steps(tau: float, ts: float) -> int:
    """Reaction delay in whole steps, ``round(tau/ts)`` with ties to even."""
    return int(round(tau / ts))


def lead_displacement(y_lead_now: float, y_lead_prev: float) -> float:
    """Per-step lateral displacement of the leader (backward difference)."""
    return y_lead_now - y_lead_prev


class LateralKeeper:
    """Sequential state machine stepping the desired lateral position.

    Single-writer: call :meth:`step` once per control period.  Distinct
    instances are independent.  The displacement buffer is pre-filled with
    zeros, so before ``d`` real observations exist the model holds still
    instead of inventing history.
    """

    def __init__(
        self,
        params: LateralParams,
        geometry: LaneGeometry | None = None,
        y0: float = 0.0,
    ) -> None:
        self.params = params
        self.geometry = geometry if geometry is not None else LaneGeometry()
        self._freedom = max_lateral_freedom(self.geometry)
        if abs(y0) > self._freedom:
            raise ValueError("initial lateral position outside the safe corridor")
        self._y = y0
        d = params.delay_steps
        # holds the last max(d, 1) observed displacements, oldest first
        self._buffer: deque[float] = deque([0.0] * max(d, 1), maxlen=max(d, 1))

    @property
    def y_e(self) -> float:
        """Current desired lateral position, m."""
        return self._y

    def step(self, new_lead_displacement: float = 0.0, lead_present: bool = True) -> float:
        """Advance one sampling period and return the new desired position.

        With a leader present the new displacement enters the buffer, one
        entry ages out, and the displacement observed ``d`` steps ago
        drives the update.  Without a leader the state decays
        exponentially toward the centerline (time constant
        ``params.return_tc``) and a zero displacement is recorded so stale
        history ages out.
        """
        d = self.params.delay_steps
        if len(self._buffer) != max(d, 1):
            raise ValueError("displacement buffer does not match the configured delay")
        if not lead_present:
            self._buffer.append(0.0)
            self._y *= math.exp(-self.params.ts / self.params.return_tc)
            return self._y
        if d == 0:
            delayed = new_lead_displacement
        else:
            delayed = self._buffer[0]
        self._buffer.append(new_lead_displacement)
        candidate = self._y + self.params.alpha * delayed
        self._y = min(max(candidate, -self._freedom), self._freedom)
        return self._y


def replay_desired_lateral(
    y0: float,
    lead_y: np.ndarray,
    alpha: float,
    tau: float,
    ts: float = 0.02,
) -> np.ndarray:
    """Open-loop trace of the stimulus-response recursion, without clamping.

    Given the leader's lateral positions on a uniform ``ts`` grid, returns
    the desired lateral position at every grid point, starting from
    ``y0``.  Displacements before the first sample read as zero.  This is
    the estimator replayed during parameter fitting; it matches stepping
    an unclamped keeper sample for sample.
    """
    lead_y = np.asarray(lead_y, dtype=float)
    n = lead_y.size
    if n == 0:
        return np.array([])
    d = delay_steps(tau, ts)
    delayed = np.zeros(n)
    if d + 1 < n:
        delayed[d + 1 :] = np.diff(lead_y)[: n - 1 - d]
    increments = alpha * delayed
    increments[0] = y0
    return np.cumsum(increments)
