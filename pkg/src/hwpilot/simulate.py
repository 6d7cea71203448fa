"""Deterministic fixed-step closed-loop simulation of following driving.

A scripted lead vehicle drives through speed stages and performs smooth
lateral offset maneuvers; the ego vehicle follows it with IDM speed
control and the stimulus-response lane keeper.  Stepping is semi-implicit
Euler at 50 Hz.  Identical inputs produce bit-identical logs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import LaneGeometry, Trajectory
from .errors import GapViolationError
from .idm import FollowState, IdmParams, equilibrium_gap, idm_acceleration
from .lateral import LateralKeeper, LateralParams
from .profiles import ControllerConfig, DriverProfile, headway_for_speed

#: control/integration period, s (50 Hz).
SIM_TS = 0.02
#: case window padding around a maneuver: one second before, three after.
WINDOW_PRE = 1.0
WINDOW_POST = 3.0


@dataclass(frozen=True)
class Stage:
    """One constant-speed segment of the lead vehicle's script."""

    lead_speed: float
    duration: float

    def __post_init__(self) -> None:
        if self.lead_speed <= 0:
            raise ValueError("stage lead speed must be positive")
        if self.duration <= 0:
            raise ValueError("stage duration must be positive")


@dataclass(frozen=True)
class LateralOffset:
    """One scripted lateral maneuver of the lead, replayed in every stage.

    The lead ramps from the centerline to ``direction * magnitude`` over
    ``ramp_duration``, holds for ``hold_duration``, and ramps back.
    """

    magnitude: float
    direction: int
    start_time_within_stage: float
    ramp_duration: float = 2.0
    hold_duration: float = 5.0

    def __post_init__(self) -> None:
        if self.magnitude <= 0:
            raise ValueError("offset magnitude must be positive")
        if self.direction not in (-1, 1):
            raise ValueError("offset direction must be +1 or -1")
        if self.start_time_within_stage < 0:
            raise ValueError("offset start time must be non-negative")
        if self.ramp_duration <= 0 or self.hold_duration < 0:
            raise ValueError("ramp must be positive, hold non-negative")

    @property
    def maneuver_duration(self) -> float:
        return 2 * self.ramp_duration + self.hold_duration


@dataclass(frozen=True)
class ScenarioSpec:
    """Declarative description of a following-driving experiment.

    ``offsets`` replay within every stage, so the total case count is
    ``len(stages) * len(offsets)``.  Maneuvers should be separated by more
    than four seconds so the padded case windows stay disjoint.  With
    ``initial_gap`` / ``ego_initial_speed`` left as ``None`` the ego
    starts at the first stage's speed at the equilibrium gap.
    """

    stages: tuple[Stage, ...]
    offsets: tuple[LateralOffset, ...] = ()
    lane: LaneGeometry = field(default_factory=LaneGeometry)
    initial_gap: float | None = None
    ego_initial_speed: float | None = None
    lead_swap_at_stage_boundary: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "stages", tuple(self.stages))
        object.__setattr__(self, "offsets", tuple(self.offsets))
        if not self.stages:
            raise ValueError("scenario needs at least one stage")
        min_duration = min(s.duration for s in self.stages)
        for off in self.offsets:
            if off.start_time_within_stage + off.maneuver_duration > min_duration:
                raise ValueError("offset maneuver does not fit inside every stage")
            if off.magnitude + self.lane.ego_width / 2 > self.lane.lane_width / 2:
                raise ValueError("offset would push the leader out of the lane")
        if self.initial_gap is not None and self.initial_gap <= 0:
            raise ValueError("initial gap must be positive")
        if self.ego_initial_speed is not None and self.ego_initial_speed < 0:
            raise ValueError("ego initial speed must be non-negative")

    @property
    def stage_starts(self) -> tuple[float, ...]:
        starts, acc = [], 0.0
        for s in self.stages:
            starts.append(acc)
            acc += s.duration
        return tuple(starts)

    @property
    def total_duration(self) -> float:
        return float(sum(s.duration for s in self.stages))


@dataclass(frozen=True)
class CaseWindow:
    """Analysis window around one scripted maneuver."""

    start: float
    end: float
    stage_index: int
    offset_magnitude: float
    offset_direction: int

    def __post_init__(self) -> None:
        if not self.start < self.end:
            raise ValueError("case window must have start < end")


@dataclass(frozen=True)
class SimLog:
    """Result of one closed-loop run: ego and lead share one time grid."""

    ego: Trajectory
    lead: Trajectory
    case_windows: tuple[CaseWindow, ...]
    ts: float
    scenario: ScenarioSpec

    def __post_init__(self) -> None:
        object.__setattr__(self, "case_windows", tuple(self.case_windows))
        if not np.array_equal(self.ego.t, self.lead.t):
            raise ValueError("ego and lead must share one time grid")
        ordered = sorted(self.case_windows, key=lambda w: w.start)
        for a, b in zip(ordered, ordered[1:]):
            if b.start < a.end:
                raise ValueError("case windows overlap")


def lead_lateral_profile(offset: LateralOffset, t_local: float) -> float:
    """Lateral position of the maneuver at ``t_local`` seconds after its start.

    Raised-cosine ramp out, hold, raised-cosine ramp back; zero outside
    the maneuver.  Continuous with continuous first derivative at the
    segment joins.
    """
    peak = offset.direction * offset.magnitude
    ramp, hold = offset.ramp_duration, offset.hold_duration
    if t_local <= 0 or t_local >= 2 * ramp + hold:
        return 0.0
    if t_local < ramp:
        return peak * (1 - math.cos(math.pi * t_local / ramp)) / 2
    if t_local < ramp + hold:
        return peak
    return peak * (1 - math.cos(math.pi * (2 * ramp + hold - t_local) / ramp)) / 2


def _lead_lateral_at(spec: ScenarioSpec, stage_index: int, t_in_stage: float) -> float:
    y = 0.0
    for off in spec.offsets:
        y += lead_lateral_profile(off, t_in_stage - off.start_time_within_stage)
    return y


def default_scenario() -> ScenarioSpec:
    """The standard four-stage following experiment.

    Stage speeds 25.0, 27.78, 30.56 and 33.33 m/s (90 to 120 km/h); per
    stage the four offset magnitudes 0.3, 0.4, 0.5 and 0.6 m with
    alternating directions, 2 s ramps and 5 s holds.  The first maneuver
    starts 120 s into each stage: after a stage change the ego can need
    up to ~110 s to settle within 0.1 m/s of the new lead speed when the
    personalized headway is large.  Consecutive maneuvers are separated
    by 10 s, giving 16 cases over 760 s.
    """
    stages = tuple(Stage(lead_speed=v, duration=190.0) for v in (25.0, 27.78, 30.56, 33.33))
    magnitudes = (0.3, 0.4, 0.5, 0.6)
    offsets = tuple(
        LateralOffset(
            magnitude=m,
            direction=1 if i % 2 == 0 else -1,
            start_time_within_stage=120.0 + 19.0 * i,
            ramp_duration=2.0,
            hold_duration=5.0,
        )
        for i, m in enumerate(magnitudes)
    )
    return ScenarioSpec(stages=stages, offsets=offsets)


def _case_windows(spec: ScenarioSpec, t_end: float) -> tuple[CaseWindow, ...]:
    windows = []
    for i, stage_start in enumerate(spec.stage_starts):
        stage_end = stage_start + spec.stages[i].duration
        for off in sorted(spec.offsets, key=lambda o: o.start_time_within_stage):
            m_start = stage_start + off.start_time_within_stage
            m_end = m_start + off.maneuver_duration
            windows.append(
                CaseWindow(
                    start=max(m_start - WINDOW_PRE, stage_start, 0.0),
                    end=min(m_end + WINDOW_POST, stage_end, t_end),
                    stage_index=i,
                    offset_magnitude=off.magnitude,
                    offset_direction=off.direction,
                )
            )
    return tuple(windows)


def run_scenario(
    spec: ScenarioSpec,
    profile: DriverProfile | ControllerConfig,
    kappa: float = 0.0,
) -> SimLog:
    """Run the closed-loop simulation and return the full log.

    The ego starts at the first stage's speed and equilibrium gap unless
    the scenario overrides them.  At stage boundaries with
    ``lead_swap_at_stage_boundary`` a fresh leader appears at the new
    stage's speed at the ego's equilibrium gap for that speed, which
    avoids transient braking spikes.  ``kappa`` is the time constant of
    the first-order lag with which the ego's lateral position tracks the
    desired one; zero means ideal tracking.

    Raises:
        GapViolationError: if the gap ever reaches zero (crash).
    """
    config = profile.as_controller_config() if isinstance(profile, DriverProfile) else profile
    ts = SIM_TS
    n_steps = int(round(spec.total_duration / ts))
    t = np.arange(n_steps + 1) * ts

    stage_starts = np.array(spec.stage_starts)
    stage_bounds = np.append(stage_starts, spec.total_duration)
    stage_idx = np.minimum(
        np.searchsorted(stage_bounds, t, side="right") - 1, len(spec.stages) - 1
    ).astype(int)

    idm_by_stage = [
        IdmParams(T=headway_for_speed(config, s.lead_speed)) for s in spec.stages
    ]

    v_lead0 = spec.stages[0].lead_speed
    v_ego0 = spec.ego_initial_speed if spec.ego_initial_speed is not None else v_lead0
    gap0 = (
        spec.initial_gap
        if spec.initial_gap is not None
        else equilibrium_gap(idm_by_stage[0], v_lead0)
    )

    x_e = np.empty(n_steps + 1)
    v_e = np.empty(n_steps + 1)
    y_e = np.empty(n_steps + 1)
    x_l = np.empty(n_steps + 1)
    v_l = np.empty(n_steps + 1)
    y_l = np.empty(n_steps + 1)
    x_e[0], v_e[0], y_e[0] = 0.0, v_ego0, 0.0
    x_l[0], v_l[0] = gap0, v_lead0
    y_l[0] = _lead_lateral_at(spec, 0, 0.0)

    keeper = LateralKeeper(
        LateralParams(alpha=config.alpha, tau=config.tau, ts=ts), spec.lane, y0=0.0
    )
    lag_gain = 1.0 - math.exp(-ts / kappa) if kappa > 0 else 1.0

    for k in range(1, n_steps + 1):
        prev_stage = stage_idx[k - 1]
        cur_stage = stage_idx[k]

        state = FollowState(
            v=v_e[k - 1], s=x_l[k - 1] - x_e[k - 1], dv=v_e[k - 1] - v_l[k - 1]
        )
        accel = idm_acceleration(idm_by_stage[prev_stage], state)
        v_e[k] = max(0.0, v_e[k - 1] + accel * ts)
        x_e[k] = x_e[k - 1] + v_e[k] * ts

        x_lead = x_l[k - 1] + v_l[k - 1] * ts
        if cur_stage != prev_stage and spec.lead_swap_at_stage_boundary:
            x_lead = x_e[k] + equilibrium_gap(
                idm_by_stage[cur_stage], spec.stages[cur_stage].lead_speed
            )
        x_l[k] = x_lead
        v_l[k] = spec.stages[cur_stage].lead_speed
        y_l[k] = _lead_lateral_at(spec, cur_stage, t[k] - stage_starts[cur_stage])

        desired = keeper.step(y_l[k] - y_l[k - 1], lead_present=True)
        if kappa > 0:
            y_e[k] = y_e[k - 1] + lag_gain * (desired - y_e[k - 1])
        else:
            y_e[k] = desired

        if x_l[k] - x_e[k] <= 0:
            raise GapViolationError(f"gap closed at t = {t[k]:.2f} s (crash)")

    ego = Trajectory(t=t, x=x_e, y=y_e, v=v_e, vehicle_id="ego", lane_id="lane0")
    lead = Trajectory(t=t, x=x_l, y=y_l, v=v_l, vehicle_id="lead", lane_id="lane0")
    return SimLog(
        ego=ego,
        lead=lead,
        case_windows=_case_windows(spec, float(t[-1])),
        ts=ts,
        scenario=spec,
    )
