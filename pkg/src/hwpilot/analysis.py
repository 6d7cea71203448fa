"""Offline analytics for following-driving data.

Covers the trajectory-similarity test that classifies individual cases as
affected or unaffected by the leader's lateral movement, gaze-duration
features, per-stage time-headway statistics, and a one-way ANOVA helper
for group comparisons.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy import special

from .core import Trajectory, resample

#: gaze area-of-interest vocabulary: instrument panel, leading vehicle,
#: lane markers, and everything else.
AOI_LABELS = ("panel", "front_lead", "lane_markers", "other")

#: default meters-per-second weight of the time axis in the similarity
#: embedding.  Small enough that lateral shape dominates reaction delay:
#: at 1 m/s a one-second delay would cost as much distance as the whole
#: lateral amplitude of a typical maneuver, and every delayed follower
#: would read as unaffected.
DEFAULT_TIME_WEIGHT = 0.1


@dataclass(frozen=True)
class GazeSample:
    """One gaze fixation interval labeled with its area of interest."""

    t_start: float
    t_end: float
    aoi: str

    def __post_init__(self) -> None:
        if not self.t_start < self.t_end:
            raise ValueError("gaze interval must have t_start < t_end")
        if self.aoi not in AOI_LABELS:
            raise ValueError(f"unknown AOI label {self.aoi!r}, expected one of {AOI_LABELS}")


@dataclass(frozen=True)
class DriverFeatures:
    """Per-driver clustering features, both percentages in [0, 100]."""

    pc_a: float
    pc_g: float
    driver_id: str = ""

    def __post_init__(self) -> None:
        if not (0 <= self.pc_a <= 100 and 0 <= self.pc_g <= 100):
            raise ValueError("pc_a and pc_g must lie in [0, 100]")


class AffectedCase(NamedTuple):
    """Outcome of the affected-case judgment with both distances."""

    affected: bool
    h_ego_lead: float
    h_ref_lead: float


def hausdorff(a, b) -> float:
    """Hausdorff distance between two finite 2D point sets.

    ``H(A, B) = max(h(A, B), h(B, A))`` with the directed distance
    ``h(A, B) = max_a min_b ||a - b||`` under the Euclidean norm.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise ValueError("hausdorff requires two non-empty point sets")
    a = a.reshape(-1, 2)
    b = b.reshape(-1, 2)
    d2 = (a[:, 0][:, None] - b[:, 0][None, :]) ** 2 + (
        a[:, 1][:, None] - b[:, 1][None, :]
    ) ** 2
    h_ab = d2.min(axis=1).max()
    h_ba = d2.min(axis=0).max()
    return float(np.sqrt(max(h_ab, h_ba)))


def reference_trajectory(lead: Trajectory) -> Trajectory:
    """Straight-line reference: the lead's grid with its mean lateral position."""
    return Trajectory(
        t=lead.t,
        x=lead.x,
        y=np.full(len(lead), float(np.mean(lead.y))),
        v=lead.v,
        vehicle_id=lead.vehicle_id,
        lane_id=lead.lane_id,
    )


def _window_bounds(window) -> tuple[float, float]:
    if hasattr(window, "start") and hasattr(window, "end"):
        return float(window.start), float(window.end)
    start, end = window
    return float(start), float(end)


def is_affected_case(
    ego: Trajectory,
    lead: Trajectory,
    window,
    grid_points: int = 50,
    time_weight: float = DEFAULT_TIME_WEIGHT,
) -> AffectedCase:
    """Judge whether the ego's lateral shape follows the leader's in a case.

    Both trajectories are resampled onto a common ``grid_points``-sample
    time grid inside the window and embedded as 2D point sets
    ``((t - window_start) * time_weight, y)``, i.e. lateral position
    against a time-like axis with ``time_weight`` meters per second.  The
    case is affected when the ego's curve is strictly closer to the
    leader's than the straight reference line (the leader's mean lateral
    position) is:

        affected  <=>  H(ego, lead) < H(ref, lead)

    A perfectly mimicking ego gives ``H(ego, lead) ~ 0`` and is affected;
    any flat ego, in particular one glued to the centerline, is at least
    as far from the leader as some flat line and never beats the
    reference strictly, so it is unaffected.  Distances equal within
    floating-point tolerance count as unaffected (the strict inequality
    fails on the equality edge).

    Returns the flag together with both distances.
    """
    start, end = _window_bounds(window)
    grid = np.linspace(start, end, grid_points)
    try:
        ego_w = resample(ego, grid)
        lead_w = resample(lead, grid)
    except ValueError as exc:
        raise ValueError(f"case window [{start}, {end}] not covered: {exc}") from exc
    axis = (grid - start) * time_weight
    lead_pts = np.column_stack([axis, lead_w.y])
    ego_pts = np.column_stack([axis, ego_w.y])
    ref_pts = np.column_stack([axis, reference_trajectory(lead_w).y])
    h_ego_lead = hausdorff(ego_pts, lead_pts)
    h_ref_lead = hausdorff(ref_pts, lead_pts)
    equal = math.isclose(h_ego_lead, h_ref_lead, rel_tol=1e-9, abs_tol=1e-12)
    return AffectedCase(h_ego_lead < h_ref_lead and not equal, h_ego_lead, h_ref_lead)


def percent_affected(flags: Sequence[bool]) -> float:
    """Percentage of affected cases in a list of judgment flags."""
    if len(flags) == 0:
        raise ValueError("percent_affected requires at least one case")
    return 100.0 * sum(bool(f) for f in flags) / len(flags)


def gaze_proportions(samples: Iterable[GazeSample]) -> dict[str, float]:
    """Share of total gaze time per area of interest, in percent.

    Intervals must not overlap.  The four labels always appear in the
    result and their values sum to 100 up to floating-point error.
    """
    samples = list(samples)
    if not samples:
        raise ValueError("gaze_proportions requires at least one sample")
    ordered = sorted(samples, key=lambda s: s.t_start)
    for prev, cur in zip(ordered, ordered[1:]):
        if cur.t_start < prev.t_end:
            raise ValueError(
                f"overlapping gaze intervals: [{prev.t_start}, {prev.t_end}] and "
                f"[{cur.t_start}, {cur.t_end}]"
            )
    durations = {label: 0.0 for label in AOI_LABELS}
    for s in samples:
        durations[s.aoi] += s.t_end - s.t_start
    total = sum(durations.values())
    return {label: 100.0 * durations[label] / total for label in AOI_LABELS}


def stage_time_headway(
    ego: Trajectory,
    lead: Trajectory,
    window,
    speed_floor: float = 5.0,
    lead_length: float | None = None,
    ego_length: float | None = None,
) -> float:
    """Mean time headway ``gap / v_ego`` over a time window.

    The gap is center-to-center ``x_lead - x_ego``; supplying both vehicle
    lengths switches it to bumper-to-bumper.  Samples with ego speed below
    ``speed_floor`` are excluded; if no sample survives, the headway is
    undefined and an error is raised.
    """
    t0, t1 = _window_bounds(window)
    if not (ego.covers(t0, t1) and lead.covers(t0, t1)):
        raise ValueError(f"window [{t0}, {t1}] outside a trajectory's time span")
    mask = (ego.t >= t0) & (ego.t <= t1)
    if not mask.any():
        raise ValueError(f"no ego samples inside window [{t0}, {t1}]")
    gap = np.interp(ego.t[mask], lead.t, lead.x) - ego.x[mask]
    if lead_length is not None and ego_length is not None:
        gap = gap - (lead_length + ego_length) / 2.0
    v = ego.v[mask]
    fast = v >= speed_floor
    if not fast.any():
        raise ValueError("undefined headway: every sample is below the speed floor")
    return float(np.mean(gap[fast] / v[fast]))


def one_way_anova(groups: Sequence[Sequence[float]]) -> tuple[float, float]:
    """Classical one-way ANOVA: F statistic and upper-tail p-value.

    ``F = MS_between / MS_within`` with degrees of freedom ``(k-1, N-k)``;
    the p-value comes from the F-distribution upper tail evaluated with
    the regularized incomplete beta function.
    """
    arrays = [np.asarray(g, dtype=float) for g in groups]
    if len(arrays) < 2:
        raise ValueError("one_way_anova requires at least two groups")
    if any(a.size < 2 for a in arrays):
        raise ValueError("every group needs at least two samples")
    n_total = sum(a.size for a in arrays)
    grand_mean = float(np.concatenate(arrays).mean())
    ss_between = sum(a.size * (float(a.mean()) - grand_mean) ** 2 for a in arrays)
    ss_within = sum(float(((a - a.mean()) ** 2).sum()) for a in arrays)
    df_between = len(arrays) - 1
    df_within = n_total - len(arrays)
    ms_within = ss_within / df_within
    if ms_within == 0.0:
        raise ValueError("undefined F statistic: zero within-group variance")
    f_stat = (ss_between / df_between) / ms_within
    p_value = float(
        special.betainc(df_within / 2.0, df_between / 2.0, df_within / (df_within + df_between * f_stat))
    )
    return float(f_stat), p_value
