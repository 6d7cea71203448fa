"""File schemas, ingestion and following-episode segmentation.

Native trajectory CSV uses the header ``t,vehicle_id,lane_id,x,y,v`` with
SI units and one row per sample; floats are serialized at full precision
so a write/read round trip is lossless.  The highd-like schema ingests
frame-indexed drone recordings (``frame,id,x,y,xVelocity,laneId``) with a
configurable frame rate and an explicit lane-center table; it is
schema-compatible ingestion only, no dataset ships with the package.
"""
from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .core import LaneGeometry, Trajectory
from .errors import ParseError
from .profiles import DriverProfile
from .analysis import AOI_LABELS, DriverFeatures, GazeSample
from .simulate import CaseWindow, LateralOffset, ScenarioSpec, SimLog, Stage

TRAJECTORY_HEADER = ["t", "vehicle_id", "lane_id", "x", "y", "v"]
HIGHD_HEADER = ["frame", "id", "x", "y", "xVelocity", "laneId"]
CASES_HEADER = ["start", "end", "stage_index", "offset_magnitude", "offset_direction"]
GAZE_HEADER = ["t_start", "t_end", "aoi"]
FEATURES_HEADER = ["driver_id", "pc_a", "pc_g"]


def _fmt(value: float) -> str:
    """Decimal form of a float for CSV output.

    Full precision by default, which makes write/read round trips exact.
    The ``HWPILOT_FLOAT_PRECISION`` environment variable overrides the
    number of significant digits for smaller files; round trips are then
    no longer lossless.
    """
    digits = os.environ.get("HWPILOT_FLOAT_PRECISION")
    if digits:
        return format(float(value), f".{int(digits)}g")
    return repr(float(value))


def _float_field(row_no: int, name: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError as exc:
        raise ParseError(f"row {row_no}: field {name!r} is not a number: {raw!r}") from exc


def _read_rows(path, expected_header: list[str]) -> list[tuple[int, list[str]]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        rows = [(i + 1, row) for i, row in enumerate(reader) if row]
    if not rows or rows[0][1] != expected_header:
        raise ParseError(
            f"{path}: malformed header, expected {','.join(expected_header)!r}"
        )
    return rows[1:]


# ---------------------------------------------------------------------------
# trajectory CSV


def write_trajectories(path, trajectories: Sequence[Trajectory]) -> None:
    """Write trajectories to native CSV, one block per vehicle."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRAJECTORY_HEADER)
        for tr in trajectories:
            for t, x, y, v in zip(tr.t, tr.x, tr.y, tr.v):
                writer.writerow([_fmt(t), tr.vehicle_id, tr.lane_id, _fmt(x), _fmt(y), _fmt(v)])


def _native_trajectories(path) -> list[Trajectory]:
    groups: dict[str, dict] = {}
    for row_no, row in _read_rows(path, TRAJECTORY_HEADER):
        if len(row) != len(TRAJECTORY_HEADER):
            raise ParseError(f"row {row_no}: expected {len(TRAJECTORY_HEADER)} fields, got {len(row)}")
        t = _float_field(row_no, "t", row[0])
        vehicle_id, lane_id = row[1], row[2]
        x = _float_field(row_no, "x", row[3])
        y = _float_field(row_no, "y", row[4])
        v = _float_field(row_no, "v", row[5])
        g = groups.setdefault(vehicle_id, {"lane": lane_id, "rows": []})
        if g["lane"] != lane_id:
            raise ParseError(
                f"row {row_no}: vehicle {vehicle_id!r} changes lane_id "
                f"({g['lane']!r} -> {lane_id!r}); native schema expects one lane per vehicle"
            )
        if g["rows"] and t <= g["rows"][-1][0]:
            raise ParseError(
                f"row {row_no}: non-monotonic time for vehicle {vehicle_id!r} "
                f"({t} after {g['rows'][-1][0]})"
            )
        g["rows"].append((t, x, y, v))
    out = []
    for vehicle_id, g in groups.items():
        rows = g["rows"]
        if len(rows) < 2:
            raise ParseError(f"vehicle {vehicle_id!r} has fewer than 2 samples")
        arr = np.array(rows)
        out.append(
            Trajectory(
                t=arr[:, 0], x=arr[:, 1], y=arr[:, 2], v=arr[:, 3],
                vehicle_id=vehicle_id, lane_id=g["lane"],
            )
        )
    return out


def _highd_trajectories(
    path, frame_rate: float, lane_centers: Mapping[str, float], invert_y: bool
) -> list[Trajectory]:
    if frame_rate <= 0:
        raise ValueError("frame_rate must be positive")
    sign = -1.0 if invert_y else 1.0
    groups: dict[str, list] = {}
    for row_no, row in _read_rows(path, HIGHD_HEADER):
        if len(row) != len(HIGHD_HEADER):
            raise ParseError(f"row {row_no}: expected {len(HIGHD_HEADER)} fields, got {len(row)}")
        frame = _float_field(row_no, "frame", row[0])
        vid, lane = row[1], row[5]
        if lane not in lane_centers:
            raise ParseError(f"row {row_no}: no lane-center entry for lane {lane!r}")
        x = _float_field(row_no, "x", row[2])
        y = _float_field(row_no, "y", row[3])
        vx = _float_field(row_no, "xVelocity", row[4])
        rows = groups.setdefault(vid, [])
        if rows and frame <= rows[-1][0]:
            raise ParseError(f"row {row_no}: non-monotonic frame for vehicle {vid!r}")
        rows.append((frame, x, sign * (y - lane_centers[lane]), abs(vx), lane))
    out = []
    for vid, rows in groups.items():
        # one trajectory per contiguous constant-lane run; shorter-than-2 runs dropped
        run: list = []
        runs = []
        for r in rows:
            if run and r[4] != run[-1][4]:
                runs.append(run)
                run = []
            run.append(r)
        runs.append(run)
        for run in runs:
            if len(run) < 2:
                continue
            arr = np.array([(r[0] / frame_rate, r[1], r[2], r[3]) for r in run])
            out.append(
                Trajectory(
                    t=arr[:, 0], x=arr[:, 1], y=arr[:, 2], v=arr[:, 3],
                    vehicle_id=vid, lane_id=run[0][4],
                )
            )
    return out


def ingest_trajectories(
    path,
    fmt: str = "native",
    frame_rate: float = 25.0,
    lane_centers: Mapping[str, float] | None = None,
    invert_y: bool = False,
) -> list[Trajectory]:
    """Read trajectories from a file in the native or highd-like schema.

    Args:
        path: CSV file to read.
        fmt: ``"native"`` or ``"highd-like"``.
        frame_rate: frames per second of a highd-like recording.
        lane_centers: lane id to lateral center mapping, required for the
            highd-like schema; ``y`` is re-expressed relative to it.
        invert_y: flip the sign of the relative lateral coordinate for
            recordings whose y axis points right.

    Raises:
        ParseError: malformed header or rows, non-monotonic time within a
            vehicle, or a lane id missing from the lane-center table.
    """
    if fmt == "native":
        return _native_trajectories(path)
    if fmt == "highd-like":
        if lane_centers is None:
            raise ValueError("highd-like ingestion requires a lane-center table")
        return _highd_trajectories(path, frame_rate, lane_centers, invert_y)
    raise ValueError(f"unknown trajectory format {fmt!r}")


# ---------------------------------------------------------------------------
# case windows, gaze, features


def write_case_windows(path, windows: Sequence[CaseWindow]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CASES_HEADER)
        for w in windows:
            writer.writerow(
                [_fmt(w.start), _fmt(w.end), str(w.stage_index), _fmt(w.offset_magnitude), str(w.offset_direction)]
            )


def read_case_windows(path) -> list[CaseWindow]:
    out = []
    for row_no, row in _read_rows(path, CASES_HEADER):
        if len(row) != len(CASES_HEADER):
            raise ParseError(f"row {row_no}: expected {len(CASES_HEADER)} fields, got {len(row)}")
        out.append(
            CaseWindow(
                start=_float_field(row_no, "start", row[0]),
                end=_float_field(row_no, "end", row[1]),
                stage_index=int(_float_field(row_no, "stage_index", row[2])),
                offset_magnitude=_float_field(row_no, "offset_magnitude", row[3]),
                offset_direction=int(_float_field(row_no, "offset_direction", row[4])),
            )
        )
    return out


def read_gaze_samples(path) -> list[GazeSample]:
    out = []
    for row_no, row in _read_rows(path, GAZE_HEADER):
        if len(row) != len(GAZE_HEADER):
            raise ParseError(f"row {row_no}: expected {len(GAZE_HEADER)} fields, got {len(row)}")
        if row[2] not in AOI_LABELS:
            raise ParseError(f"row {row_no}: unknown AOI label {row[2]!r}")
        try:
            out.append(
                GazeSample(
                    t_start=_float_field(row_no, "t_start", row[0]),
                    t_end=_float_field(row_no, "t_end", row[1]),
                    aoi=row[2],
                )
            )
        except ValueError as exc:
            raise ParseError(f"row {row_no}: {exc}") from exc
    return out


def read_driver_features(path) -> list[DriverFeatures]:
    out = []
    for row_no, row in _read_rows(path, FEATURES_HEADER):
        if len(row) != len(FEATURES_HEADER):
            raise ParseError(f"row {row_no}: expected {len(FEATURES_HEADER)} fields, got {len(row)}")
        try:
            out.append(
                DriverFeatures(
                    driver_id=row[0],
                    pc_a=_float_field(row_no, "pc_a", row[1]),
                    pc_g=_float_field(row_no, "pc_g", row[2]),
                )
            )
        except ValueError as exc:
            raise ParseError(f"row {row_no}: {exc}") from exc
    return out


# ---------------------------------------------------------------------------
# scenario and profile JSON


def scenario_to_dict(spec: ScenarioSpec) -> dict:
    return {
        "stages": [
            {"lead_speed_mps": s.lead_speed, "duration_s": s.duration} for s in spec.stages
        ],
        "offsets": [
            {
                "magnitude_m": o.magnitude,
                "direction": o.direction,
                "start_time_in_stage_s": o.start_time_within_stage,
                "ramp_s": o.ramp_duration,
                "hold_s": o.hold_duration,
            }
            for o in spec.offsets
        ],
        "lane": {
            "lane_width_m": spec.lane.lane_width,
            "safe_margin_m": spec.lane.safe_margin,
            "ego_width_m": spec.lane.ego_width,
        },
        "initial_gap_m": spec.initial_gap,
        "ego_initial_speed_mps": spec.ego_initial_speed,
        "lead_swap_at_stage_boundary": spec.lead_swap_at_stage_boundary,
    }


def scenario_from_dict(data: Mapping) -> ScenarioSpec:
    lane = data.get("lane", {})
    return ScenarioSpec(
        stages=tuple(
            Stage(lead_speed=s["lead_speed_mps"], duration=s["duration_s"])
            for s in data["stages"]
        ),
        offsets=tuple(
            LateralOffset(
                magnitude=o["magnitude_m"],
                direction=o["direction"],
                start_time_within_stage=o["start_time_in_stage_s"],
                ramp_duration=o.get("ramp_s", 2.0),
                hold_duration=o.get("hold_s", 5.0),
            )
            for o in data.get("offsets", [])
        ),
        lane=LaneGeometry(
            lane_width=lane.get("lane_width_m", 3.75),
            safe_margin=lane.get("safe_margin_m", 0.2),
            ego_width=lane.get("ego_width_m", 2.1),
        ),
        initial_gap=data.get("initial_gap_m"),
        ego_initial_speed=data.get("ego_initial_speed_mps"),
        lead_swap_at_stage_boundary=bool(data.get("lead_swap_at_stage_boundary", True)),
    )


def save_scenario(path, spec: ScenarioSpec) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(spec), indent=2) + "\n")


def load_scenario(path) -> ScenarioSpec:
    return scenario_from_dict(json.loads(Path(path).read_text()))


def profile_to_dict(profile: DriverProfile) -> dict:
    return {
        "driver_id": profile.driver_id,
        "style": profile.style,
        "t_p": [
            {"speed_mps": speed, "headway_s": profile.t_p[speed]}
            for speed in sorted(profile.t_p)
        ],
        "tau_s": profile.tau,
        "alpha": profile.alpha,
    }


def profile_from_dict(data: Mapping) -> DriverProfile:
    return DriverProfile(
        driver_id=data["driver_id"],
        t_p={entry["speed_mps"]: entry["headway_s"] for entry in data["t_p"]},
        tau=data["tau_s"],
        alpha=data["alpha"],
        style=data["style"],
    )


def save_profile(path, profile: DriverProfile) -> None:
    Path(path).write_text(json.dumps(profile_to_dict(profile), indent=2) + "\n")


def load_profile(path) -> DriverProfile:
    return profile_from_dict(json.loads(Path(path).read_text()))


def write_sim_log(out_dir, log: SimLog) -> dict[str, Path]:
    """Write a simulation log to ``trajectories.csv`` and ``cases.csv``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "trajectories": out / "trajectories.csv",
        "cases": out / "cases.csv",
    }
    write_trajectories(paths["trajectories"], [log.ego, log.lead])
    write_case_windows(paths["cases"], log.case_windows)
    return paths


# ---------------------------------------------------------------------------
# following-episode segmentation


@dataclass(frozen=True)
class FollowingEpisode:
    """A leader/follower pair sharing a lane continuously for a while."""

    lead: Trajectory
    follower: Trajectory
    lane_id: str
    duration: float

    def __post_init__(self) -> None:
        if self.lead.lane_id != self.lane_id or self.follower.lane_id != self.lane_id:
            raise ValueError("both vehicles must share the episode's lane")
        if self.duration <= 0:
            raise ValueError("episode duration must be positive")


def segment_following_episodes(
    trajectories: Sequence[Trajectory], min_duration: float = 10.0
) -> list[FollowingEpisode]:
    """Extract following episodes from a fleet of trajectories.

    A pair qualifies while both vehicles share a lane, the leader is ahead
    in ``x``, and no other vehicle drives between them in that lane.
    Co-presence is evaluated on the union of the lane's sample times; only
    maximal runs strictly longer than ``min_duration`` (default: the
    ten-second threshold) are emitted, clipped to the co-presence
    interval.  An empty result is valid.
    """
    episodes: list[FollowingEpisode] = []
    by_lane: dict[str, list[Trajectory]] = {}
    for tr in trajectories:
        by_lane.setdefault(tr.lane_id, []).append(tr)

    for lane_id in sorted(by_lane):
        group = by_lane[lane_id]
        times = np.unique(np.concatenate([tr.t for tr in group]))
        pair_active: dict[tuple[int, int], np.ndarray] = {}
        for idx, tau in enumerate(times):
            active = []
            for i, tr in enumerate(group):
                if tr.t[0] <= tau <= tr.t[-1]:
                    active.append((float(np.interp(tau, tr.t, tr.x)), tr.vehicle_id, i))
            active.sort()
            for (_, _, follower_i), (_, _, leader_i) in zip(active, active[1:]):
                mask = pair_active.setdefault(
                    (leader_i, follower_i), np.zeros(len(times), dtype=bool)
                )
                mask[idx] = True

        for (leader_i, follower_i) in sorted(pair_active):
            mask = pair_active[(leader_i, follower_i)]
            run_start = None
            boundaries = []
            for idx in range(len(times) + 1):
                inside = idx < len(times) and mask[idx]
                if inside and run_start is None:
                    run_start = idx
                elif not inside and run_start is not None:
                    boundaries.append((run_start, idx - 1))
                    run_start = None
            for i0, i1 in boundaries:
                t0, t1 = float(times[i0]), float(times[i1])
                if t1 - t0 <= min_duration:
                    continue
                lead_clip = _clip(group[leader_i], t0, t1)
                follower_clip = _clip(group[follower_i], t0, t1)
                if lead_clip is None or follower_clip is None:
                    continue
                episodes.append(
                    FollowingEpisode(
                        lead=lead_clip,
                        follower=follower_clip,
                        lane_id=lane_id,
                        duration=t1 - t0,
                    )
                )
    episodes.sort(key=lambda e: (e.lane_id, e.follower.t[0], e.lead.vehicle_id, e.follower.vehicle_id))
    return episodes


def _clip(tr: Trajectory, t0: float, t1: float) -> Trajectory | None:
    mask = (tr.t >= t0) & (tr.t <= t1)
    if mask.sum() < 2:
        return None
    return Trajectory(
        t=tr.t[mask], x=tr.x[mask], y=tr.y[mask], v=tr.v[mask],
        vehicle_id=tr.vehicle_id, lane_id=tr.lane_id,
    )
