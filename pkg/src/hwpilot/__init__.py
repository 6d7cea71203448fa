"""Personalized highway pilot assist toolkit.

Simulation of IDM-based speed control with lead-following lane keeping,
plus the offline pipeline that classifies driver styles and extracts the
per-driver personalization parameters from trajectory and gaze data.
"""

from .core import (
    LaneGeometry,
    Trajectory,
    VehicleSample,
    kmh_to_mps,
    max_lateral_freedom,
    resample,
)
from .errors import GapViolationError, ParseError
from .idm import (
    FollowState,
    IdmParams,
    desired_gap,
    equilibrium_gap,
    free_flow_acceleration,
    idm_acceleration,
)
from .lateral import (
    LateralKeeper,
    LateralParams,
    delay_steps,
    lead_displacement,
    replay_desired_lateral,
)
from .analysis import (
    AOI_LABELS,
    AffectedCase,
    DriverFeatures,
    GazeSample,
    gaze_proportions,
    hausdorff,
    is_affected_case,
    one_way_anova,
    percent_affected,
    reference_trajectory,
    stage_time_headway,
)
from .profiles import (
    AFFECTED,
    UNAFFECTED,
    ClusterResult,
    ControllerConfig,
    DriverProfile,
    build_profile,
    cluster_styles,
    comparison_configs,
    fit_lateral_params,
    headway_for_speed,
)
from .simulate import (
    CaseWindow,
    LateralOffset,
    ScenarioSpec,
    SimLog,
    Stage,
    default_scenario,
    lead_lateral_profile,
    run_scenario,
)
from .io import (
    FollowingEpisode,
    ingest_trajectories,
    load_profile,
    load_scenario,
    save_profile,
    save_scenario,
    segment_following_episodes,
    write_sim_log,
    write_trajectories,
)

__version__ = "0.1.0"

__all__ = [
    "AFFECTED",
    "AOI_LABELS",
    "AffectedCase",
    "CaseWindow",
    "ClusterResult",
    "ControllerConfig",
    "DriverFeatures",
    "DriverProfile",
    "FollowState",
    "FollowingEpisode",
    "GapViolationError",
    "GazeSample",
    "IdmParams",
    "LaneGeometry",
    "LateralKeeper",
    "LateralOffset",
    "LateralParams",
    "ParseError",
    "ScenarioSpec",
    "SimLog",
    "Stage",
    "Trajectory",
    "UNAFFECTED",
    "VehicleSample",
    "build_profile",
    "cluster_styles",
    "comparison_configs",
    "default_scenario",
    "delay_steps",
    "desired_gap",
    "equilibrium_gap",
    "fit_lateral_params",
    "free_flow_acceleration",
    "gaze_proportions",
    "hausdorff",
    "headway_for_speed",
    "idm_acceleration",
    "ingest_trajectories",
    "is_affected_case",
    "kmh_to_mps",
    "lead_displacement",
    "lead_lateral_profile",
    "load_profile",
    "load_scenario",
    "max_lateral_freedom",
    "one_way_anova",
    "percent_affected",
    "reference_trajectory",
    "replay_desired_lateral",
    "resample",
    "run_scenario",
    "save_profile",
    "save_scenario",
    "segment_following_episodes",
    "stage_time_headway",
    "write_sim_log",
    "write_trajectories",
]
