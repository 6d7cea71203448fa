"""Driver personalization: style clustering, parameter extraction, profiles.

A driver's record combines per-stage time headways for speed control with
the lateral sensitivity/delay pair.  Styles come from 2-means clustering
on (percentage of affected cases, percentage of gaze time on the leading
vehicle); members of the unaffected cluster keep the centerline and carry
``alpha = tau = 0``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from .analysis import DriverFeatures
from .core import Trajectory, resample
from .lateral import replay_desired_lateral

AFFECTED = "affected"
UNAFFECTED = "unaffected"

#: discretization step of the (alpha, tau) fitting grid.
FIT_GRID_STEP = 0.05
#: sampling time used when replaying the lateral response during fitting.
FIT_TS = 0.02


@dataclass(frozen=True)
class ControllerConfig:
    """Controller inputs for one simulated run: headway map plus (alpha, tau).

    Unlike :class:`DriverProfile` this carries no style-consistency rules,
    so comparison configurations (zeroed, typical, or mirrored laterally)
    are expressible.
    """

    t_p: Mapping[float, float]
    alpha: float
    tau: float
    label: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "t_p", dict(self.t_p))
        if not self.t_p:
            raise ValueError("t_p needs at least one stage entry")
        if any(h <= 0 for h in self.t_p.values()):
            raise ValueError("all headways must be positive")
        if abs(self.alpha) > 1:
            raise ValueError("alpha must lie in [-1, 1]")
        if not 0 <= self.tau <= 2:
            raise ValueError("tau must lie in [0, 2]")


@dataclass(frozen=True)
class DriverProfile:
    """One driver's extracted personalization record.

    ``t_p`` maps stage speed (m/s) to the fitted time headway (s).
    Unaffected drivers always carry ``alpha = tau = 0``; affected drivers
    carry ``alpha`` in (0, 1] and ``tau`` in (0, 2].
    """

    driver_id: str
    t_p: Mapping[float, float]
    tau: float
    alpha: float
    style: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "t_p", dict(self.t_p))
        if self.style not in (AFFECTED, UNAFFECTED):
            raise ValueError(f"style must be {AFFECTED!r} or {UNAFFECTED!r}")
        if not self.t_p:
            raise ValueError("t_p needs at least one stage entry")
        if any(h <= 0 for h in self.t_p.values()):
            raise ValueError("all headways must be positive")
        if self.style == UNAFFECTED:
            if self.tau != 0 or self.alpha != 0:
                raise ValueError("unaffected drivers must carry alpha = tau = 0")
        else:
            if not 0 < self.alpha <= 1:
                raise ValueError("affected drivers need alpha in (0, 1]")
            if not 0 < self.tau <= 2:
                raise ValueError("affected drivers need tau in (0, 2]")

    def as_controller_config(self, label: str = "P") -> ControllerConfig:
        return ControllerConfig(t_p=self.t_p, alpha=self.alpha, tau=self.tau, label=label)


class ClusterResult(NamedTuple):
    """Two-cluster style assignment plus raw-feature centroids."""

    assignments: dict[str, str]
    centroids: dict[str, tuple[float, float]]


def cluster_styles(features: Sequence[DriverFeatures]) -> ClusterResult:
    """Split drivers into affected/unaffected styles by 2-means clustering.

    Features are z-score standardized, the two mutually farthest points
    seed the centroids (deterministic initialization), and Lloyd
    iterations run to convergence.  The cluster whose raw-feature centroid
    has the larger percentage of affected cases is labeled affected.
    """
    if len(features) < 2:
        raise ValueError("clustering requires at least two drivers")
    raw = np.array([[f.pc_a, f.pc_g] for f in features], dtype=float)
    if not np.all(np.isfinite(raw)):
        raise ValueError("features must be finite")
    if np.all(raw == raw[0]):
        raise ValueError("degenerate clustering: all feature points identical")
    std = raw.std(axis=0)
    scale = np.where(std == 0, 1.0, std)
    pts = (raw - raw.mean(axis=0)) / scale

    diff = pts[:, None, :] - pts[None, :, :]
    dist2 = (diff**2).sum(axis=2)
    i, j = np.unravel_index(int(np.argmax(dist2)), dist2.shape)
    centroids = np.array([pts[i], pts[j]])

    labels = np.full(len(pts), -1, dtype=int)
    for _ in range(100):
        d_to_c = ((pts[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_labels = np.argmin(d_to_c, axis=1)
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for k in (0, 1):
            if np.any(labels == k):
                centroids[k] = pts[labels == k].mean(axis=0)
    if len(np.unique(labels)) < 2:
        raise ValueError("degenerate clustering: every driver fell into one cluster")

    raw_centroids = [tuple(raw[labels == k].mean(axis=0)) for k in (0, 1)]
    affected_cluster = 0 if raw_centroids[0] > raw_centroids[1] else 1

    style_of = {affected_cluster: AFFECTED, 1 - affected_cluster: UNAFFECTED}
    assignments = {f.driver_id: style_of[int(lbl)] for f, lbl in zip(features, labels)}
    centroid_map = {
        AFFECTED: (
            float(raw_centroids[affected_cluster][0]),
            float(raw_centroids[affected_cluster][1]),
        ),
        UNAFFECTED: (
            float(raw_centroids[1 - affected_cluster][0]),
            float(raw_centroids[1 - affected_cluster][1]),
        ),
    }
    return ClusterResult(assignments=assignments, centroids=centroid_map)


def _fit_grid() -> tuple[np.ndarray, np.ndarray]:
    alphas = np.round(np.arange(0, 21) * FIT_GRID_STEP, 10)
    taus = np.round(np.arange(1, 41) * FIT_GRID_STEP, 10)
    return alphas, taus


def fit_lateral_params(
    cases: Sequence[tuple[Trajectory, Trajectory, object]],
) -> tuple[float, float]:
    """Extract (alpha, tau) from recorded cases by exhaustive grid search.

    Per case the lateral response is replayed open-loop from the recorded
    lead trace (resampled to the 0.02 s control grid), starting at the
    recorded ego lateral position, for every grid combination
    ``alpha in {0, 0.05, ..., 1.0}``, ``tau in {0.05, ..., 2.0}``.  The
    combination minimizing the squared error against the recorded ego
    lateral trace wins (ties resolved toward smaller tau, then smaller
    alpha).  The returned pair is the arithmetic mean of the per-case
    optima and may land off-grid.
    """
    if len(cases) == 0:
        raise ValueError("fit_lateral_params requires at least one case")
    alphas, taus = _fit_grid()
    best_pairs = []
    for ego, lead, window in cases:
        start, end = _case_bounds(window)
        n = int((end - start) / FIT_TS + 1e-9) + 1
        grid = start + np.arange(n) * FIT_TS
        if grid[-1] > min(ego.t[-1], lead.t[-1]):
            grid = grid[grid <= min(ego.t[-1], lead.t[-1])]
        ego_y = resample(ego, grid).y
        lead_y = resample(lead, grid).y
        y0 = float(ego_y[0])
        best = None
        for tau in taus:
            for alpha in alphas:
                trace = replay_desired_lateral(y0, lead_y, float(alpha), float(tau), FIT_TS)
                sse = float(((trace - ego_y) ** 2).sum())
                if best is None or sse < best[0]:
                    best = (sse, float(tau), float(alpha))
        best_pairs.append((best[2], best[1]))
    mean_alpha = float(np.mean([p[0] for p in best_pairs]))
    mean_tau = float(np.mean([p[1] for p in best_pairs]))
    return mean_alpha, mean_tau


def _case_bounds(window) -> tuple[float, float]:
    if hasattr(window, "start") and hasattr(window, "end"):
        return float(window.start), float(window.end)
    start, end = window
    return float(start), float(end)


def build_profile(
    driver_id: str,
    features: DriverFeatures | None,
    style: str,
    headways: Mapping[float, float],
    lateral: tuple[float, float] | None,
) -> DriverProfile:
    """Assemble a driver profile from its extracted pieces.

    Unaffected drivers get ``alpha = tau = 0`` regardless of any supplied
    lateral fit; affected drivers require one.
    """
    if style not in (AFFECTED, UNAFFECTED):
        raise ValueError(f"style must be {AFFECTED!r} or {UNAFFECTED!r}")
    if not headways:
        raise ValueError("at least one per-stage headway is required")
    if features is not None and features.driver_id and features.driver_id != driver_id:
        raise ValueError(
            f"inconsistent inputs: features belong to {features.driver_id!r}, not {driver_id!r}"
        )
    if style == UNAFFECTED:
        alpha, tau = 0.0, 0.0
    else:
        if lateral is None:
            raise ValueError("inconsistent inputs: affected style but no lateral fit supplied")
        alpha, tau = lateral
    return DriverProfile(driver_id=driver_id, t_p=dict(headways), tau=tau, alpha=alpha, style=style)


def headway_for_speed(profile: DriverProfile | ControllerConfig, lead_speed: float) -> float:
    """Time headway at a given lead speed.

    Piecewise-linear interpolation over the fitted stage speeds with
    constant extrapolation beyond the fitted range.
    """
    speeds = np.array(sorted(profile.t_p), dtype=float)
    values = np.array([profile.t_p[s] for s in sorted(profile.t_p)], dtype=float)
    return float(np.interp(lead_speed, speeds, values))


def comparison_configs(profile: DriverProfile) -> dict[str, ControllerConfig]:
    """Build the personalized config P and its two comparisons C1 and C2.

    P uses the profile's own (alpha, tau).  For an affected driver, C1 is
    the typical lane-centering config (0, 0) and C2 mirrors the response,
    (-alpha, tau).  For an unaffected driver, C1 is the following type
    (alpha 1, tau 1) and C2 the opposite type (alpha -1, tau 1).  All
    three share the profile's headway map.
    """
    p_cfg = profile.as_controller_config("P")
    if profile.style == AFFECTED:
        c1 = ControllerConfig(t_p=profile.t_p, alpha=0.0, tau=0.0, label="C1")
        c2 = ControllerConfig(t_p=profile.t_p, alpha=-profile.alpha, tau=profile.tau, label="C2")
    else:
        c1 = ControllerConfig(t_p=profile.t_p, alpha=1.0, tau=1.0, label="C1")
        c2 = ControllerConfig(t_p=profile.t_p, alpha=-1.0, tau=1.0, label="C2")
    return {"P": p_cfg, "C1": c1, "C2": c2}
