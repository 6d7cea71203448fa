"""Acceptance suite: one test per release criterion, each printing a
pass/fail line (run with ``pytest tests/test_acceptance.py -v -s``)."""
import json
import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

import hwpilot as hp
from hwpilot.cli import cli_dispatch


@contextmanager
def criterion(number, description):
    try:
        yield
    except BaseException:
        print(f"[FAIL] C{number:02d} {description}")
        raise
    print(f"[PASS] C{number:02d} {description}")


def test_c01_idm_equilibrium_gap():
    with criterion(1, "closed-loop gap converges to the analytic IDM equilibrium"):
        t_headway, v_lead = 2.0, 25.0
        spec = hp.ScenarioSpec(stages=(hp.Stage(v_lead, 120.0),), initial_gap=40.0)
        cfg = hp.ControllerConfig(t_p={v_lead: t_headway}, alpha=0.0, tau=0.0)
        start = time.perf_counter()
        log = hp.run_scenario(spec, cfg)
        elapsed = time.perf_counter() - start
        # independent fixed point: s*(v,0) / sqrt(1 - (v/v0)^4)
        v0 = 120.0 / 3.6
        expected = (2.0 + t_headway * v_lead) / math.sqrt(1.0 - (v_lead / v0) ** 4)
        assert expected == pytest.approx(62.89, abs=0.01)
        final_gap = float(log.lead.x[-1] - log.ego.x[-1])
        assert abs(final_gap - expected) <= 0.01 * expected
        assert elapsed < 1.0, f"simulation took {elapsed:.2f} s"


def test_c02_idm_point_value():
    with criterion(2, "IDM acceleration point value 0.0434 m/s^2"):
        acc = hp.idm_acceleration(
            hp.IdmParams(T=1.5), hp.FollowState(v=25.0, s=50.0, dv=0.0)
        )
        assert abs(acc - 0.0434) <= 1e-4


def test_c03_hausdorff_oracle_equivalence():
    with criterion(3, "hausdorff matches brute force exactly on 1,000 random pairs"):
        def brute(a, b):
            def directed(p, q):
                worst = 0.0
                for px, py in p:
                    best = math.inf
                    for qx, qy in q:
                        dx, dy = px - qx, py - qy
                        d2 = dx * dx + dy * dy
                        if d2 < best:
                            best = d2
                    if best > worst:
                        worst = best
                return worst

            return math.sqrt(max(directed(a, b), directed(b, a)))

        rng = np.random.default_rng(2024)
        start = time.perf_counter()
        for _ in range(1000):
            a = rng.uniform(-50.0, 50.0, size=(int(rng.integers(1, 21)), 2))
            b = rng.uniform(-50.0, 50.0, size=(int(rng.integers(1, 21)), 2))
            h = hp.hausdorff(a, b)
            assert h == brute(a, b)
            assert h == hp.hausdorff(b, a)
            assert hp.hausdorff(a, a) == 0.0
        elapsed = time.perf_counter() - start
        assert elapsed < 5.0, f"1,000 comparisons took {elapsed:.2f} s"


def test_c04_lateral_hand_trace():
    with criterion(4, "delayed stimulus-response trace reproduces the worked example"):
        displacements = [0.1, 0.2, 0.0, 0.0]
        # hand-iterated recursion with a two-step delay as the oracle
        expected, y = [], 0.0
        delayed_inputs = [0.0, 0.0] + displacements
        for k in range(4):
            y = y + 0.5 * delayed_inputs[k]
            expected.append(y)
        keeper = hp.LateralKeeper(hp.LateralParams(alpha=0.5, tau=0.04, ts=0.02))
        got = [keeper.step(d) for d in displacements]
        assert got == expected
        assert got[0] == 0.0 and got[1] == 0.0
        assert got[2] == 0.05
        assert got[3] == pytest.approx(0.15, abs=1e-15)


def test_c05_clamp_safety_fuzz():
    with criterion(5, "10,000 random streams never leave the 0.625 m safe corridor"):
        rng = np.random.default_rng(99)
        geometry = hp.LaneGeometry()
        bound = hp.max_lateral_freedom(geometry)
        assert bound == 0.625
        for _ in range(10_000):
            params = hp.LateralParams(
                alpha=float(rng.uniform(-1.0, 1.0)),
                tau=float(rng.uniform(0.0, 2.0)),
                ts=0.02,
            )
            keeper = hp.LateralKeeper(params, geometry)
            for d in rng.uniform(-0.05, 0.05, size=100):
                assert abs(keeper.step(float(d))) <= bound


def _fit_case(alpha, tau, rng=None):
    t = np.arange(0.0, 16.0, 0.02)
    y = np.zeros_like(t)
    rel = t - 3.0
    ramp, hold, mag = 2.0, 4.0, 0.5
    up = (rel >= 0) & (rel < ramp)
    y[up] = mag * (1 - np.cos(np.pi * rel[up] / ramp)) / 2
    y[(rel >= ramp) & (rel < ramp + hold)] = mag
    down = (rel >= ramp + hold) & (rel < 2 * ramp + hold)
    y[down] = mag * (1 - np.cos(np.pi * (2 * ramp + hold - rel[down]) / ramp)) / 2
    lead = hp.Trajectory(t=t, x=25 * t, y=y, v=np.full_like(t, 25.0), vehicle_id="lead")
    ego_y = hp.replay_desired_lateral(0.0, lead.y, alpha, tau, 0.02)
    ego = hp.Trajectory(t=t, x=25 * t - 50, y=ego_y, v=lead.v, vehicle_id="ego")
    return ego, lead, (0.0, float(t[-1]))


def test_c06_parameter_recovery():
    with criterion(6, "grid search recovers generating (alpha, tau) parameters"):
        start = time.perf_counter()
        for alpha in (0.25, 0.45, 0.60, 0.80, 1.00):
            for tau in (0.25, 0.70, 1.00, 1.50, 2.00):
                got = hp.fit_lateral_params([_fit_case(alpha, tau)])
                assert got == (alpha, tau), f"on-grid ({alpha}, {tau}) -> {got}"
        rng = np.random.default_rng(314)
        for _ in range(50):
            alpha = float(rng.uniform(0.1, 1.0))
            tau = float(rng.uniform(0.05, 1.95))
            got_a, got_t = hp.fit_lateral_params([_fit_case(alpha, tau)])
            assert abs(got_a - alpha) <= 0.05, f"alpha {alpha} -> {got_a}"
            assert abs(got_t - tau) <= 0.05, f"tau {tau} -> {got_t}"
        elapsed = time.perf_counter() - start
        assert elapsed < 30.0, f"recovery suite took {elapsed:.2f} s"


def test_c07_affected_detector_end_to_end():
    with criterion(7, "simulated drivers split 0%/100% affected at the alpha limits"):
        spec = hp.default_scenario()
        pc_a = {}
        for alpha, tau in ((0.0, 0.0), (0.3, 0.5), (1.0, 0.0)):
            cfg = hp.ControllerConfig(t_p={25.0: 2.0}, alpha=alpha, tau=tau)
            log = hp.run_scenario(spec, cfg, kappa=0.0)
            flags = [
                hp.is_affected_case(log.ego, log.lead, w).affected
                for w in log.case_windows
            ]
            pc_a[alpha] = hp.percent_affected(flags)
        assert pc_a[0.0] == 0.0
        assert pc_a[1.0] == 100.0
        assert 0.0 <= pc_a[0.3] <= 100.0


def test_c08_mirror_property_of_comparison_configs():
    with criterion(8, "P and C2 lateral traces are mirror images for an extracted affected driver"):
        profile = hp.DriverProfile(
            driver_id="1",
            t_p={25.0: 1.50, 27.78: 1.11, 30.56: 0.85, 33.33: 1.25},
            tau=1.030,
            alpha=0.913,
            style=hp.AFFECTED,
        )
        spec = hp.ScenarioSpec(
            stages=(hp.Stage(25.0, 40.0),), offsets=(hp.LateralOffset(0.3, 1, 10.0),)
        )
        configs = hp.comparison_configs(profile)
        log_p = hp.run_scenario(spec, configs["P"], kappa=0.0)
        log_c2 = hp.run_scenario(spec, configs["C2"], kappa=0.0)
        freedom = hp.max_lateral_freedom(spec.lane)
        assert np.max(np.abs(log_p.ego.y)) < freedom  # clamp never engages
        assert np.max(np.abs(log_p.ego.y + log_c2.ego.y)) <= 1e-9


def test_c09_clustering_against_brute_force():
    with criterion(9, "two-blob styles recovered and optimal per the 2-partition oracle"):
        rng = np.random.default_rng(21)
        radius, centers = 2.0, ((12.0, 40.0), (82.0, 72.0))
        feats = []
        for blob, (ca, cg) in enumerate(centers):
            for i in range(8):
                feats.append(
                    hp.DriverFeatures(
                        pc_a=ca + rng.uniform(-radius, radius),
                        pc_g=cg + rng.uniform(-radius, radius),
                        driver_id=f"{'ua'[blob]}{i}",
                    )
                )
        assert math.dist(centers[0], centers[1]) >= 10 * radius
        result = hp.cluster_styles(feats)
        for f in feats:
            expected = hp.AFFECTED if f.driver_id.startswith("a") else hp.UNAFFECTED
            assert result.assignments[f.driver_id] == expected
        assert result.centroids[hp.AFFECTED][0] > result.centroids[hp.UNAFFECTED][0]

        # exhaustive optimal 2-partition on the standardized coordinates
        raw = np.array([[f.pc_a, f.pc_g] for f in feats])
        pts = (raw - raw.mean(axis=0)) / raw.std(axis=0)
        best, best_partition = np.inf, None
        for bits in range(1, 2 ** (len(pts) - 1)):
            mask = np.array([(bits >> i) & 1 for i in range(len(pts))], dtype=bool)
            if mask.all():
                continue
            sse = sum(
                float(((pts[side] - pts[side].mean(axis=0)) ** 2).sum())
                for side in (mask, ~mask)
            )
            if sse < best:
                best, best_partition = sse, frozenset(
                    [frozenset(np.flatnonzero(mask)), frozenset(np.flatnonzero(~mask))]
                )
        got = frozenset(
            frozenset(
                i for i, f in enumerate(feats) if result.assignments[f.driver_id] == s
            )
            for s in (hp.AFFECTED, hp.UNAFFECTED)
        )
        assert got == best_partition


def test_c10_anova_oracle():
    with criterion(10, "one-way ANOVA returns F = 1.5, p = 0.2879 on the worked example"):
        f_stat, p_value = hp.one_way_anova([[1, 2, 3], [2, 3, 4]])
        assert abs(f_stat - 1.5) <= 1e-9
        assert abs(p_value - 0.2879) <= 1e-3


def test_c11_pipeline_determinism_and_round_trip(tmp_path):
    with criterion(11, "simulate/ingest/analyze is byte-deterministic and CSV round-trips"):
        spec = hp.ScenarioSpec(
            stages=(hp.Stage(25.0, 60.0),),
            offsets=(hp.LateralOffset(0.3, 1, 15.0), hp.LateralOffset(0.5, -1, 40.0)),
        )
        hp.save_scenario(tmp_path / "scenario.json", spec)
        profile = hp.DriverProfile("d", {25.0: 2.0}, 0.628, 0.367, hp.AFFECTED)
        hp.save_profile(tmp_path / "profile.json", profile)

        blobs = []
        for run in ("one", "two"):
            sim, ana = tmp_path / f"sim_{run}", tmp_path / f"ana_{run}"
            assert cli_dispatch([
                "simulate", "--scenario", str(tmp_path / "scenario.json"),
                "--profile", str(tmp_path / "profile.json"), "--out", str(sim),
            ]) == 0
            assert cli_dispatch([
                "analyze", "--ego", str(sim / "trajectories.csv"),
                "--lead", str(sim / "trajectories.csv"),
                "--cases", str(sim / "cases.csv"), "--out", str(ana),
            ]) == 0
            blobs.append({
                p.name: p.read_bytes()
                for p in sorted(list(sim.iterdir()) + list(ana.iterdir()))
            })
        assert blobs[0].keys() == blobs[1].keys()
        for name in blobs[0]:
            assert blobs[0][name] == blobs[1][name], f"{name} differs between runs"

        log = hp.run_scenario(spec, profile)
        hp.write_trajectories(tmp_path / "rt.csv", [log.ego, log.lead])
        back = {tr.vehicle_id: tr for tr in hp.ingest_trajectories(tmp_path / "rt.csv")}
        for original in (log.ego, log.lead):
            restored = back[original.vehicle_id]
            for name in ("t", "x", "y", "v"):
                assert np.max(np.abs(getattr(restored, name) - getattr(original, name))) <= 1e-9


def test_c12_episode_segmentation_oracle():
    with criterion(12, "episode segmentation matches the per-frame co-presence oracle"):
        def grid_traj(t0, t1, x0, v, vid, lane="l"):
            t = np.arange(t0, t1 + 0.25, 0.5)
            return hp.Trajectory(
                t=t, x=x0 + v * (t - t[0]), y=np.zeros_like(t),
                v=np.full_like(t, v), vehicle_id=vid, lane_id=lane,
            )

        def oracle(fleet, min_duration=10.0):
            found = set()
            for lane in {tr.lane_id for tr in fleet}:
                group = [tr for tr in fleet if tr.lane_id == lane]
                times = np.unique(np.concatenate([tr.t for tr in group]))
                for lead in group:
                    for follower in group:
                        if lead is follower:
                            continue
                        ok = []
                        for tau in times:
                            present = (
                                lead.t[0] <= tau <= lead.t[-1]
                                and follower.t[0] <= tau <= follower.t[-1]
                            )
                            if not present:
                                ok.append(False)
                                continue
                            x_l = np.interp(tau, lead.t, lead.x)
                            x_f = np.interp(tau, follower.t, follower.x)
                            between = any(
                                other.t[0] <= tau <= other.t[-1]
                                and x_f < np.interp(tau, other.t, other.x) < x_l
                                for other in group
                                if other is not lead and other is not follower
                            )
                            ok.append(x_l > x_f and not between)
                        start = None
                        for i in range(len(times) + 1):
                            inside = i < len(times) and ok[i]
                            if inside and start is None:
                                start = i
                            elif not inside and start is not None:
                                t0, t1 = float(times[start]), float(times[i - 1])
                                if t1 - t0 > min_duration:
                                    found.add((lane, lead.vehicle_id, follower.vehicle_id, t0, t1))
                                start = None
            return found

        fleets = [
            # three vehicles nose to tail for 20 s: only adjacent pairs pair up
            [
                grid_traj(0.0, 20.0, 100.0, 25.0, "A"),
                grid_traj(0.0, 20.0, 50.0, 25.0, "B"),
                grid_traj(0.0, 20.0, 0.0, 25.0, "C"),
            ],
            # middle vehicle leaves early, joining the outer pair afterwards
            [
                grid_traj(0.0, 40.0, 200.0, 25.0, "A"),
                grid_traj(0.0, 12.0, 100.0, 25.0, "B"),
                grid_traj(0.0, 40.0, 0.0, 25.0, "C"),
            ],
            # below the ten-second threshold
            [
                grid_traj(0.0, 8.0, 50.0, 25.0, "A"),
                grid_traj(0.0, 8.0, 0.0, 25.0, "B"),
            ],
            # two lanes, one overtake
            [
                grid_traj(0.0, 30.0, 120.0, 24.0, "A"),
                grid_traj(0.0, 30.0, 0.0, 30.0, "B"),
                grid_traj(5.0, 25.0, 60.0, 25.0, "D", lane="l2"),
                grid_traj(0.0, 30.0, 0.0, 25.0, "E", lane="l2"),
            ],
        ]
        for fleet in fleets:
            got = {
                (e.lane_id, e.lead.vehicle_id, e.follower.vehicle_id,
                 float(e.lead.t[0]), float(e.lead.t[-1]))
                for e in hp.segment_following_episodes(fleet)
            }
            assert got == oracle(fleet)
            for episode in hp.segment_following_episodes(fleet):
                assert episode.duration > 10.0
