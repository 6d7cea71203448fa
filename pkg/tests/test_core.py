import numpy as np
import pytest

from hwpilot import LaneGeometry, Trajectory, VehicleSample, max_lateral_freedom, resample


def make_traj(t, y=None, **kw):
    t = np.asarray(t, dtype=float)
    y = np.zeros_like(t) if y is None else np.asarray(y, dtype=float)
    return Trajectory(t=t, x=25.0 * t, y=y, v=np.full_like(t, 25.0), **kw)


class TestTrajectory:
    def test_sample_round_trip(self):
        samples = [VehicleSample(0.0, 0.0, 0.1, 20.0), VehicleSample(1.0, 20.0, 0.2, 20.0)]
        tr = Trajectory.from_samples(samples, vehicle_id="v1", lane_id="l2")
        assert tr.samples() == samples
        assert tr.vehicle_id == "v1" and tr.lane_id == "l2"
        assert tr.duration == 1.0

    def test_rejects_non_increasing_time(self):
        with pytest.raises(ValueError, match="strictly increasing"):
            make_traj([0.0, 1.0, 1.0])

    def test_rejects_negative_time_and_speed(self):
        with pytest.raises(ValueError):
            make_traj([-1.0, 0.0])
        with pytest.raises(ValueError, match="non-negative"):
            Trajectory(t=[0, 1], x=[0, 1], y=[0, 0], v=[1.0, -0.5])

    def test_rejects_empty_and_mismatched(self):
        with pytest.raises(ValueError):
            Trajectory(t=[], x=[], y=[], v=[])
        with pytest.raises(ValueError, match="equal length"):
            Trajectory(t=[0, 1], x=[0, 1, 2], y=[0, 0], v=[1, 1])

    def test_arrays_are_immutable(self):
        tr = make_traj([0.0, 1.0])
        with pytest.raises(ValueError):
            tr.y[0] = 5.0


class TestResample:
    def test_linear_midpoint(self):
        tr = make_traj([0.0, 1.0], y=[0.0, 1.0])
        out = resample(tr, [0.5])
        assert out.y[0] == 0.5
        assert out.t[0] == 0.5

    def test_identity_on_own_grid(self):
        tr = make_traj([0.0, 0.5, 1.25, 2.0], y=[0.0, 0.2, -0.1, 0.4])
        out = resample(tr, tr.t)
        for name in ("t", "x", "y", "v"):
            assert np.array_equal(getattr(out, name), getattr(tr, name))

    def test_hand_interpolation(self):
        tr = make_traj([0.0, 2.0, 4.0], y=[0.0, 0.4, 0.4])
        out = resample(tr, [1.0, 3.0])
        assert np.allclose(out.y, [0.2, 0.4], atol=1e-15)

    def test_idempotent(self):
        tr = make_traj([0.0, 1.0, 2.0, 3.0], y=[0.0, 0.3, -0.2, 0.1])
        grid = np.array([0.25, 1.5, 2.75])
        once = resample(tr, grid)
        twice = resample(once, grid)
        for name in ("t", "x", "y", "v"):
            assert np.array_equal(getattr(once, name), getattr(twice, name))

    def test_never_extrapolates(self):
        tr = make_traj([0.0, 1.0])
        with pytest.raises(ValueError, match="outside"):
            resample(tr, [0.5, 1.5])
        with pytest.raises(ValueError, match="outside"):
            resample(tr, [-0.1])

    def test_rejects_bad_grids(self):
        tr = make_traj([0.0, 1.0])
        with pytest.raises(ValueError, match="empty"):
            resample(tr, [])
        with pytest.raises(ValueError, match="increasing"):
            resample(tr, [0.5, 0.5])

    def test_rejects_degenerate_input(self):
        single = resample(make_traj([0.0, 1.0]), [0.5])
        assert len(single) == 1
        with pytest.raises(ValueError, match="degenerate"):
            resample(single, [0.5])

    def test_output_time_monotone(self):
        tr = make_traj([0.0, 1.0, 2.0], y=[0.0, 1.0, 0.5])
        out = resample(tr, [0.1, 0.9, 1.1, 1.9])
        assert np.all(np.diff(out.t) > 0)


class TestLaneGeometry:
    def test_default_widths(self):
        assert max_lateral_freedom(LaneGeometry(3.75, 0.2, 2.1)) == pytest.approx(0.625, abs=1e-15)

    def test_zero_freedom_boundary(self):
        assert max_lateral_freedom(LaneGeometry(3.75, 0.0, 3.75)) == 0.0

    def test_arithmetic(self):
        assert max_lateral_freedom(LaneGeometry(4.0, 0.2, 2.0)) == pytest.approx(0.8, abs=1e-15)

    def test_boundaries_symmetric(self):
        g = LaneGeometry()
        freedom = max_lateral_freedom(g)
        assert freedom > 0
        # the corridor is symmetric about the centerline by construction
        assert -freedom == -(max_lateral_freedom(g))

    def test_rejects_too_wide_ego(self):
        with pytest.raises(ValueError, match="freedom"):
            LaneGeometry(lane_width=3.0, safe_margin=0.5, ego_width=2.5)

    def test_rejects_nonpositive_fields(self):
        with pytest.raises(ValueError):
            LaneGeometry(lane_width=0.0)
        with pytest.raises(ValueError):
            LaneGeometry(safe_margin=-0.1)
        with pytest.raises(ValueError):
            LaneGeometry(ego_width=-1.0)
