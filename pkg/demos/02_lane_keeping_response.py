"""The stimulus-response lane-keeping model.

The desired lateral position integrates the leader's delayed lateral
displacements, scaled by the sensitivity alpha.  This script shows how
(alpha, tau) shape the response to one lateral maneuver of the leader,
and how the safe-boundary clamp caps the excursion.
"""
import numpy as np

import hwpilot as hp
from demo_utils import get_pyplot, save_figure

TS = 0.02

# Leader maneuver: smooth offset out to 0.6 m and back.
t = np.arange(0.0, 20.0, TS)
offset = hp.LateralOffset(magnitude=0.6, direction=1, start_time_within_stage=4.0,
                          ramp_duration=2.0, hold_duration=5.0)
lead_y = np.array([hp.lead_lateral_profile(offset, ti - 4.0) for ti in t - 0.0])

personas = [
    ("ignores the leader", 0.0, 0.0),
    ("half sensitivity, 0.5 s delay", 0.5, 0.5),
    ("full mimic, 1 s delay", 1.0, 1.0),
    ("opposite type", -1.0, 1.0),
]

traces = {}
for name, alpha, tau in personas:
    keeper = hp.LateralKeeper(hp.LateralParams(alpha=alpha, tau=tau, ts=TS))
    ys = [0.0]
    for prev, now in zip(lead_y, lead_y[1:]):
        ys.append(keeper.step(hp.lead_displacement(now, prev)))
    traces[name] = np.array(ys)
    print(f"{name:32s} alpha={alpha:+.1f} tau={tau:.1f}: "
          f"peak {np.max(np.abs(ys)):.3f} m at "
          f"t = {t[int(np.argmax(np.abs(ys)))]:.2f} s")

# The clamp: freedom is (3.75 - 2*0.2 - 2.1)/2 = 0.625 m, so even a full
# mimic of the 0.6 m maneuver stays inside; a persistent drift would not.
freedom = hp.max_lateral_freedom(hp.LaneGeometry())
print(f"\nsafe corridor half-width: {freedom} m")
drifting = hp.LateralKeeper(hp.LateralParams(alpha=1.0, tau=0.0, ts=TS))
for _ in range(200):
    y = drifting.step(0.01)
print(f"after a 2.0 m cumulative leader drift the ego desired position is "
      f"clamped at {y} m")

plt = get_pyplot()
if plt:
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot(t, lead_y, "k--", lw=1.2, label="leader")
    for name, _, _ in personas:
        ax.plot(t, traces[name], label=name)
    ax.axhline(freedom, color="r", lw=0.8, ls=":")
    ax.axhline(-freedom, color="r", lw=0.8, ls=":")
    ax.set_xlabel("time [s]")
    ax.set_ylabel("lateral position [m]")
    ax.legend(fontsize=8)
    fig.tight_layout()
    save_figure(plt, "02_lane_keeping_response.png")
