"""Speed control with the Intelligent Driver Model.

Walks through the acceleration law itself, its equilibrium gap, and a
closed-loop run in which the ego settles onto that equilibrium while
following a constant-speed leader.
"""
import numpy as np

import hwpilot as hp
from demo_utils import get_pyplot, save_figure

# The seven-parameter set: only the time headway T is personalized, the
# rest are the standard highway values (desired speed 120 km/h, comfort
# accelerations, quartic exponent, 2 m jam distance).
params = hp.IdmParams(T=2.0)
print(f"desired velocity v0 = {params.v0:.3f} m/s ({params.v0 * 3.6:.0f} km/h)")

# Acceleration over gap for a steady leader: far away the car accelerates
# toward v0, close in it brakes hard.
print("\nacceleration vs gap at 25 m/s (steady leader):")
for gap in (10, 20, 40, 62.9, 100, 300):
    acc = hp.idm_acceleration(params, hp.FollowState(v=25.0, s=gap, dv=0.0))
    print(f"  gap {gap:6.1f} m -> {acc:+.3f} m/s^2")

s_eq = hp.equilibrium_gap(params, 25.0)
print(f"\nanalytic equilibrium gap at 25 m/s with T = 2.0 s: {s_eq:.2f} m")

# Closed loop: start 23 m too close and let the controller sort it out.
spec = hp.ScenarioSpec(stages=(hp.Stage(25.0, 120.0),), initial_gap=40.0)
log = hp.run_scenario(spec, hp.ControllerConfig(t_p={25.0: 2.0}, alpha=0.0, tau=0.0))
gap = log.lead.x - log.ego.x
print(f"gap after {log.ego.t[-1]:.0f} s of simulation: {gap[-1]:.2f} m")
print(f"largest deviation from equilibrium in the last 10 s: "
      f"{np.max(np.abs(gap[-500:] - s_eq)):.4f} m")

plt = get_pyplot()
if plt:
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    ax1.plot(log.ego.t, gap, label="gap")
    ax1.axhline(s_eq, color="k", ls="--", lw=0.8, label="equilibrium")
    ax1.set_ylabel("gap [m]")
    ax1.legend()
    ax2.plot(log.ego.t, log.ego.v, label="ego speed")
    ax2.plot(log.ego.t, log.lead.v, ls="--", label="lead speed")
    ax2.set_xlabel("time [s]")
    ax2.set_ylabel("speed [m/s]")
    ax2.legend()
    fig.tight_layout()
    save_figure(plt, "01_idm_speed_control.png")
