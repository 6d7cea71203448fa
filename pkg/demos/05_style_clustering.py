"""Driving-style clustering and the gaze statistics behind it.

Sixteen synthetic drivers carry the two clustering features: percentage
of affected cases (pc_a) and percentage of gaze time on the leading
vehicle (pc_g).  Two-means clustering splits them into the affected and
unaffected styles, and a one-way ANOVA checks which gaze area separates
the groups.
"""
import numpy as np

import hwpilot as hp
from demo_utils import get_pyplot, save_figure

rng = np.random.default_rng(16)

# synthetic cohort: half the drivers follow the leader's lateral moves
features = []
for i in range(8):
    features.append(hp.DriverFeatures(
        pc_a=float(rng.uniform(10, 30)), pc_g=float(rng.uniform(38, 48)),
        driver_id=f"driver{i}",
    ))
for i in range(8, 16):
    features.append(hp.DriverFeatures(
        pc_a=float(rng.uniform(55, 90)), pc_g=float(rng.uniform(48, 60)),
        driver_id=f"driver{i}",
    ))

result = hp.cluster_styles(features)
affected = [f for f in features if result.assignments[f.driver_id] == hp.AFFECTED]
unaffected = [f for f in features if result.assignments[f.driver_id] == hp.UNAFFECTED]
print(f"{len(affected)} drivers affected, {len(unaffected)} unaffected")
print(f"affected centroid   (pc_a, pc_g) = "
      f"({result.centroids[hp.AFFECTED][0]:.1f}, {result.centroids[hp.AFFECTED][1]:.1f})")
print(f"unaffected centroid (pc_a, pc_g) = "
      f"({result.centroids[hp.UNAFFECTED][0]:.1f}, {result.centroids[hp.UNAFFECTED][1]:.1f})")

# group comparison of the gaze share on the leading vehicle
f_stat, p_value = hp.one_way_anova(
    [[f.pc_g for f in affected], [f.pc_g for f in unaffected]]
)
print(f"\ngaze-on-leader share, affected vs unaffected: "
      f"F = {f_stat:.2f}, p = {p_value:.2e}")
if p_value < 0.01:
    print("the gaze share separates the styles (p < 0.01): how much a driver")
    print("watches the leader indicates how likely the leader's lateral")
    print("movement drags the driver's own lane position along")

plt = get_pyplot()
if plt:
    fig, ax = plt.subplots(figsize=(6, 5))
    ax.scatter([f.pc_a for f in affected], [f.pc_g for f in affected],
               marker="^", label="affected")
    ax.scatter([f.pc_a for f in unaffected], [f.pc_g for f in unaffected],
               marker="s", label="unaffected")
    for style, marker in ((hp.AFFECTED, "*"), (hp.UNAFFECTED, "*")):
        cx, cy = result.centroids[style]
        ax.scatter([cx], [cy], marker=marker, s=220, color="red")
    ax.set_xlabel("percentage of affected cases pc_a [%]")
    ax.set_ylabel("gaze share on leading vehicle pc_g [%]")
    ax.legend()
    fig.tight_layout()
    save_figure(plt, "05_style_clustering.png")
