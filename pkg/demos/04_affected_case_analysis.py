"""Judging whether a driver follows the leader's lateral movements.

Per case, the ego's trace is compared with the leader's via the Hausdorff
distance and against a straight reference line at the leader's mean
lateral position.  The ego is "affected" in a case when its curve is
strictly closer to the leader's than that flat line is.  The percentage
of affected cases is the first clustering feature.
"""
import hwpilot as hp

spec = hp.default_scenario()

drivers = {
    "centerline driver (alpha 0)": hp.ControllerConfig(t_p={25.0: 2.0}, alpha=0.0, tau=0.0),
    "weak follower (alpha 0.3)": hp.ControllerConfig(t_p={25.0: 2.0}, alpha=0.3, tau=0.5),
    "strong follower (alpha 0.9)": hp.ControllerConfig(t_p={25.0: 2.0}, alpha=0.9, tau=0.8),
    "perfect mimic (alpha 1)": hp.ControllerConfig(t_p={25.0: 2.0}, alpha=1.0, tau=0.0),
}

for name, cfg in drivers.items():
    log = hp.run_scenario(spec, cfg)
    results = [hp.is_affected_case(log.ego, log.lead, w) for w in log.case_windows]
    pc_a = hp.percent_affected([r.affected for r in results])
    print(f"\n{name}: pc_a = {pc_a:.1f}%")
    for w, r in zip(log.case_windows[:4], results[:4]):
        print(
            f"  stage {w.stage_index} offset {w.offset_direction * w.offset_magnitude:+.1f} m: "
            f"H(ego, lead) = {r.h_ego_lead:.3f}, H(ref, lead) = {r.h_ref_lead:.3f} "
            f"-> {'affected' if r.affected else 'unaffected'}"
        )
    print("  (remaining stages behave alike)")
