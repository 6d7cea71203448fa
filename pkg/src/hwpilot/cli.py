"""Command-line workflows: simulate, analyze, fit, cluster, compare, report.

Every command reads/writes plain CSV/JSON files and is deterministic:
identical inputs and flags produce byte-identical outputs.  Failures exit
nonzero after printing one machine-readable JSON error line to stderr.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import analysis, io, profiles, simulate
from .core import Trajectory, resample

CASE_RESULTS_HEADER = [
    "start", "end", "stage_index", "offset_magnitude", "offset_direction",
    "h_ego_lead", "h_ref_lead", "affected",
]
HEADWAYS_HEADER = ["stage_index", "stage_speed_mps", "headway_s"]
CLUSTERS_HEADER = ["driver_id", "pc_a", "pc_g", "style"]


def _select_trajectory(trajectories, wanted_id: str, path) -> Trajectory:
    ids = [tr.vehicle_id for tr in trajectories]
    for tr in trajectories:
        if tr.vehicle_id == wanted_id:
            return tr
    if len(trajectories) == 1:
        return trajectories[0]
    raise ValueError(f"vehicle {wanted_id!r} not found in {path} (available: {ids})")


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _write_json(path, data) -> None:
    Path(path).write_text(json.dumps(data, indent=2) + "\n")


_fmt = io._fmt  # CSV float form, honors HWPILOT_FLOAT_PRECISION


# ---------------------------------------------------------------------------
# commands


def cmd_simulate(args) -> None:
    spec = io.load_scenario(args.scenario)
    profile = io.load_profile(args.profile)
    log = simulate.run_scenario(spec, profile, kappa=args.kappa)
    io.write_sim_log(args.out, log)


def cmd_analyze(args) -> None:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ego = _select_trajectory(io.ingest_trajectories(args.ego), args.ego_id, args.ego)
    lead = _select_trajectory(io.ingest_trajectories(args.lead), args.lead_id, args.lead)
    io.write_trajectories(out / "ego.csv", [ego])
    io.write_trajectories(out / "lead.csv", [lead])

    summary: dict = {"driver_id": ego.vehicle_id or args.ego_id}
    if args.cases:
        windows = io.read_case_windows(args.cases)
        results = [
            analysis.is_affected_case(ego, lead, w, time_weight=args.time_weight)
            for w in windows
        ]
        summary["hausdorff_time_weight"] = args.time_weight
        rows = [
            [
                _fmt(w.start), _fmt(w.end), str(w.stage_index),
                _fmt(w.offset_magnitude), str(w.offset_direction),
                _fmt(r.h_ego_lead), _fmt(r.h_ref_lead),
                "true" if r.affected else "false",
            ]
            for w, r in zip(windows, results)
        ]
        _write_csv(out / "case_results.csv", CASE_RESULTS_HEADER, rows)

        headway_rows = []
        for stage in sorted({w.stage_index for w in windows}):
            stage_windows = [w for w in windows if w.stage_index == stage]
            span = (min(w.start for w in stage_windows), max(w.end for w in stage_windows))
            headway = analysis.stage_time_headway(ego, lead, span)
            in_span = (lead.t >= span[0]) & (lead.t <= span[1])
            stage_speed = float(np.mean(lead.v[in_span]))
            headway_rows.append([str(stage), _fmt(stage_speed), _fmt(headway)])
        _write_csv(out / "headways.csv", HEADWAYS_HEADER, headway_rows)

        summary["n_cases"] = len(windows)
        summary["n_affected"] = sum(r.affected for r in results)
        summary["pc_a"] = analysis.percent_affected([r.affected for r in results])
    else:
        summary["n_cases"] = 0
        summary["n_affected"] = 0
        summary["pc_a"] = None

    if args.gaze:
        proportions = analysis.gaze_proportions(io.read_gaze_samples(args.gaze))
        _write_csv(
            out / "gaze.csv",
            ["aoi", "percent"],
            [[label, _fmt(proportions[label])] for label in analysis.AOI_LABELS],
        )
        summary["pc_g"] = proportions["front_lead"]
    else:
        summary["pc_g"] = None

    _write_json(out / "summary.json", summary)


def cmd_fit(args) -> None:
    analysis_dir = Path(args.analysis)
    summary = json.loads((analysis_dir / "summary.json").read_text())
    ego = io.ingest_trajectories(analysis_dir / "ego.csv")[0]
    lead = io.ingest_trajectories(analysis_dir / "lead.csv")[0]

    headways: dict[float, float] = {}
    with open(analysis_dir / "headways.csv", newline="") as fh:
        for row in csv.DictReader(fh):
            headways[float(row["stage_speed_mps"])] = float(row["headway_s"])

    affected_windows = []
    with open(analysis_dir / "case_results.csv", newline="") as fh:
        for row in csv.DictReader(fh):
            if row["affected"] == "true":
                affected_windows.append((float(row["start"]), float(row["end"])))

    driver_id = args.driver_id or summary.get("driver_id") or "driver"
    if args.style == "auto":
        style = profiles.AFFECTED if affected_windows else profiles.UNAFFECTED
    else:
        style = args.style

    lateral_fit = None
    if style == profiles.AFFECTED:
        if not affected_windows:
            raise ValueError("affected style but the analysis contains no affected cases")
        cases = [(ego, lead, w) for w in affected_windows]
        lateral_fit = profiles.fit_lateral_params(cases)

    features = None
    if summary.get("pc_a") is not None and summary.get("pc_g") is not None:
        features = analysis.DriverFeatures(
            pc_a=summary["pc_a"], pc_g=summary["pc_g"], driver_id=driver_id
        )
    profile = profiles.build_profile(driver_id, features, style, headways, lateral_fit)
    io.save_profile(args.out, profile)


def cmd_cluster(args) -> None:
    features = io.read_driver_features(args.features)
    result = profiles.cluster_styles(features)
    rows = [
        [f.driver_id, _fmt(f.pc_a), _fmt(f.pc_g), result.assignments[f.driver_id]]
        for f in features
    ]
    _write_csv(args.out, CLUSTERS_HEADER, rows)


def cmd_compare(args) -> None:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    profile = io.load_profile(args.profile)
    spec = io.load_scenario(args.scenario)
    configs = profiles.comparison_configs(profile)
    logs = {name: simulate.run_scenario(spec, cfg, kappa=args.kappa) for name, cfg in configs.items()}

    base = logs["P"]
    rows = [
        [_fmt(t), _fmt(ly), _fmt(py), _fmt(c1y), _fmt(c2y)]
        for t, ly, py, c1y, c2y in zip(
            base.ego.t, base.lead.y, logs["P"].ego.y, logs["C1"].ego.y, logs["C2"].ego.y
        )
    ]
    _write_csv(out / "lateral_traces.csv", ["t", "lead_y", "p_y", "c1_y", "c2_y"], rows)
    io.write_case_windows(out / "cases.csv", base.case_windows)

    summary = {}
    for name in ("P", "C1", "C2"):
        cfg, log = configs[name], logs[name]
        summary[name] = {
            "alpha": cfg.alpha,
            "tau_s": cfg.tau,
            "peak_abs_lateral_m": float(np.max(np.abs(log.ego.y))),
            "final_gap_m": float(log.lead.x[-1] - log.ego.x[-1]),
            "lateral_rmse_vs_lead_m": float(
                np.sqrt(np.mean((log.ego.y - log.lead.y) ** 2))
            ),
        }
    _write_json(out / "summary.json", summary)


def cmd_report(args) -> None:
    src = Path(args.infile)
    report: dict = {}

    case_results = src / "case_results.csv"
    sim_cases = src / "cases.csv"
    if case_results.exists() and (src / "ego.csv").exists():
        ego = io.ingest_trajectories(src / "ego.csv")[0]
        lead = io.ingest_trajectories(src / "lead.csv")[0]
        with open(case_results, newline="") as fh:
            rows = list(csv.DictReader(fh))
        report["cases"] = [_case_series(ego, lead, row) for row in rows]
    elif sim_cases.exists() and (src / "trajectories.csv").exists():
        trajectories = io.ingest_trajectories(src / "trajectories.csv")
        ego = _select_trajectory(trajectories, "ego", src / "trajectories.csv")
        lead = _select_trajectory(trajectories, "lead", src / "trajectories.csv")
        windows = io.read_case_windows(sim_cases)
        report["cases"] = [
            _case_series(
                ego,
                lead,
                {
                    "start": w.start, "end": w.end, "stage_index": w.stage_index,
                    "offset_magnitude": w.offset_magnitude,
                    "offset_direction": w.offset_direction,
                },
            )
            for w in windows
        ]

    clusters = src / "clusters.csv"
    if clusters.exists():
        with open(clusters, newline="") as fh:
            report["feature_scatter"] = [
                {
                    "driver_id": row["driver_id"],
                    "pc_a": float(row["pc_a"]),
                    "pc_g": float(row["pc_g"]),
                    "style": row["style"],
                }
                for row in csv.DictReader(fh)
            ]

    traces = src / "lateral_traces.csv"
    if traces.exists():
        with open(traces, newline="") as fh:
            rows = list(csv.DictReader(fh))
        step = max(1, len(rows) // 2000)
        rows = rows[::step]
        report["comparison"] = {
            key: [float(r[key]) for r in rows]
            for key in ("t", "lead_y", "p_y", "c1_y", "c2_y")
        }

    if not report:
        raise ValueError(f"no known result files found under {src}")
    _write_json(args.out, report)


def _case_series(ego: Trajectory, lead: Trajectory, row) -> dict:
    start, end = float(row["start"]), float(row["end"])
    grid = np.linspace(start, end, 100)
    entry = {
        "stage_index": int(row["stage_index"]),
        "offset_magnitude": float(row["offset_magnitude"]),
        "offset_direction": int(row["offset_direction"]),
        "start": start,
        "end": end,
        "t": [float(v) for v in grid],
        "ego_y": [float(v) for v in resample(ego, grid).y],
        "lead_y": [float(v) for v in resample(lead, grid).y],
    }
    if "affected" in row:
        entry["affected"] = row["affected"] == "true"
        entry["h_ego_lead"] = float(row["h_ego_lead"])
        entry["h_ref_lead"] = float(row["h_ref_lead"])
    return entry


# ---------------------------------------------------------------------------
# parser and dispatch


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hwpilot",
        description="Personalized highway pilot assist: simulation and calibration workflows.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a scenario with a driver profile")
    p.add_argument("--scenario", required=True, help="scenario JSON file")
    p.add_argument("--profile", required=True, help="driver profile JSON file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--kappa", type=float, default=0.0, help="lateral tracking lag time constant, s")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="per-case similarity, headways and gaze features")
    p.add_argument("--ego", required=True, help="trajectory CSV holding the ego vehicle")
    p.add_argument("--ego-id", default="ego", help="vehicle id of the ego (default: ego)")
    p.add_argument("--lead", required=True, help="trajectory CSV holding the lead vehicle")
    p.add_argument("--lead-id", default="lead", help="vehicle id of the lead (default: lead)")
    p.add_argument("--cases", help="case-window CSV")
    p.add_argument("--gaze", help="gaze-interval CSV")
    p.add_argument(
        "--time-weight", type=float, default=analysis.DEFAULT_TIME_WEIGHT,
        help="meters per second of time in the similarity embedding",
    )
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("fit", help="extract a driver profile from an analysis directory")
    p.add_argument("--analysis", required=True, help="directory produced by analyze")
    p.add_argument("--out", required=True, help="output profile JSON path")
    p.add_argument("--driver-id", help="driver id for the profile")
    p.add_argument(
        "--style", choices=["auto", "affected", "unaffected"], default="auto",
        help="driving style; auto = affected when any affected case exists",
    )
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("cluster", help="cluster drivers into styles on (pc_a, pc_g)")
    p.add_argument("--features", required=True, help="driver feature CSV")
    p.add_argument("--out", required=True, help="output clusters CSV")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("compare", help="simulate P, C1 and C2 configs side by side")
    p.add_argument("--profile", required=True, help="driver profile JSON file")
    p.add_argument("--scenario", required=True, help="scenario JSON file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--kappa", type=float, default=0.0, help="lateral tracking lag time constant, s")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("report", help="aggregate outputs into plot-ready JSON series")
    p.add_argument("--in", dest="infile", required=True, help="directory of prior outputs")
    p.add_argument("--out", required=True, help="output report JSON path")
    p.set_defaults(func=cmd_report)

    return parser


def cli_dispatch(argv) -> int:
    """Parse arguments and run one command; returns the process exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        args.func(args)
        return 0
    except Exception as exc:  # deliberate catch-all: CLI boundary
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            file=sys.stderr,
        )
        return 1


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
