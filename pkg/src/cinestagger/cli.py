"""Command-line front end.

Subcommands: validate, solve, generate-configs, build, synth,
verify-decomposition.  Results go to standard output; progress and
error diagnostics go to standard error, so output given identical input
is byte-identical run to run.

Exit codes: 0 success, 1 validation or domain failure, 2 unreadable or
unparsable input, 3 infeasible instance.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
import time
from dataclasses import replace
from pathlib import Path
from typing import List, Optional

from .cluster import (
    DecompositionSizeError,
    build_joint_model,
    solve_all,
    verify_decomposition,
)
from .confgen import NoFeasibleConfigurationError, generate_configurations
from .domain import (
    MILLI,
    ClusterInstance,
    ForecastMatrix,
    InstanceDataError,
    InstanceFormatError,
    MultiClusterInstance,
    as_multi,
    attendance_to_json,
    dumps_instance,
    format_attendance,
    format_hhmm,
    load_instance,
)
from .formulation import build_model, export_lp_text
from .solver import SolveReport


def _fmt_objective(objective) -> str:
    return format_attendance(int(objective * MILLI))


def _schedule_rows(cluster: ClusterInstance, report: SolveReport) -> List[dict]:
    rows = []
    for screen_id, (film_id, config_index) in report.schedule.items():
        screen = cluster.screen_by_id[screen_id]
        config = cluster.configuration_by_key[(film_id, config_index)]
        rows.append(
            {
                "screen_id": screen.source_id,
                "location": cluster.location_by_id[screen.location_id].name,
                "film_id": film_id,
                "film_title": cluster.film_by_id[film_id].title,
                "config_index": config_index,
                "showtimes": [format_hhmm(t) for t in config.showtimes],
            }
        )
    return rows


def _print_table(all_rows: List[dict], objective) -> None:
    header = ["Screen", "Location", "Film", "Configuration", "Showtimes"]
    cells = [
        [
            str(r["screen_id"]),
            r["location"],
            r["film_title"],
            str(r["config_index"]),
            " ".join(r["showtimes"]),
        ]
        for r in all_rows
    ]
    widths = [max(len(header[i]), *(len(c[i]) for c in cells)) if cells else len(header[i])
              for i in range(len(header))]
    print("  ".join(h.ljust(widths[i]) for i, h in enumerate(header)).rstrip())
    for c in cells:
        print("  ".join(c[i].ljust(widths[i]) for i in range(len(header))).rstrip())
    print(f"Objective: {_fmt_objective(objective)}")


def _print_csv(all_rows: List[dict]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["screen_id", "location", "film_id", "film_title", "config_index", "showtimes"])
    for r in all_rows:
        writer.writerow(
            [r["screen_id"], r["location"], r["film_id"], r["film_title"],
             r["config_index"], " ".join(r["showtimes"])]
        )
    sys.stdout.write(buf.getvalue())


def cmd_validate(args) -> int:
    try:
        load_instance(args.instance)
    except InstanceDataError as exc:
        for violation in exc.violations:
            print(str(violation))
        return 1
    print("ok")
    return 0


def cmd_solve(args) -> int:
    instance = load_instance(args.instance)
    multi = as_multi(instance)

    started = time.perf_counter()
    report = solve_all(multi, parallel=args.parallel)
    elapsed = time.perf_counter() - started

    if args.export_lp:
        model = (
            build_model(multi.clusters[0]) if len(multi.clusters) == 1
            else build_joint_model(multi)
        )
        Path(args.export_lp).write_text(export_lp_text(model), encoding="utf-8")

    clusters = {c.cluster_id: c for c in multi.clusters}
    if args.format == "json":
        doc = {
            "status": report.overall_status,
            "objective": (
                attendance_to_json(int(report.combined_objective * MILLI))
                if report.combined_objective is not None else None
            ),
            "clusters": [],
        }
        for cluster_id, cluster_report in report.per_cluster.items():
            entry = {
                "cluster_id": cluster_id,
                "status": cluster_report.status,
                "method": cluster_report.method,
                "certified": cluster_report.certified,
            }
            if cluster_report.status == "Optimal":
                entry["objective"] = attendance_to_json(int(cluster_report.objective * MILLI))
                entry["schedule"] = _schedule_rows(clusters[cluster_id], cluster_report)
            else:
                entry["diagnostic"] = cluster_report.diagnostic
            doc["clusters"].append(entry)
        print(json.dumps(doc, indent=2))
    else:
        all_rows = [
            row
            for cluster_id, cluster_report in report.per_cluster.items()
            if cluster_report.status == "Optimal"
            for row in _schedule_rows(clusters[cluster_id], cluster_report)
        ]
        all_rows.sort(key=lambda r: r["screen_id"])
        if args.format == "csv":
            _print_csv(all_rows)
        elif report.overall_status == "Optimal":
            _print_table(all_rows, report.combined_objective)
        else:
            print("Status: Infeasible")

    print(
        f"solved {len(multi.clusters)} cluster(s) in {elapsed * 1000:.1f} ms",
        file=sys.stderr,
    )
    if report.overall_status != "Optimal":
        for cluster_id, cluster_report in report.per_cluster.items():
            if cluster_report.status == "Infeasible":
                print(f"cluster {cluster_id}: {cluster_report.diagnostic}", file=sys.stderr)
        return 3
    return 0


def cmd_generate_configs(args) -> int:
    instance = load_instance(args.instance, allow_partial=True)
    multi = as_multi(instance)

    rebuilt = []
    for cluster in multi.clusters:
        window = cluster.window()
        configs = []
        for film in sorted(cluster.films, key=lambda f: f.film_id):
            configs.extend(
                generate_configurations(
                    film, window, cluster.stagger_interval_minutes, args.turnover
                )
            )
        keys = {c.key() for c in configs}
        kept_forecast = {
            k: v for k, v in cluster.forecast.entries.items() if (k[1], k[2]) in keys
        }
        rebuilt.append(
            replace(
                cluster,
                configurations=tuple(configs),
                forecast=ForecastMatrix(kept_forecast),
            )
        )

    out = rebuilt[0] if len(rebuilt) == 1 else MultiClusterInstance(clusters=tuple(rebuilt))
    sys.stdout.write(dumps_instance(out))
    return 0


def cmd_build(args) -> int:
    instance = load_instance(args.instance)
    multi = as_multi(instance)

    total_vars = total_eq = total_ineq = 0
    for cluster in multi.clusters:
        model = build_model(cluster)
        print(
            f"cluster {cluster.cluster_id}: {model.variable_count} variables,"
            f" {len(model.equality_rows)} equality rows,"
            f" {len(model.inequality_rows)} inequality rows"
        )
        total_vars += model.variable_count
        total_eq += len(model.equality_rows)
        total_ineq += len(model.inequality_rows)
    print(
        f"total: {total_vars} variables, {total_eq} equality rows,"
        f" {total_ineq} inequality rows"
    )

    if args.export_lp:
        model = (
            build_model(multi.clusters[0]) if len(multi.clusters) == 1
            else build_joint_model(multi)
        )
        Path(args.export_lp).write_text(export_lp_text(model), encoding="utf-8")
        print(f"wrote {args.export_lp}", file=sys.stderr)
    return 0


def cmd_synth(args) -> int:
    from .synth import generate_document

    match = re.fullmatch(r"(\d+)\.\.(\d+)", args.coeff_range)
    if match is None:
        print(f"error: bad --coeff-range {args.coeff_range!r}, expected LO..HI", file=sys.stderr)
        return 2
    lo, hi = int(match.group(1)), int(match.group(2))
    try:
        doc = generate_document(
            screens=args.screens,
            films=args.films,
            clusters=args.clusters,
            seed=args.seed,
            coeff_range=(lo, hi),
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(doc, indent=2))
    return 0


def cmd_verify_decomposition(args) -> int:
    instance = load_instance(args.instance)
    report = verify_decomposition(instance)

    split = report.per_cluster
    for cluster_id, cluster_report in split.per_cluster.items():
        if cluster_report.status == "Optimal":
            print(f"cluster {cluster_id}: Optimal, objective {_fmt_objective(cluster_report.objective)}")
        else:
            print(f"cluster {cluster_id}: Infeasible")
    if split.overall_status == "Optimal":
        print(f"sum of cluster optima: {_fmt_objective(split.combined_objective)}")
        print(f"joint model optimum: {_fmt_objective(report.joint_objective)}")
        print("decomposition verified: joint optimum equals the sum of cluster optima")
        return 0
    print("decomposition verified: joint model and clusters agree on infeasibility")
    for cluster_id, cluster_report in split.per_cluster.items():
        if cluster_report.status == "Infeasible":
            print(f"cluster {cluster_id}: {cluster_report.diagnostic}", file=sys.stderr)
    return 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cinestagger",
        description="Exact film-to-screen scheduler with staggered showtimes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check an instance file, listing violations")
    p.add_argument("instance", help="instance JSON file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("solve", help="solve an instance and print the schedule")
    p.add_argument("instance", help="instance JSON file")
    p.add_argument("--format", choices=["table", "csv", "json"], default="table")
    p.add_argument("--export-lp", metavar="PATH", help="also write the model as LP text")
    p.add_argument(
        "--seed", type=int, default=None,
        help="accepted for interface compatibility; solving is deterministic",
    )
    p.add_argument("--parallel", action="store_true", help="solve clusters concurrently")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser(
        "generate-configs",
        help="fill in showtime configurations from runtimes and the operating window",
    )
    p.add_argument("instance", help="instance JSON file, configurations optional")
    p.add_argument("--turnover", type=int, default=0, help="minutes added per screening")
    p.set_defaults(func=cmd_generate_configs)

    p = sub.add_parser("build", help="print model statistics, optionally export LP text")
    p.add_argument("instance", help="instance JSON file")
    p.add_argument("--export-lp", metavar="PATH")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("synth", help="generate a seeded random instance")
    p.add_argument("--screens", type=int, required=True, help="screens per cluster")
    p.add_argument("--films", type=int, required=True, help="films per cluster")
    p.add_argument("--clusters", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--coeff-range", default="200..299", metavar="LO..HI")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser(
        "verify-decomposition",
        help="check that per-cluster optima sum to the joint optimum",
    )
    p.add_argument("instance", help="instance JSON file")
    p.set_defaults(func=cmd_verify_decomposition)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InstanceFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InstanceDataError as exc:
        for violation in exc.violations:
            print(str(violation), file=sys.stderr)
        return 1
    except (NoFeasibleConfigurationError, DecompositionSizeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
