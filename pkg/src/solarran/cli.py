"""Command-line entry point.

Subcommands:
  simulate       run the paired with/without-renewables study and write
                 metrics.json, summary.csv, per-run ledgers, and per-season
                 time series into --out
  weather-synth  write one synthetic clear-sky day as a weather CSV
  oracle         cross-check the greedy design against the exhaustive
                 reference on a small instance file

Exit codes: 0 success, 1 runtime failure or failed oracle check,
2 usage or validation error.
"""

from __future__ import annotations

import argparse
import datetime
import json
import math
import sys
from pathlib import Path

from .design import (InstanceTooLargeError, brute_force_design, greedy_design,
                     MAX_ORACLE_NODES, MAX_ORACLE_USERS)
from .energy import BatterySpec, ParameterError, battery_step, fresh_battery
from .engine import compute_metrics, run_pair
from .radio import Position
from .report import (ReportBundle, format_summary_table, scenario_echo,
                     write_ledger_csv, write_metrics_json, write_summary_csv,
                     write_timeseries_csvs)
from .scenario import (ConfigError, Scenario, WeatherError, AccessNode,
                       UserTerminal, load_config, load_weather_csv,
                       scenario_from_dict, synth_study_series, synth_weather,
                       write_weather_csv, SEASONS)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="solarran",
        description="Energy-balance study of solar-assisted UAV base stations")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run the paired energy study")
    sim.add_argument("--config", required=True, help="scenario JSON file")
    sim.add_argument("--runs", type=int, default=None,
                     help="number of independent runs (default: scenario value)")
    sim.add_argument("--seed", type=int, default=42, help="master seed (u64)")
    sim.add_argument("--weather", default="synth",
                     help="'synth' or a path to a weather CSV")
    sim.add_argument("--out", required=True, help="output directory")

    synth = sub.add_parser("weather-synth", help="write one synthetic day")
    synth.add_argument("--date", required=True, help="ISO date, e.g. 2022-06-21")
    synth.add_argument("--lat", type=float, default=52.41, help="latitude [deg]")
    synth.add_argument("--cloud", type=float, default=0.7,
                       help="cloud attenuation factor in [0, 1]")
    synth.add_argument("--out", required=True, help="output CSV path")

    oracle = sub.add_parser("oracle", help="greedy vs exhaustive cross-check")
    oracle.add_argument("--instance", required=True, help="instance JSON file")
    return parser


def cmd_simulate(args: argparse.Namespace) -> int:
    written: list[Path] = []
    try:
        scenario = load_config(args.config)
        runs = scenario.run_count if args.runs is None else args.runs
        if runs < 1:
            raise ConfigError(f"--runs must be >= 1, got {runs}")
        if args.seed < 0:
            raise ConfigError(f"--seed must be >= 0, got {args.seed}")

        csv_series = None
        if args.weather != "synth":
            csv_series = load_weather_csv(args.weather, expected_dates=scenario.dates)

        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)

        seeds = [args.seed + r for r in range(runs)]
        pairs = []
        weather_by_run = []
        for run_idx, seed in enumerate(seeds):
            series = csv_series if csv_series is not None else synth_study_series(
                scenario, seed=seed)
            weather_by_run.append(series)
            no_res, with_res = run_pair(scenario, series, seed)
            pairs.append((no_res, with_res))
            for result, tag in ((no_res, "nopv"), (with_res, "pv")):
                path = out_dir / f"ledger_{run_idx}_{tag}.csv"
                write_ledger_csv(result, path)
                written.append(path)

        metrics = compute_metrics(pairs, season_names=SEASONS)
        echo = scenario_echo(scenario)
        metrics_path = out_dir / "metrics.json"
        write_metrics_json(metrics, echo, seeds, metrics_path)
        written.append(metrics_path)
        summary_path = out_dir / "summary.csv"
        write_summary_csv(metrics, summary_path)
        written.append(summary_path)
        ts_paths = write_timeseries_csvs([p[1] for p in pairs], weather_by_run,
                                         SEASONS, out_dir)
        written.extend(ts_paths)

        bundle = ReportBundle(metrics=metrics, config_echo=echo, seeds=seeds,
                              metrics_path=metrics_path, summary_path=summary_path,
                              ledger_paths=[p for p in written
                                            if p.name.startswith("ledger_")],
                              timeseries_paths=ts_paths)
        print(f"{runs} run pair(s), seeds {seeds[0]}..{seeds[-1]}, "
              f"{len(scenario.nodes)} stations, {scenario.user_count} users")
        print(format_summary_table(bundle.metrics))
        print(f"outputs in {out_dir}")
        return EXIT_OK
    except (ConfigError, WeatherError, ParameterError) as exc:
        _cleanup(written)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - report and signal failure
        _cleanup(written)
        print(f"failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def _cleanup(paths: list[Path]) -> None:
    for path in paths:
        try:
            path.unlink(missing_ok=True)
        except OSError:
            pass


def cmd_weather_synth(args: argparse.Namespace) -> int:
    try:
        date = datetime.date.fromisoformat(args.date)
    except ValueError as exc:
        print(f"error: invalid --date: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not 0.0 <= args.cloud <= 1.0:
        print(f"error: --cloud must be in [0, 1], got {args.cloud}", file=sys.stderr)
        return EXIT_USAGE
    if not -90.0 <= args.lat <= 90.0:
        print(f"error: --lat must be in [-90, 90], got {args.lat}", file=sys.stderr)
        return EXIT_USAGE
    scenario = Scenario(latitude_deg=args.lat)
    samples = synth_weather(scenario, date, cloud_factor=args.cloud)
    write_weather_csv(samples, [date], args.out)
    print(f"wrote {len(samples)} samples for {date.isoformat()} to {args.out}")
    return EXIT_OK


def _load_instance(path: str) -> tuple[list[AccessNode], list[UserTerminal],
                                       Scenario]:
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    allowed = {"radio", "dl_mbps", "ul_mbps", "nodes", "users"}
    unknown = set(raw) - allowed
    if unknown:
        raise ConfigError(f"unknown instance key(s) {sorted(unknown)}")
    scenario = scenario_from_dict({
        "radio": raw.get("radio", {}),
        "users": {"count": 0,
                  "dl_mbps": raw.get("dl_mbps", 100.0),
                  "ul_mbps": raw.get("ul_mbps", 25.0)},
        "area": {"width_m": 1e9, "height_m": 1e9},
    })
    nodes = [AccessNode(node_id=int(n["id"]),
                        position=Position(float(n["x"]), float(n["y"]),
                                          float(n.get("z", 50.0))))
             for n in raw.get("nodes", [])]
    users = [UserTerminal(user_id=int(u["id"]),
                          position=Position(float(u["x"]), float(u["y"]),
                                            float(u.get("z", 1.5))))
             for u in raw.get("users", [])]
    if len({n.node_id for n in nodes}) != len(nodes):
        raise ConfigError("duplicate node ids in instance")
    if len({u.user_id for u in users}) != len(users):
        raise ConfigError("duplicate user ids in instance")
    return nodes, users, scenario


def cmd_oracle(args: argparse.Namespace) -> int:
    try:
        nodes, users, scenario = _load_instance(args.instance)
        if len(nodes) > MAX_ORACLE_NODES or len(users) > MAX_ORACLE_USERS:
            raise InstanceTooLargeError(
                f"instance has {len(nodes)} nodes / {len(users)} users; "
                f"limits are {MAX_ORACLE_NODES} / {MAX_ORACLE_USERS}")
        greedy = greedy_design(nodes, users, scenario.radio,
                               scenario.dl_rate_mbps, scenario.ul_rate_mbps)
        brute = brute_force_design(nodes, users, scenario.radio,
                                   scenario.dl_rate_mbps, scenario.ul_rate_mbps)
    except (ConfigError, InstanceTooLargeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    print(f"greedy: covered {greedy.covered_count}, "
          f"power {greedy.total_power_w:.3f} W")
    print(f"exhaustive: covered {brute.covered_count}, "
          f"power {brute.total_power_w:.3f} W")
    design_ok = (greedy.covered_count == brute.covered_count
                 and greedy.total_power_w >= brute.total_power_w - 1e-9)

    # Constant-load day against the closed-form swap count floor(E/U).
    spec = BatterySpec()
    daily_draw = 6550.0
    state = fresh_battery(spec)
    for _ in range(1440):
        state, _flows = battery_step(state, spec, daily_draw / 1440, 0.0)
    expected = math.floor(daily_draw / spec.usable_capacity_wh)
    swap_ok = state.swap_count == expected
    print(f"constant-load swaps: simulated {state.swap_count}, "
          f"closed form {expected}")

    if design_ok and swap_ok:
        print("PASS")
        return EXIT_OK
    print("FAIL")
    return EXIT_RUNTIME


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "simulate":
        return cmd_simulate(args)
    if args.command == "weather-synth":
        return cmd_weather_synth(args)
    return cmd_oracle(args)


if __name__ == "__main__":
    sys.exit(main())
