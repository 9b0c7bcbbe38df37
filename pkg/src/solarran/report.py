"""Study outputs: summary table, metrics JSON, per-run ledgers, and
plot-ready per-season time series.

summary.csv rounds to two decimals with dot separators; metrics.json and
the ledgers keep full float precision (ledger floats use repr, so sums
recomputed from disk match the in-memory accounting bit for bit).
"""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path
from typing import Sequence

import numpy as np

from .engine import LEDGER_COLUMNS, RunResult, StudyMetrics
from .scenario import MINUTES_PER_DAY, Scenario, WeatherSample

SUMMARY_HEADER = ("season,total_harvest_wh,peak_harvest_w,arec_percent,"
                  "anuc_no_res,anuc_with_res")


@dataclasses.dataclass(frozen=True)
class ReportBundle:
    """Everything one study invocation produced."""

    metrics: StudyMetrics
    config_echo: dict
    seeds: list[int]
    metrics_path: Path
    summary_path: Path
    ledger_paths: list[Path]
    timeseries_paths: list[Path]


def scenario_echo(scenario: Scenario) -> dict:
    """JSON-ready snapshot of the fully resolved scenario."""
    echo = dataclasses.asdict(scenario)
    echo["dates"] = [d.isoformat() for d in scenario.dates]
    return echo


def write_metrics_json(metrics: StudyMetrics, config_echo: dict,
                       seeds: Sequence[int], path: Path) -> None:
    payload = {
        "config": config_echo,
        "seeds": list(seeds),
        "metrics": metrics.to_dict(),
    }
    path.write_text(json.dumps(payload, indent=2, sort_keys=True, default=str)
                    + "\n", encoding="utf-8")


def write_summary_csv(metrics: StudyMetrics, path: Path) -> None:
    """Five rows (four seasons plus their mean), two decimals per cell."""
    lines = [SUMMARY_HEADER]
    for name in metrics.season_names:
        s = metrics.seasons[name]
        lines.append(f"{name},{s.total_harvest_wh:.2f},{s.peak_harvest_w:.2f},"
                     f"{s.arec_percent:.2f},{s.anuc_no_res:.2f},{s.anuc_with_res:.2f}")
    m = metrics.mean
    lines.append(f"mean,{m.total_harvest_wh:.2f},{m.peak_harvest_w:.2f},"
                 f"{m.arec_percent:.2f},{m.anuc_no_res:.2f},{m.anuc_with_res:.2f}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_ledger_csv(result: RunResult, path: Path) -> None:
    """One row per (minute, node); floats written with repr for exact
    round-tripping."""
    led = result.ledger
    n = len(led["t"])
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(LEDGER_COLUMNS) + "\n")
        for i in range(n):
            row = [str(int(led["t"][i])), str(int(led["node_id"][i]))]
            row += [repr(float(led[c][i])) for c in LEDGER_COLUMNS[2:-1]]
            row.append(str(int(led["swaps"][i])))
            fh.write(",".join(row) + "\n")


def write_timeseries_csvs(with_results: Sequence[RunResult],
                          weather_by_run: Sequence[Sequence[WeatherSample]],
                          season_names: Sequence[str],
                          out_dir: Path) -> list[Path]:
    """Per-season minute profiles averaged over runs (and stations for the
    state of charge and panel output)."""
    n_nodes = len(with_results[0].node_ids)
    n_minutes = len(weather_by_run[0])
    soc = np.zeros(n_minutes)
    pv_w = np.zeros(n_minutes)
    ghi = np.zeros(n_minutes)
    for result, weather in zip(with_results, weather_by_run):
        soc += result.ledger["soc_wh"].reshape(n_minutes, n_nodes).mean(axis=1)
        pv_w += result.ledger["harvested_wh"].reshape(n_minutes, n_nodes).mean(axis=1) * 60.0
        ghi += np.array([s.ghi_wm2 for s in weather])
    runs = len(with_results)
    soc /= runs
    pv_w /= runs
    ghi /= runs

    paths = []
    for day, name in enumerate(season_names):
        path = out_dir / f"timeseries_{name}.csv"
        lo = day * MINUTES_PER_DAY
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("minute,mean_ghi_wm2,mean_soc_wh,mean_pv_w\n")
            for m in range(MINUTES_PER_DAY):
                fh.write(f"{m},{ghi[lo + m]:.6f},{soc[lo + m]:.6f},{pv_w[lo + m]:.6f}\n")
        paths.append(path)
    return paths


def format_summary_table(metrics: StudyMetrics) -> str:
    """Console rendering of the summary rows."""
    widths = (8, 18, 15, 13, 12, 14)
    header = ("season", "harvest_total_wh", "peak_harvest_w", "arec_percent",
              "anuc_no_res", "anuc_with_res")
    lines = ["".join(h.ljust(w) for h, w in zip(header, widths))]
    rows = [(name, metrics.seasons[name]) for name in metrics.season_names]
    rows.append(("mean", metrics.mean))
    for name, s in rows:
        cells = (name, f"{s.total_harvest_wh:.2f}", f"{s.peak_harvest_w:.2f}",
                 f"{s.arec_percent:.2f}", f"{s.anuc_no_res:.2f}",
                 f"{s.anuc_with_res:.2f}")
        lines.append("".join(c.ljust(w) for c, w in zip(cells, widths)))
    return "\n".join(lines)
