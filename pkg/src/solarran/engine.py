"""Minute-stepped energy simulation and study metrics.

One run covers the four configured days back to back (5760 one-minute
steps by default): users are placed once from the run seed, the network is
designed once, and every step accounts each station's consumption,
harvest, battery draw, and swap events. Days are energetically independent;
the pack starts each day full while the swap counter keeps accumulating.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .design import NetworkConfig, greedy_design
from .energy import (BatteryState, battery_step, fresh_battery, mimo_power,
                     pv_power, reset_soc, ris_power, uav_hover_power)
from .scenario import (MINUTES_PER_DAY, AccessNode, Scenario, WeatherSample,
                       WeatherError, place_users)

LEDGER_COLUMNS = ("t", "node_id", "consumed_wh", "hover_wh", "mimo_wh",
                  "ris_wh", "harvested_wh", "pv_used_wh", "pv_wasted_wh",
                  "drawn_wh", "soc_wh", "swaps")


class SimulationError(RuntimeError):
    """A step failed; the message carries the minute and node involved."""


@dataclass(frozen=True)
class StepLedgerEntry:
    """Energy flows of one node over one step, all in Wh."""

    node_id: int
    t: int
    consumed_wh: float
    hover_wh: float
    mimo_wh: float
    ris_wh: float
    harvested_wh: float
    pv_used_wh: float
    pv_wasted_wh: float
    drawn_from_battery_wh: float
    soc_after_wh: float
    swaps_so_far: int


@dataclass
class RunResult:
    """Per-day, per-node energy totals of one simulation run.

    Array shapes are (n_days, n_nodes); the full per-step ledger is kept as
    column arrays (row order: minute-major, then node id).
    """

    seed: int
    with_res: bool
    network: NetworkConfig
    dates: tuple
    node_ids: tuple[int, ...]
    consumed_wh: np.ndarray
    harvested_wh: np.ndarray
    pv_used_wh: np.ndarray
    pv_wasted_wh: np.ndarray
    drawn_wh: np.ndarray
    swaps: np.ndarray
    peak_pv_w: np.ndarray
    ledger: dict[str, np.ndarray] = field(repr=False)


def step(node: AccessNode, state: BatteryState, active: bool,
         served_users: int, tx_power_dbm: float, weather: WeatherSample,
         with_res: bool, t: int,
         dt_minutes: float = 1.0) -> tuple[BatteryState, StepLedgerEntry]:
    """Advance one node by one step of dt_minutes.

    Consumption is hover plus transceiver plus reflective-surface power for
    the step duration; harvest is the panel output over the same window
    when the renewable feed is enabled, zero otherwise.
    """
    hours = dt_minutes / 60.0
    hover_wh = uav_hover_power(node.airframe) * hours
    mimo_wh = mimo_power(node.mimo, active, served_users, tx_power_dbm) * hours
    ris_wh = ris_power(node.ris) * hours
    consumed = hover_wh + mimo_wh + ris_wh
    if with_res:
        harvested = pv_power(node.pv, weather.ghi_wm2, weather.temp_c) * hours
    else:
        harvested = 0.0
    new_state, flows = battery_step(state, node.battery, consumed, harvested)
    entry = StepLedgerEntry(
        node_id=node.node_id, t=t, consumed_wh=consumed, hover_wh=hover_wh,
        mimo_wh=mimo_wh, ris_wh=ris_wh, harvested_wh=harvested,
        pv_used_wh=flows.pv_used_wh, pv_wasted_wh=flows.pv_wasted_wh,
        drawn_from_battery_wh=flows.drawn_from_battery_wh,
        soc_after_wh=new_state.soc_wh, swaps_so_far=new_state.swap_count)
    return new_state, entry


def _validate_series(series: Sequence[WeatherSample], n_days: int) -> None:
    expected = n_days * MINUTES_PER_DAY
    indices = [s.minute_index for s in series]
    if indices != list(range(expected)):
        missing = sorted(set(range(expected)) - set(indices))
        raise WeatherError(
            f"weather series must cover minutes 0..{expected - 1}; "
            f"missing {missing[:10]}{'...' if len(missing) > 10 else ''}")


def run_simulation(scenario: Scenario, weather_series: Sequence[WeatherSample],
                   with_res: bool, seed: int,
                   network: Optional[NetworkConfig] = None) -> RunResult:
    """Execute one full run: place users, design the network, step the days.

    Deterministic given (scenario, weather, with_res, seed). A pre-built
    NetworkConfig may be passed to share one design between the paired
    with/without-renewables runs.
    """
    n_days = len(scenario.dates)
    _validate_series(weather_series, n_days)

    if network is None:
        users = place_users(scenario, seed)
        network = greedy_design(scenario.nodes, users, scenario.radio,
                                scenario.dl_rate_mbps, scenario.ul_rate_mbps)
    served: dict[int, int] = {}
    for nid, _, _ in network.assignment.users.values():
        served[nid] = served.get(nid, 0) + 1
    cell_by_node = {c.node_id: c for c in network.cells}

    nodes = sorted(scenario.nodes, key=lambda n: n.node_id)
    node_ids = tuple(n.node_id for n in nodes)
    n_nodes = len(nodes)

    consumed = np.zeros((n_days, n_nodes))
    harvested = np.zeros((n_days, n_nodes))
    pv_used = np.zeros((n_days, n_nodes))
    pv_wasted = np.zeros((n_days, n_nodes))
    drawn = np.zeros((n_days, n_nodes))
    swaps = np.zeros((n_days, n_nodes), dtype=np.int64)
    peak_pv = np.zeros((n_days, n_nodes))
    columns: dict[str, list] = {name: [] for name in LEDGER_COLUMNS}

    states = [fresh_battery(n.battery) for n in nodes]
    for day in range(n_days):
        if day > 0:
            states = [reset_soc(s, n.battery) for s, n in zip(states, nodes)]
        swaps_at_day_start = [s.swap_count for s in states]
        for minute in range(MINUTES_PER_DAY):
            t = day * MINUTES_PER_DAY + minute
            weather = weather_series[t]
            for i, node in enumerate(nodes):
                cell = cell_by_node[node.node_id]
                try:
                    states[i], e = step(node, states[i], cell.active,
                                        served.get(node.node_id, 0),
                                        cell.tx_power_dbm if cell.active else 0.0,
                                        weather, with_res, t)
                except ValueError as exc:
                    raise SimulationError(
                        f"step failed at t={t}, node_id={node.node_id}: {exc}"
                    ) from exc
                consumed[day, i] += e.consumed_wh
                harvested[day, i] += e.harvested_wh
                pv_used[day, i] += e.pv_used_wh
                pv_wasted[day, i] += e.pv_wasted_wh
                drawn[day, i] += e.drawn_from_battery_wh
                pv_w = e.harvested_wh * 60.0
                if pv_w > peak_pv[day, i]:
                    peak_pv[day, i] = pv_w
                columns["t"].append(e.t)
                columns["node_id"].append(e.node_id)
                columns["consumed_wh"].append(e.consumed_wh)
                columns["hover_wh"].append(e.hover_wh)
                columns["mimo_wh"].append(e.mimo_wh)
                columns["ris_wh"].append(e.ris_wh)
                columns["harvested_wh"].append(e.harvested_wh)
                columns["pv_used_wh"].append(e.pv_used_wh)
                columns["pv_wasted_wh"].append(e.pv_wasted_wh)
                columns["drawn_wh"].append(e.drawn_from_battery_wh)
                columns["soc_wh"].append(e.soc_after_wh)
                columns["swaps"].append(e.swaps_so_far)
        for i in range(n_nodes):
            swaps[day, i] = states[i].swap_count - swaps_at_day_start[i]

    ledger = {name: np.asarray(vals) for name, vals in columns.items()}
    return RunResult(seed=seed, with_res=with_res, network=network,
                     dates=tuple(scenario.dates), node_ids=node_ids,
                     consumed_wh=consumed, harvested_wh=harvested,
                     pv_used_wh=pv_used, pv_wasted_wh=pv_wasted,
                     drawn_wh=drawn, swaps=swaps, peak_pv_w=peak_pv,
                     ledger=ledger)


def run_pair(scenario: Scenario, weather_series: Sequence[WeatherSample],
             seed: int) -> tuple[RunResult, RunResult]:
    """One without-renewables and one with-renewables run sharing the same
    seed, user placement, network design, and weather."""
    users = place_users(scenario, seed)
    network = greedy_design(scenario.nodes, users, scenario.radio,
                            scenario.dl_rate_mbps, scenario.ul_rate_mbps)
    no_res = run_simulation(scenario, weather_series, False, seed, network=network)
    with_res = run_simulation(scenario, weather_series, True, seed, network=network)
    return no_res, with_res


@dataclass(frozen=True)
class SeasonStats:
    total_harvest_wh: float
    peak_harvest_w: float
    arec_percent: float
    anuc_no_res: float
    anuc_with_res: float

    def to_dict(self) -> dict:
        return {"total_harvest_wh": self.total_harvest_wh,
                "peak_harvest_w": self.peak_harvest_w,
                "arec_percent": self.arec_percent,
                "anuc_no_res": self.anuc_no_res,
                "anuc_with_res": self.anuc_with_res}


@dataclass(frozen=True)
class StudyMetrics:
    """The study's headline numbers.

    total_harvest_wh: harvested energy per station per day, averaged over
    runs and stations. peak_harvest_w: highest instantaneous panel output.
    arec_percent: share of consumption offset by harvested energy,
    100 * sum(pv_used) / sum(consumed), averaged over runs.
    anuc_*: battery swaps per station per day, averaged over runs and
    stations, without and with the solar feed. ``mean`` is the arithmetic
    mean of the four season rows.
    """

    season_names: tuple[str, ...]
    seasons: dict[str, SeasonStats]
    mean: SeasonStats
    per_run: list[dict]

    def to_dict(self) -> dict:
        return {"season_names": list(self.season_names),
                "seasons": {name: s.to_dict() for name, s in self.seasons.items()},
                "mean": self.mean.to_dict(),
                "per_run": self.per_run}


def compute_metrics(pairs: Sequence[tuple[RunResult, RunResult]],
                    season_names: Sequence[str] = ("spring", "summer",
                                                   "autumn", "winter")
                    ) -> StudyMetrics:
    """Aggregate paired runs into per-season and mean statistics.

    Each pair must hold (without-renewables, with-renewables) runs sharing
    the same seed and dates; anything else is refused.
    """
    if not pairs:
        raise ValueError("no run pairs supplied")
    for no_res, with_res in pairs:
        if no_res.with_res or not with_res.with_res:
            raise ValueError("each pair must be (without-RES, with-RES)")
        if no_res.seed != with_res.seed or no_res.dates != with_res.dates:
            raise ValueError(
                f"mismatched pair: seeds {no_res.seed}/{with_res.seed}, "
                f"dates {no_res.dates}/{with_res.dates}")
        if no_res.harvested_wh.any():
            raise ValueError("without-RES member reports nonzero harvest")
    n_days = len(pairs[0][0].dates)
    if len(season_names) != n_days:
        raise ValueError(f"{len(season_names)} season names for {n_days} days")

    seasons: dict[str, SeasonStats] = {}
    per_run: list[dict] = [
        {"run": r, "seed": pair[0].seed, "seasons": {}}
        for r, pair in enumerate(pairs)]

    for day, name in enumerate(season_names):
        harvest_means = []
        arecs = []
        anuc_no = []
        anuc_with = []
        peak = 0.0
        for r, (no_res, with_res) in enumerate(pairs):
            harvest_means.append(float(np.mean(with_res.harvested_wh[day])))
            consumed = float(np.sum(with_res.consumed_wh[day]))
            used = float(np.sum(with_res.pv_used_wh[day]))
            arec = 100.0 * used / consumed if consumed > 0 else 0.0
            arecs.append(arec)
            anuc_no.append(float(np.mean(no_res.swaps[day])))
            anuc_with.append(float(np.mean(with_res.swaps[day])))
            peak = max(peak, float(np.max(with_res.peak_pv_w[day])))
            per_run[r]["seasons"][name] = {
                "consumed_wh": consumed,
                "harvested_wh": float(np.sum(with_res.harvested_wh[day])),
                "pv_used_wh": used,
                "pv_wasted_wh": float(np.sum(with_res.pv_wasted_wh[day])),
                "arec_percent": arec,
                "anuc_no_res": float(np.mean(no_res.swaps[day])),
                "anuc_with_res": float(np.mean(with_res.swaps[day])),
            }
        seasons[name] = SeasonStats(
            total_harvest_wh=float(np.mean(harvest_means)),
            peak_harvest_w=peak,
            arec_percent=float(np.mean(arecs)),
            anuc_no_res=float(np.mean(anuc_no)),
            anuc_with_res=float(np.mean(anuc_with)))

    mean = SeasonStats(
        total_harvest_wh=float(np.mean([s.total_harvest_wh for s in seasons.values()])),
        peak_harvest_w=float(np.mean([s.peak_harvest_w for s in seasons.values()])),
        arec_percent=float(np.mean([s.arec_percent for s in seasons.values()])),
        anuc_no_res=float(np.mean([s.anuc_no_res for s in seasons.values()])),
        anuc_with_res=float(np.mean([s.anuc_with_res for s in seasons.values()])))
    return StudyMetrics(season_names=tuple(season_names), seasons=seasons,
                        mean=mean, per_run=per_run)


def verify_conservation(result: RunResult, usable_cap_wh: Optional[float] = None,
                        tol: float = 1e-9) -> None:
    """Assert the per-step and per-run accounting identities on a ledger.

    Raises AssertionError on the first violated identity: per step,
    consumed == drawn + pv_used and 0 <= soc (<= the usable capacity when
    given); per run, the swap counter never decreases and the day totals
    match the ledger.
    """
    led = result.ledger
    gap = np.abs(led["consumed_wh"] - (led["drawn_wh"] + led["pv_used_wh"]))
    assert gap.max() <= tol, f"per-step conservation violated by {gap.max()}"
    assert (led["soc_wh"] >= -tol).all(), "negative state of charge"
    if usable_cap_wh is not None:
        over = led["soc_wh"].max() - usable_cap_wh
        assert over <= tol, f"state of charge exceeds usable capacity by {over}"
    swaps = led["swaps"].reshape(-1, len(result.node_ids))
    assert (np.diff(swaps, axis=0) >= 0).all(), "swap counter decreased"
    assert abs(float(led["consumed_wh"].sum()) - float(result.consumed_wh.sum())) <= tol * len(led["consumed_wh"])
    assert abs(float(led["pv_used_wh"].sum()) - float(result.pv_used_wh.sum())) <= tol * len(led["pv_used_wh"])
