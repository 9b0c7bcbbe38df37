"""Link-budget primitives: log-distance path loss, SNR, capped spectral
efficiency, and resource-block sizing for fixed-rate users."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

THERMAL_NOISE_DBM_PER_HZ = -174.0


@dataclass(frozen=True)
class Position:
    x: float
    y: float
    z: float = 0.0

    def distance_to(self, other: "Position") -> float:
        return math.sqrt((self.x - other.x) ** 2
                         + (self.y - other.y) ** 2
                         + (self.z - other.z) ** 2)


@dataclass(frozen=True)
class RadioParams:
    """Propagation and numerology defaults for the 3500 MHz carrier.

    reference_loss_at_1m_db is the free-space loss at 1 m for that carrier;
    beyond 1 m the loss grows with 10 * pathloss_exponent * log10(d).
    power_levels_dbm is the discrete transmit-power ladder the network
    designer may pick from, highest entry equal to the transceiver maximum.
    """

    pathloss_exponent: float = 2.9
    reference_loss_at_1m_db: float = 43.3
    bandwidth_mhz: float = 100.0
    prb_bandwidth_khz: float = 360.0
    total_prbs: int = 273
    noise_figure_db: float = 9.0
    antenna_gain_dbi: float = 8.0
    min_snr_db: float = -6.0
    se_cap: float = 7.8               # bit/s/Hz
    power_levels_dbm: tuple[float, ...] = (28.0, 34.0, 40.0)
    shadowing_sigma_db: float = 0.0   # 0 disables the optional log-normal term

    def __post_init__(self):
        if self.pathloss_exponent < 2:
            raise ValueError(f"pathloss_exponent must be >= 2, got {self.pathloss_exponent}")
        if self.total_prbs < 1:
            raise ValueError(f"total_prbs must be >= 1, got {self.total_prbs}")
        if len(self.power_levels_dbm) < 1:
            raise ValueError("power_levels_dbm must not be empty")
        if list(self.power_levels_dbm) != sorted(set(self.power_levels_dbm)):
            raise ValueError(f"power_levels_dbm must be strictly increasing, "
                             f"got {self.power_levels_dbm}")

    @property
    def max_power_dbm(self) -> float:
        return self.power_levels_dbm[-1]

    @property
    def noise_power_dbm(self) -> float:
        bandwidth_hz = self.bandwidth_mhz * 1e6
        return (THERMAL_NOISE_DBM_PER_HZ + 10.0 * math.log10(bandwidth_hz)
                + self.noise_figure_db)


def path_loss(a: Position, b: Position, params: RadioParams,
              shadowing_db: float = 0.0) -> float:
    """Log-distance path loss [dB]; distances below 1 m clamp to the
    reference loss. Symmetric in its endpoints."""
    d = max(1.0, a.distance_to(b))
    return (params.reference_loss_at_1m_db
            + 10.0 * params.pathloss_exponent * math.log10(d)
            + shadowing_db)


def snr(tx_power_dbm: float, pl_db: float, params: RadioParams) -> float:
    """Received SNR [dB] over the full bandwidth."""
    return (tx_power_dbm + params.antenna_gain_dbi - pl_db
            - params.noise_power_dbm)


def spectral_efficiency(snr_db: float, params: RadioParams) -> float:
    """Shannon spectral efficiency [bit/s/Hz], capped at the modulation
    ceiling se_cap. Positive for any finite SNR."""
    return min(params.se_cap, math.log2(1.0 + 10.0 ** (snr_db / 10.0)))


def required_prbs(rate_mbps: float, se: float,
                  params: RadioParams) -> Optional[int]:
    """Resource blocks needed to carry rate_mbps at spectral efficiency se.

    Returns None when se <= 0 (the link cannot carry any rate), which
    callers must treat as infeasible rather than as a block count.
    """
    if rate_mbps < 0:
        raise ValueError(f"rate must be >= 0, got {rate_mbps}")
    if rate_mbps == 0:
        return 0
    if se <= 0:
        return None
    prb_rate_bps = se * params.prb_bandwidth_khz * 1e3
    return math.ceil(rate_mbps * 1e6 / prb_rate_bps)


def link_feasible(node_pos: Position, user_pos: Position, tx_power_dbm: float,
                  params: RadioParams, dl_rate_mbps: float,
                  ul_rate_mbps: float) -> tuple[bool, int]:
    """Check whether one node can serve one user at the given power.

    Feasible iff the SNR clears min_snr_db (boundary inclusive) and the
    downlink plus uplink block demand fits within one cell's total_prbs.
    Returns (feasible, total blocks needed); the block count is 0 whenever
    it cannot be computed.
    """
    pl = path_loss(node_pos, user_pos, params)
    snr_db = snr(tx_power_dbm, pl, params)
    se = spectral_efficiency(snr_db, params)
    prbs_dl = required_prbs(dl_rate_mbps, se, params)
    prbs_ul = required_prbs(ul_rate_mbps, se, params)
    if prbs_dl is None or prbs_ul is None:
        return False, 0
    total = prbs_dl + prbs_ul
    feasible = snr_db >= params.min_snr_db and total <= params.total_prbs
    return feasible, total


def link_prb_split(node_pos: Position, user_pos: Position, tx_power_dbm: float,
                   params: RadioParams, dl_rate_mbps: float,
                   ul_rate_mbps: float) -> tuple[Optional[int], Optional[int]]:
    """Downlink and uplink block demands separately (None when impossible)."""
    pl = path_loss(node_pos, user_pos, params)
    se = spectral_efficiency(snr(tx_power_dbm, pl, params), params)
    return (required_prbs(dl_rate_mbps, se, params),
            required_prbs(ul_rate_mbps, se, params))
