"""Power and energy models for one solar-assisted tethered UAV base station.

Five models drive the energy balance: rotor hover power, MIMO transceiver
power, reflective-surface controller power, photovoltaic output, and the
ground-side battery with swap events. All functions are pure; power is in
watts, energy in watt-hours, temperatures in degrees Celsius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

STANDARD_GRAVITY = 9.80665  # m/s^2

# Controller draw per reflecting element, by phase-shift resolution [W].
DEFAULT_RIS_ELEMENT_POWER = {3: 0.0015, 4: 0.0045, 5: 0.006, 6: 0.0078}


class ParameterError(ValueError):
    """A physical parameter is outside its valid domain."""


@dataclass(frozen=True)
class UavAirframe:
    """Multirotor airframe hovering on a powered tether.

    total_mass is body plus payload (radio and reflective surface included,
    solar-panel mass neglected). drive_efficiency covers motor and rotor
    losses, tether_efficiency the ground-to-air power feed.
    """

    total_mass: float = 2.396       # kg
    rotor_count: int = 4
    rotor_radius: float = 0.2       # m
    air_density: float = 1.225      # kg/m^3
    drive_efficiency: float = 0.7
    tether_efficiency: float = 0.95

    def __post_init__(self):
        if self.total_mass < 0:
            raise ParameterError(f"total_mass must be >= 0, got {self.total_mass}")
        if self.rotor_count < 1:
            raise ParameterError(f"rotor_count must be >= 1, got {self.rotor_count}")
        if self.rotor_radius <= 0:
            raise ParameterError(f"rotor_radius must be > 0, got {self.rotor_radius}")
        if self.air_density <= 0:
            raise ParameterError(f"air_density must be > 0, got {self.air_density}")
        for name in ("drive_efficiency", "tether_efficiency"):
            v = getattr(self, name)
            if not 0 < v <= 1:
                raise ParameterError(f"{name} must be in (0, 1], got {v}")


@dataclass(frozen=True)
class MimoSpec:
    """Massive-MIMO transceiver power parameters.

    Power when active: fixed_power + antenna_count * per_antenna_circuit_power
    + served_users * per_user_processing_power + radiated / pa_efficiency.
    When the cell is switched off only sleep_power remains.
    """

    antenna_count: int = 64
    carrier_freq_mhz: float = 3500.0
    fixed_power: float = 20.0               # W
    per_antenna_circuit_power: float = 1.5  # W
    per_user_processing_power: float = 0.3  # W
    pa_efficiency: float = 0.5
    max_tx_power_dbm: float = 40.0
    sleep_power: float = 5.0                # W

    def __post_init__(self):
        if self.antenna_count < 1:
            raise ParameterError(f"antenna_count must be >= 1, got {self.antenna_count}")
        for name in ("fixed_power", "per_antenna_circuit_power",
                     "per_user_processing_power", "sleep_power"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be >= 0")
        if not 0 < self.pa_efficiency <= 1:
            raise ParameterError(f"pa_efficiency must be in (0, 1], got {self.pa_efficiency}")


@dataclass(frozen=True)
class RisSpec:
    """Passive reflective surface: element count and phase resolution."""

    element_count: int = 16
    phase_bits: int = 6
    per_element_power: dict[int, float] = field(
        default_factory=lambda: dict(DEFAULT_RIS_ELEMENT_POWER))

    def __post_init__(self):
        if self.element_count < 0:
            raise ParameterError(f"element_count must be >= 0, got {self.element_count}")
        if self.phase_bits not in self.per_element_power:
            raise ParameterError(
                f"phase_bits {self.phase_bits} not in per-element power table "
                f"{sorted(self.per_element_power)}")


@dataclass(frozen=True)
class PvSpec:
    """Thin-film solar panel: rated output with derating and a linear
    temperature coefficient around standard test conditions."""

    rated_power: float = 120.0      # W at STC
    derating_factor: float = 0.9
    temp_coeff: float = -0.0035     # 1/degC
    noct: float = 45.0              # degC, nominal operating cell temperature
    stc_irradiance: float = 1000.0  # W/m^2
    stc_cell_temp: float = 25.0     # degC

    def __post_init__(self):
        if self.rated_power < 0:
            raise ParameterError(f"rated_power must be >= 0, got {self.rated_power}")
        if not 0 < self.derating_factor <= 1:
            raise ParameterError(f"derating_factor must be in (0, 1], got {self.derating_factor}")
        if self.temp_coeff > 0:
            raise ParameterError(f"temp_coeff must be <= 0, got {self.temp_coeff}")
        if self.noct <= 20:
            raise ParameterError(f"noct must be > 20 degC, got {self.noct}")


@dataclass(frozen=True)
class BatterySpec:
    """Swappable ground-side battery pack.

    A fixed flight_reserve fraction of the nameplate capacity pays for the
    ferry flights of every fresh pack, so the usable window is
    capacity * (1 - flight_reserve).
    """

    capacity_wh: float = 763.0
    charge_efficiency: float = 0.95
    flight_reserve: float = 0.05

    def __post_init__(self):
        if self.capacity_wh <= 0:
            raise ParameterError(f"capacity_wh must be > 0, got {self.capacity_wh}")
        if not 0 < self.charge_efficiency <= 1:
            raise ParameterError(
                f"charge_efficiency must be in (0, 1], got {self.charge_efficiency}")
        if not 0 < self.flight_reserve < 1:
            raise ParameterError(
                f"flight_reserve must be in (0, 1), got {self.flight_reserve}")

    @property
    def usable_capacity_wh(self) -> float:
        return self.capacity_wh * (1.0 - self.flight_reserve)


@dataclass(frozen=True)
class BatteryState:
    """State of charge [Wh] and the number of swaps performed so far."""

    soc_wh: float
    swap_count: int = 0


@dataclass(frozen=True)
class BatteryFlows:
    """Energy bookkeeping for one step [Wh].

    pv_used is the part of the step's demand met by freshly accepted solar
    charge; drawn_from_battery covers the rest, so
    demand == drawn_from_battery + pv_used holds exactly every step.
    pv_wasted is accepted-charge overflow, counted after charge efficiency.
    """

    drawn_from_battery_wh: float
    pv_used_wh: float
    pv_wasted_wh: float


def fresh_battery(spec: BatterySpec, swap_count: int = 0) -> BatteryState:
    """A newly ferried pack: full usable window, reserve already deducted."""
    return BatteryState(soc_wh=spec.usable_capacity_wh, swap_count=swap_count)


def uav_hover_power(airframe: UavAirframe) -> float:
    """Electrical power [W] drawn through the tether to hold a hover.

    Ideal induced power from momentum theory,
    P = (m g)^1.5 / sqrt(2 rho A), over the total rotor disk area
    A = n pi r^2, divided by drive and tether efficiencies. The deployment
    is stationary, so this is constant for a whole run.
    """
    disk_area = airframe.rotor_count * math.pi * airframe.rotor_radius ** 2
    if disk_area <= 0:
        raise ParameterError("rotor disk area must be positive")
    thrust = airframe.total_mass * STANDARD_GRAVITY
    ideal = thrust ** 1.5 / math.sqrt(2.0 * airframe.air_density * disk_area)
    drawn = ideal / (airframe.drive_efficiency * airframe.tether_efficiency)
    if not math.isfinite(drawn):
        raise ParameterError("hover power is not finite; check airframe parameters")
    return drawn


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def mimo_power(spec: MimoSpec, active: bool, served_users: int,
               tx_power_dbm: float) -> float:
    """Transceiver power [W] for one cell.

    Active cells pay the fixed share, circuit power per antenna, processing
    power per served user, and the radiated power scaled by amplifier
    efficiency. Inactive cells idle at sleep_power.
    """
    if not active:
        return spec.sleep_power
    if served_users < 0:
        raise ParameterError(f"served_users must be >= 0, got {served_users}")
    if tx_power_dbm > spec.max_tx_power_dbm:
        raise ParameterError(
            f"tx_power {tx_power_dbm} dBm exceeds max {spec.max_tx_power_dbm} dBm")
    return (spec.fixed_power
            + spec.antenna_count * spec.per_antenna_circuit_power
            + served_users * spec.per_user_processing_power
            + dbm_to_watts(tx_power_dbm) / spec.pa_efficiency)


def ris_power(spec: RisSpec) -> float:
    """Controller power [W] of the reflective surface: count times the
    per-element draw at the configured phase resolution."""
    if spec.element_count == 0:
        return 0.0
    return spec.element_count * spec.per_element_power[spec.phase_bits]


def cell_temperature(ambient_c: float, ghi_wm2: float, noct_c: float) -> float:
    """Panel cell temperature [degC] from ambient and irradiance via the
    NOCT linear model: T_cell = T_ambient + GHI * (NOCT - 20) / 800."""
    if ghi_wm2 < 0:
        raise ParameterError(f"ghi must be >= 0, got {ghi_wm2}")
    return ambient_c + ghi_wm2 * (noct_c - 20.0) / 800.0


def pv_power(spec: PvSpec, ghi_wm2: float, ambient_c: float) -> float:
    """Panel output [W]: rated power scaled by derating, by irradiance
    relative to STC, and by the temperature coefficient, floored at zero."""
    if ghi_wm2 < 0:
        raise ParameterError(f"ghi must be >= 0, got {ghi_wm2}")
    t_cell = cell_temperature(ambient_c, ghi_wm2, spec.noct)
    out = (spec.rated_power * spec.derating_factor
           * (ghi_wm2 / spec.stc_irradiance)
           * (1.0 + spec.temp_coeff * (t_cell - spec.stc_cell_temp)))
    return max(0.0, out)


def battery_step(state: BatteryState, spec: BatterySpec, demand_wh: float,
                 harvested_wh: float) -> tuple[BatteryState, BatteryFlows]:
    """Advance the battery by one step: charge first, then discharge.

    Order within the step:
      1. accept harvested energy: accepted = min(harvested * charge_eff,
         usable_cap - soc); the post-efficiency remainder is pv_wasted;
      2. subtract the demand;
      3. every time the state of charge goes negative, swap in a fresh pack
         (swap_count += 1, soc += usable_cap); the deficit carries over.

    pv_used is the slice of the accepted charge that offsets this step's
    demand; any surplus accepted charge stays in the pack as SOC gain.
    """
    if demand_wh < 0:
        raise ParameterError(f"demand must be >= 0, got {demand_wh}")
    if harvested_wh < 0:
        raise ParameterError(f"harvested must be >= 0, got {harvested_wh}")
    cap = spec.usable_capacity_wh
    if demand_wh > cap:
        raise ParameterError(
            f"step demand {demand_wh} Wh exceeds usable capacity {cap} Wh; "
            "one battery cannot survive one step")
    if state.soc_wh > cap + 1e-12:
        raise ParameterError(f"soc {state.soc_wh} above usable capacity {cap}")

    accepted = min(harvested_wh * spec.charge_efficiency, cap - state.soc_wh)
    pv_wasted = harvested_wh * spec.charge_efficiency - accepted
    pv_used = min(accepted, demand_wh)
    drawn = demand_wh - pv_used

    soc = state.soc_wh + accepted - demand_wh
    swaps = state.swap_count
    while soc < 0:
        swaps += 1
        soc += cap

    new_state = BatteryState(soc_wh=soc, swap_count=swaps)
    flows = BatteryFlows(drawn_from_battery_wh=drawn, pv_used_wh=pv_used,
                         pv_wasted_wh=pv_wasted)
    return new_state, flows


def reset_soc(state: BatteryState, spec: BatterySpec) -> BatteryState:
    """Start a new day on a full pack, keeping the cumulative swap count."""
    return replace(state, soc_wh=spec.usable_capacity_wh)
