"""Objectives and constraints evaluated on steady-cycle simulation results:
hover endurance, forward speed, mission hover time, frontal area, and the
five feasibility checks."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .drivetrain import CoolingSpec, MotorParams, cooling_capacity
from .dynamics import SimResult

G = 9.81
C_MOTOR_WEIGHT = 0.35    # max motor fraction of take-off weight
C_MANEUVER = 1.2         # min lift margin
SPEED_HEADROOM = 1.1     # allowed overspeed over the no-load speed


class PerformanceError(ValueError):
    pass


@dataclass(frozen=True)
class EnergyModel:
    eta_bat: float = 0.241          # battery fraction of take-off mass
    rho_ebat: float = 6.5e5         # J/kg
    eta_boost: float = 0.90
    eta_used: float = 0.85
    k_elc: float = 0.5              # electronics power, W

    def __post_init__(self):
        for frac in (self.eta_bat, self.eta_boost, self.eta_used):
            if not (0.0 < frac <= 1.0):
                raise PerformanceError("efficiency fractions must be in (0, 1]")
        if self.rho_ebat <= 0.0:
            raise PerformanceError("energy density must be positive")


@dataclass(frozen=True)
class ForwardFlightModel:
    c_d: float = 1.0            # drag coefficient
    a_lt: float = 0.004         # electronics-limited lateral area, m^2
    m_tr: float = 0.3e-3        # gear module, m
    t_motor: float = 9.0        # motor pinion tooth count
    rho: float = 1.225

    def __post_init__(self):
        if min(self.c_d, self.a_lt, self.m_tr, self.t_motor, self.rho) <= 0.0:
            raise PerformanceError("forward-flight parameters must be positive")


@dataclass(frozen=True)
class ConstraintCheck:
    ok: bool
    margin: float   # positive = headroom, negative = violation (normalized)


@dataclass(frozen=True)
class ConstraintReport:
    motor_speed: ConstraintCheck
    motor_current: ConstraintCheck
    motor_weight_fraction: ConstraintCheck
    lift_margin: ConstraintCheck
    cooling: ConstraintCheck
    settled: bool

    @property
    def feasible(self) -> bool:
        return self.settled and all(c.ok for c in (
            self.motor_speed, self.motor_current, self.motor_weight_fraction,
            self.lift_margin, self.cooling))

    @property
    def violation(self) -> float:
        """Total normalized violation; zero iff feasible."""
        v = 0.0 if self.settled else 1.0
        for c in (self.motor_speed, self.motor_current,
                  self.motor_weight_fraction, self.lift_margin, self.cooling):
            v += max(-c.margin, 0.0)
        return v


@dataclass(frozen=True)
class ObjectiveVector:
    mbsd: float             # m
    lhd: float              # s
    miffs: float            # m/s
    aht: float | None = None  # s


def takeoff_weight(sim: SimResult) -> float:
    """Take-off weight equals the summed cycle-mean wing lifts [N]."""
    if not sim.settled:
        raise PerformanceError("simulation did not settle")
    return float(np.sum(sim.mean_lift))


def constraints(sim: SimResult, sim_max: SimResult, motor: MotorParams,
                cooling: CoolingSpec) -> ConstraintReport:
    """Five design constraints; failures are reported with margins, not raised.

    Speed, current and heat are taken from the hover operating point; the lift
    margin compares the max-amplitude run against hover.
    """
    w_max = SPEED_HEADROOM * motor.rated_voltage * motor.kv_rad
    w_peak = float(np.max(sim.max_motor_speed))
    speed = ConstraintCheck(w_peak < w_max, (w_max - w_peak) / w_max)

    i_peak = float(np.max(sim.max_current))
    current = ConstraintCheck(i_peak < motor.max_current,
                              (motor.max_current - i_peak) / motor.max_current)

    l_takeoff = float(np.sum(sim.mean_lift))
    if l_takeoff > 0.0:
        frac = 4.0 * motor.mass * G / l_takeoff
        weight = ConstraintCheck(frac < C_MOTOR_WEIGHT,
                                 (C_MOTOR_WEIGHT - frac) / C_MOTOR_WEIGHT)
    else:
        weight = ConstraintCheck(False, -1.0)

    l_max = float(np.sum(sim_max.mean_lift)) if sim_max.settled else 0.0
    if l_takeoff > 0.0:
        ratio = l_max / l_takeoff
        lift = ConstraintCheck(ratio > C_MANEUVER,
                               (ratio - C_MANEUVER) / C_MANEUVER)
    else:
        lift = ConstraintCheck(False, -1.0)

    p_hd = cooling_capacity(cooling)
    heat_peak = float(np.max(sim.mean_heat))
    cool = ConstraintCheck(heat_peak < p_hd, (p_hd - heat_peak) / p_hd)

    return ConstraintReport(motor_speed=speed, motor_current=current,
                            motor_weight_fraction=weight, lift_margin=lift,
                            cooling=cool,
                            settled=sim.settled and sim_max.settled)


def total_energy(l_takeoff: float, e: EnergyModel) -> float:
    """Battery energy from the take-off weight closure [J]."""
    m_takeoff = l_takeoff / G
    return e.rho_ebat * (e.eta_bat * m_takeoff) * e.eta_boost * e.eta_used


def hover_power(sim: SimResult, e: EnergyModel) -> float:
    return float(np.sum(sim.mean_electrical_power)) + e.k_elc


def lhd(sim: SimResult, e: EnergyModel) -> float:
    """Longest hover duration: battery energy over hover power [s]."""
    p = hover_power(sim, e)
    if p <= 0.0:
        raise PerformanceError("non-positive hover power")
    return total_energy(takeoff_weight(sim), e) / p


def miffs(sim: SimResult, sim_max: SimResult, ff: ForwardFlightModel) -> float:
    """Maximum instantaneous forward speed from the residual-thrust balance.

    The residual thrust tilts the lift vector by beta with sin(beta) =
    T_rest / L_max; drag acts on the projected lateral area A_LT * sin(beta).
    """
    l_hover = takeoff_weight(sim)
    l_max = float(np.sum(sim_max.mean_lift))
    if l_max < l_hover:
        raise PerformanceError("max lift below hover lift")
    t_rest = math.sqrt(l_max**2 - l_hover**2)
    if t_rest == 0.0:
        return 0.0
    a_front = ff.a_lt * (t_rest / l_max)
    return math.sqrt(2.0 * t_rest / (ff.c_d * ff.rho * a_front))


def front_area(c_root: float, c_tip: float, span: float, gamma_tr: float,
               ff: ForwardFlightModel) -> float:
    """Frontal area of four wings plus two drive stacks [m^2]."""
    s_wing = 0.5 * (c_root + c_tip) * span
    s_act = c_root * (gamma_tr + 1.0) * ff.m_tr * ff.t_motor
    return 4.0 * s_wing + 2.0 * s_act


def e_lhd(lhd_value: float, mbsd_value: float) -> float:
    """Hover endurance per stealth meter; infinite for perfect stealth."""
    return math.inf if mbsd_value <= 0.0 else lhd_value / mbsd_value


def e_miffs(mbsd_value: float, miffs_value: float) -> float:
    """Time to traverse the stealth distance; infinite at zero speed."""
    return math.inf if miffs_value <= 0.0 else mbsd_value / miffs_value


def aht(mbsd_value: float, miffs_value: float, sim: SimResult,
        sim_max: SimResult, e: EnergyModel) -> float:
    """Additional hover time after the circling mission's transit energy.

    The transit path is one circle at the stealth radius plus two radius
    legs, flown at top speed on max-amplitude power. A negative value means
    the mission cannot be completed on the battery.
    """
    if miffs_value <= 0.0:
        raise PerformanceError("mission needs positive forward speed")
    e_total = total_energy(takeoff_weight(sim), e)
    p_front = float(np.sum(sim_max.mean_electrical_power)) + e.k_elc
    transit = mbsd_value * (2.0 * math.pi + 2.0) / miffs_value * p_front
    return (e_total - transit) / hover_power(sim, e)
