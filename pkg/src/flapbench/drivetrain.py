"""Drive-train building blocks: resonant torsion spring, viscoelastic membrane
restraint, motor database with first-order electrics, and cooling capacity."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path


class DrivetrainError(ValueError):
    pass


@dataclass(frozen=True)
class MotorParams:
    id: int
    name: str
    rated_voltage: float    # V
    max_current: float      # A
    i0: float               # no-load current, A
    r0: float               # winding resistance, ohm
    kv: float               # rpm/V
    mass: float             # kg
    rotor_inertia: float    # kg m^2

    @property
    def kv_rad(self) -> float:
        # rad/s per volt; the (60/2pi)*Kv form printed alongside the torque
        # constant is inconsistent with Kt = 30/(pi Kv) in SI and is treated
        # as an erratum
        return self.kv * 2.0 * math.pi / 60.0

    @property
    def kt(self) -> float:
        # torque constant, N m / A
        return 30.0 / (math.pi * self.kv)


@dataclass(frozen=True)
class SpringSpec:
    k_a: float  # torsional stiffness, N m / rad

    def __post_init__(self):
        if self.k_a <= 0.0:
            raise DrivetrainError("spring stiffness must be positive")


@dataclass(frozen=True)
class MembraneParams:
    c_c1: float = 1e-6          # tension-gate output scale, N m
    c_scale1: float = 1.0       # gate rate-product scale
    c_move: float = 5.0         # gate offset
    k1: float = 1.0             # angle scale of the stiffness shape
    sigma: float = 0.4          # width of the stiffness shape
    mu: float = 0.0             # center of the stiffness shape
    theta_tat: float = 0.06     # normalization angle (k_ws = 1 there), rad
    exponent: float = 2.0       # shape exponent; the printed 8 is read as 2

    def __post_init__(self):
        if self.sigma <= 0.0 or self.k1 <= 0.0:
            raise DrivetrainError("sigma and k1 must be positive")


@dataclass(frozen=True)
class CoolingSpec:
    rth_stand: float = 9.88     # reference thermal resistance, K/W
    s_stand: float = 3.66e-4    # reference dissipation area, m^2
    s_actual: float = 3.66e-4   # actual dissipation area, m^2
    delta_t: float = 40.0       # allowed temperature rise, K

    def __post_init__(self):
        if min(self.rth_stand, self.s_stand, self.s_actual, self.delta_t) <= 0.0:
            raise DrivetrainError("cooling parameters must be positive")


def _default_rotor_inertia(mass_kg: float) -> float:
    # thin-shell rotor estimate at 2.5 mm radius; the table omits rotor inertia
    return 0.4 * mass_kg * (2.5e-3) ** 2


# printed order of the motor table: (name, V, Imax A, I0 mA, R0 ohm, Kv rpm/V, mass g)
_MOTOR_ROWS = [
    ("ECX-Prime-235-6V", 6, 2.04, 83.8, 2.94, 6310, 3),
    ("ECX-Prime-235-12V", 12, 1.02, 41.9, 11.7, 3150, 3),
    ("CN-174-3V", 3, 3.92, 149, 0.766, 25800, 3),
    ("CN-174-6V", 6, 1.72, 58.8, 3.49, 10800, 3),
    ("CN-174-12V", 12, 0.97, 29.8, 12.4, 5460, 3),
    ("CN-173-6V", 6, 0.688, 46.5, 8.72, 7900, 3),
    ("CN-173-12V", 12, 0.188, 16.2, 63.8, 3040, 3),
    ("CN-176-6V", 6, 3.34, 128, 1.8, 6160, 6),
    ("CN-176-9V", 9, 1.7, 63.4, 5.3, 3360, 6),
    ("CN-176-12V", 12, 1.43, 50.9, 8.38, 2640, 6),
    ("CN-175-6", 6, 1.98, 105, 3.02, 6230, 6),
    ("CN-175-12", 12, 1.54, 69, 7.8, 3780, 6),
    ("CN-175-24", 24, 0.755, 33.2, 31.8, 1840, 6),
    ("CN_0620_B_FMM-6V", 6, 0.79788, 56, 8.8, 8761, 2.5),
    ("CN_0620_B_FMM-12V", 12, 1.55382, 18, 60.2, 3386, 2.5),
    ("CN_0824_B_FMM-6V", 6, 5.248, 55, 2.91, 5968, 5.2),
    ("CN_0824_B_FMM-12V", 12, 10.02, 31, 10.7, 3183, 5.2),
    ("otecs0921w-3", 3, 0.925, 45, 3.24, 5606, 6.5),
    ("otecs0921w-6", 6, 1.99, 69, 3.02, 6182, 6.5),
    ("otecs0921w-12", 12, 1.685, 75, 7.12, 3663, 6.5),
    ("otecs0921w-24", 24, 0.759, 22, 31.6, 1830, 6.5),
]

MOTOR_DATABASE = tuple(
    MotorParams(id=i, name=n, rated_voltage=float(v), max_current=float(imax),
                i0=float(i0_ma) * 1e-3, r0=float(r0), kv=float(kv),
                mass=float(m_g) * 1e-3,
                rotor_inertia=_default_rotor_inertia(float(m_g) * 1e-3))
    for i, (n, v, imax, i0_ma, r0, kv, m_g) in enumerate(_MOTOR_ROWS)
)


def motor_lookup(motor_id: int, database=MOTOR_DATABASE) -> MotorParams:
    """Row of the motor database; optimizers treat out-of-range ids as infeasible."""
    if not (0 <= motor_id < len(database)):
        raise DrivetrainError(f"motor id {motor_id} outside 0..{len(database) - 1}")
    return database[motor_id]


def load_motor_csv(path: str | Path) -> tuple:
    """Motor database override from CSV with header
    id,name,voltage_V,imax_A,i0_mA,r0_ohm,kv_rpm_per_V,mass_g,rotor_inertia_kgm2
    (empty rotor inertia falls back to the thin-shell estimate)."""
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            mass = float(rec["mass_g"]) * 1e-3
            ri = rec.get("rotor_inertia_kgm2", "")
            rows.append(MotorParams(
                id=int(rec["id"]), name=rec["name"],
                rated_voltage=float(rec["voltage_V"]),
                max_current=float(rec["imax_A"]),
                i0=float(rec["i0_mA"]) * 1e-3, r0=float(rec["r0_ohm"]),
                kv=float(rec["kv_rpm_per_V"]), mass=mass,
                rotor_inertia=float(ri) if ri else _default_rotor_inertia(mass)))
    rows.sort(key=lambda m: m.id)
    return tuple(rows)


def spring_for_frequency(f: float, j_gear: float, j_wing: float,
                         j_rotor: float, gamma: float) -> SpringSpec:
    """Torsion spring sized so the drive resonates at the flapping frequency:
    k = 4 pi^2 f^2 (J_gear + J_wing + gamma^2 J_rotor)."""
    if f <= 0.0:
        raise DrivetrainError("frequency must be positive")
    if min(j_gear, j_wing, j_rotor) < 0.0:
        raise DrivetrainError("inertias must be non-negative")
    j_total = j_gear + j_wing + gamma * gamma * j_rotor
    return SpringSpec(k_a=4.0 * math.pi**2 * f * f * j_total)


def membrane_stiffness_shape(theta: float, p: MembraneParams) -> float:
    """Dimensionless k_ws(theta)/k_ws(theta_tat): ~0 while the membrane is
    slack, rising smoothly as the pitch angle tensions it."""
    n0 = 1.0 / (p.sigma * math.sqrt(2.0 * math.pi))

    def g(v):
        arg = min(abs((v - p.mu) / p.sigma) ** p.exponent, 50.0)
        return (p.k1 - n0 * math.exp(-0.5 * arg)) / p.k1

    ref = g(p.k1 * p.theta_tat) ** 2 - g(0.0) ** 2
    return (g(p.k1 * theta) ** 2 - g(0.0) ** 2) / ref


def membrane_torque(theta: float, theta_dot: float, phi_dot: float,
                    p: MembraneParams) -> float:
    """Viscoelastic restraint torque magnitude K*theta + C*theta_dot, with both
    coefficients gated by the tension condition on the rate product."""
    c_tens = p.c_scale1 * (theta_dot * phi_dot) - p.c_move
    gate = p.c_c1 / (1.0 + math.exp(-min(c_tens * c_tens, 50.0)))
    return gate * membrane_stiffness_shape(theta, p) * theta + gate * theta_dot


def motor_electrical(w_wing: float, t_wing: float, gamma: float,
                     eta_tr: float, m: MotorParams) -> dict:
    """First-order motor model through the transmission.

    Negative power indicates regeneration and is reported as-is.
    """
    if not (0.0 < eta_tr <= 1.0):
        raise DrivetrainError("transmission efficiency must be in (0, 1]")
    wm = w_wing * gamma
    tm = t_wing / (gamma * eta_tr)
    im = m.i0 + tm / m.kt
    um = m.r0 * im + wm / m.kv_rad
    return {"wm": wm, "tm": tm, "um": um, "im": im, "pm": um * im}


def cooling_capacity(c: CoolingSpec) -> float:
    """Heat the drive can reject: delta_T / (Rth_stand * S_stand / S_actual)."""
    return c.delta_t * c.s_actual / (c.rth_stand * c.s_stand)


def motor_surface_area(mass_kg: float, density: float = 6000.0) -> float:
    """Cylinder surface estimate from motor mass, aspect ratio 2:1."""
    radius = (mass_kg / (4.0 * math.pi * density)) ** (1.0 / 3.0)
    return 10.0 * math.pi * radius**2
