"""Quasi-steady single-wing aerodynamics: translational, rotational and
added-mass loads with strip integration over the trapezoid planform.

Kinematic convention (see wing.py for the frame): the pitch angle theta is
measured from the stroke plane, theta = 0 meaning the plate lies flat in the
plane swept by the flapping motion. A strip at radius r then sees

    vx = -phi_dot * r * sin(theta)      (plate-normal component)
    vz = +phi_dot * r * cos(theta)      (chordwise component)

and the local angle of attack is the full-quadrant atan2(vx, vz), which makes
the reversed-stroke branch of the rotational sign factor reachable.

Torque bookkeeping: the pitch torque about the leading edge is force times
chordwise arm (+z arm, positive map); the flap torque is -Fx*sin(theta)*arm,
the projection of the normal force onto the flap tangent, which opposes the
stroke in both half-strokes. The global vertical component of the wing force
is -(Fx*cos(theta) + Fz*sin(theta)); the sign pairs with Jyz > 0 from the
geometry frame so the settled passive-pitch cycle lifts upward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .wing import WingGeometry, Morphology, morphology, strip_grid

C_N_TRANSLATIONAL = 3.48        # peak normal-force coefficient
C_T_TRANSLATIONAL = 0.4         # tangential coefficient scale
ROT_DAMP_COEF = 2.67            # chordwise rotational damping coefficient
COP_TRANSLATIONAL = 0.388       # chordwise center of pressure, fraction of c(r)
ARM_ROT_SPAN = 0.993            # spanwise arm factor on R2, rotational
ARM_ROT_CHORD = 0.398           # chordwise arm factor on mean chord, rotational
ARM_ADD_SPAN = 1.078            # spanwise arm factor on R2, added mass
ARM_ADD_CHORD = 0.500           # chordwise arm factor on mean chord, added mass
KINEMATIC_VISCOSITY_AIR = 1.48e-5


class AeroError(ValueError):
    pass


@dataclass(frozen=True)
class WingKinematicState:
    phi: float
    theta: float
    phi_dot: float
    theta_dot: float
    phi_ddot: float = 0.0
    theta_ddot: float = 0.0


@dataclass(frozen=True)
class StripState:
    r: float
    alpha: float
    u: float
    vx: float
    vz: float


@dataclass(frozen=True)
class WingLoads:
    fx: float
    fy: float
    fz: float
    ty: float
    tz: float

    def __add__(self, other: "WingLoads") -> "WingLoads":
        return WingLoads(self.fx + other.fx, self.fy + other.fy,
                         self.fz + other.fz, self.ty + other.ty,
                         self.tz + other.tz)

    def scaled(self, k: float) -> "WingLoads":
        return WingLoads(k * self.fx, k * self.fy, k * self.fz,
                         k * self.ty, k * self.tz)


@dataclass(frozen=True)
class LoadBreakdown:
    translational: WingLoads
    rotational: WingLoads
    added_mass: WingLoads

    @property
    def total(self) -> WingLoads:
        return self.translational + self.rotational + self.added_mass


@dataclass(frozen=True)
class AeroEnvironment:
    rho: float = 1.225
    re: float = 5000.0
    n_strips: int = 32
    lam: float = 1.0    # undefined shape parameter of the added-mass fit

    def __post_init__(self):
        if self.rho <= 0.0 or self.re <= 0.0:
            raise AeroError("rho and Re must be positive")
        if self.n_strips < 8:
            raise AeroError("need at least 8 strips")


def c_rot1(re: float) -> float:
    """Reynolds-dependent rotational circulation coefficient."""
    return 0.842 - 0.507 * re**-0.158


def f_aspect(ar: float) -> float:
    """Aspect-ratio factor of the added-mass model."""
    return 1.294 - 0.590 * ar**-0.662


def f_accel(re: float) -> float:
    """Reynolds factor of the added-mass model; tends to 0.776 as Re grows."""
    return 0.776 + 1.911 * re**-0.6876


def f_lambda(lam: float) -> float:
    """Shape factor of the added-mass model; 1.0 at the default lam = 1."""
    return 47.7 * lam**-0.0019 - 46.7


def reynolds_number(phi_am: float, f_wing: float, morph: Morphology,
                    nu: float = KINEMATIC_VISCOSITY_AIR) -> float:
    """Re from the mean wingtip-path speed 2*phi_am*f*R2 and the mean chord."""
    u_ref = 2.0 * phi_am * f_wing * morph.second_moment_radius
    return u_ref * morph.mean_chord / nu


@njit(cache=True)
def _f_alpha(alpha):
    # sign factor of the rotational force, piecewise in the angle of attack
    a = (alpha + math.pi) % (2.0 * math.pi) - math.pi
    if abs(a) < 0.25 * math.pi:
        return 1.0
    if abs(a) > 0.75 * math.pi:
        return -1.0
    return math.sqrt(2.0) * math.cos(a)


@njit(cache=True)
def _strip_loads(theta, phi_dot, theta_dot, phi_ddot, theta_ddot,
                 r, c, dr, rho, crot1, add_coef, r2_radius, mean_chord):
    """Per-wing load components on the strip grid.

    Returns (fx_tr, fz_tr, ty_tr, tz_tr, fx_rot, ty_rot, tz_rot,
             fx_add, ty_add, tz_add).
    """
    st = math.sin(theta)
    ct = math.cos(theta)
    fx_tr = 0.0
    fz_tr = 0.0
    ty_tr = 0.0
    tz_tr = 0.0
    f_rot = 0.0
    f_add = 0.0
    for i in range(r.shape[0]):
        vx = -phi_dot * r[i] * st
        vz = phi_dot * r[i] * ct
        alpha = math.atan2(vx, vz)
        q = 0.5 * rho * (vx * vx + vz * vz)
        dfx = -C_N_TRANSLATIONAL * math.sin(alpha) * q * c[i] * dr
        cos2a = math.cos(2.0 * alpha)
        dfz = C_T_TRANSLATIONAL * cos2a * cos2a * q * c[i] * dr
        fx_tr += dfx
        fz_tr += dfz
        ty_tr += dfx * COP_TRANSLATIONAL * c[i]
        tz_tr += -dfx * st * r[i]
        # rotational circulation plus chordwise rotational damping
        f_rot += _f_alpha(alpha) * crot1 * rho * vx * vz * c[i] * dr
        f_rot += -ROT_DAMP_COEF * rho * theta_dot * abs(theta_dot) \
            * (c[i] ** 3 / 3.0) * dr
        # added mass reaction against the normal acceleration of the strip
        f_add += add_coef * rho * math.pi / 4.0 * c[i] * c[i] * (
            phi_ddot * r[i] * st - theta_ddot * 0.5 * c[i]) * dr
    ty_rot = f_rot * ARM_ROT_CHORD * mean_chord
    tz_rot = -f_rot * st * ARM_ROT_SPAN * r2_radius
    ty_add = f_add * ARM_ADD_CHORD * mean_chord
    tz_add = -f_add * st * ARM_ADD_SPAN * r2_radius
    return (fx_tr, fz_tr, ty_tr, tz_tr, f_rot, ty_rot, tz_rot,
            f_add, ty_add, tz_add)


@njit(cache=True)
def _vertical_force(fx_total, fz_total, theta):
    # global-vertical (lift) component of the wing-frame force
    return -(fx_total * math.cos(theta) + fz_total * math.sin(theta))


def local_flow(kin: WingKinematicState, r: float) -> StripState:
    """Local flow state of the strip at radius r under rigid-body kinematics."""
    vx = -kin.phi_dot * r * math.sin(kin.theta)
    vz = kin.phi_dot * r * math.cos(kin.theta)
    return StripState(r=r, alpha=math.atan2(vx, vz),
                      u=math.hypot(vx, vz), vx=vx, vz=vz)


def _grids(geom: WingGeometry, env: AeroEnvironment):
    r, c, dr = strip_grid(geom, env.n_strips)
    m = morphology(geom)
    return r, c, dr, m


def translational_loads(kin: WingKinematicState, geom: WingGeometry,
                        env: AeroEnvironment) -> WingLoads:
    r, c, dr, m = _grids(geom, env)
    out = _strip_loads(kin.theta, kin.phi_dot, kin.theta_dot, 0.0, 0.0,
                       r, c, dr, env.rho, c_rot1(env.re), 0.0,
                       m.second_moment_radius, m.mean_chord)
    return WingLoads(fx=out[0], fy=0.0, fz=out[1], ty=out[2], tz=out[3])


def rotational_loads(kin: WingKinematicState, geom: WingGeometry,
                     env: AeroEnvironment) -> WingLoads:
    r, c, dr, m = _grids(geom, env)
    out = _strip_loads(kin.theta, kin.phi_dot, kin.theta_dot, 0.0, 0.0,
                       r, c, dr, env.rho, c_rot1(env.re), 0.0,
                       m.second_moment_radius, m.mean_chord)
    return WingLoads(fx=out[4], fy=0.0, fz=0.0, ty=out[5], tz=out[6])


def added_mass_loads(kin: WingKinematicState, geom: WingGeometry,
                     env: AeroEnvironment) -> WingLoads:
    r, c, dr, m = _grids(geom, env)
    add_coef = f_lambda(env.lam) * f_aspect(m.aspect_ratio) * f_accel(env.re)
    out = _strip_loads(kin.theta, kin.phi_dot, kin.theta_dot,
                       kin.phi_ddot, kin.theta_ddot,
                       r, c, dr, env.rho, c_rot1(env.re), add_coef,
                       m.second_moment_radius, m.mean_chord)
    return WingLoads(fx=out[7], fy=0.0, fz=0.0, ty=out[8], tz=out[9])


def total_loads(kin: WingKinematicState, geom: WingGeometry,
                env: AeroEnvironment) -> LoadBreakdown:
    return LoadBreakdown(
        translational=translational_loads(kin, geom, env),
        rotational=rotational_loads(kin, geom, env),
        added_mass=added_mass_loads(kin, geom, env),
    )


def vertical_force(loads: WingLoads, theta: float) -> float:
    """Lift contributed by a set of wing-frame loads at pitch angle theta."""
    return _vertical_force(loads.fx, loads.fz, theta)


def strip_translational(alpha, u, c, dr, rho):
    """Translational strip forces for prescribed per-strip (alpha, U).

    Returns (dfx, dfz) arrays; used by tests as the closed-form oracle path.
    """
    alpha = np.asarray(alpha, dtype=float)
    u = np.asarray(u, dtype=float)
    q = 0.5 * rho * u * u
    dfx = -C_N_TRANSLATIONAL * np.sin(alpha) * q * c * dr
    dfz = C_T_TRANSLATIONAL * np.cos(2 * alpha) ** 2 * q * c * dr
    return dfx, dfz
