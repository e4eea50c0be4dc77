"""Closed-loop 8-DOF simulation of the four-wing direct-drive flapper.

Per step: CPG targets -> PID motor torques -> quasi-steady aero loads ->
tandem correction -> membrane restraint -> acceleration assembly -> RK4 state
update. Integration proceeds cycle by cycle until the per-wing cycle-mean
lift settles.

Wing indexing follows the platform layout: (1, 2, 3, 4) = (fore-left,
fore-right, hind-right, hind-left). The right-side wings (2, 3) carry the
pi-offset spring equilibrium; tandem pairs are (1, 4) and (2, 3).

Added-mass loads need the angular accelerations being solved for; they are
evaluated with the accelerations from the previous step's first derivative
call (one-step explicit lag), which keeps the update explicit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from . import aero
from .aero import AeroEnvironment
from .drivetrain import MembraneParams, MotorParams, SpringSpec
from .tandem import _c_fore, _c_hind, _features
from .wing import InertiaTensor, WingGeometry, morphology, strip_grid

WING_OFFSETS = np.array([0.0, -math.pi, -math.pi, 0.0])
FORE_WINGS = (0, 1)
HIND_WINGS = (3, 2)  # paired with fore wings by side: (0,3) left, (1,2) right

DEG = math.pi / 180.0


class SimulationError(RuntimeError):
    pass


@dataclass(frozen=True)
class DesignPoint:
    phi_am_deg: float = 80.0    # flapping amplitude [deg]
    f_wing: float = 34.0        # flapping frequency [Hz]
    semi_span: float = 0.075    # wing length R [m]
    id_motor: int = 3
    gamma_tr: float = 25.0

    BOUNDS = {
        "phi_am_deg": (10.0, 85.0),
        "f_wing": (15.0, 50.0),
        "semi_span": (0.05, 0.12),
        "id_motor": (0, 20),
        "gamma_tr": (5.0, 35.0),
    }

    def __post_init__(self):
        for name, (lo, hi) in self.BOUNDS.items():
            v = getattr(self, name)
            if not (lo <= v <= hi):
                raise ValueError(f"{name}={v} outside [{lo}, {hi}]")
        if self.id_motor != int(self.id_motor):
            raise ValueError("id_motor must be integral")

    @property
    def phi_am(self) -> float:
        return self.phi_am_deg * DEG

    def as_vector(self) -> np.ndarray:
        return np.array([self.phi_am_deg, self.f_wing, self.semi_span,
                         float(self.id_motor), self.gamma_tr])


@dataclass(frozen=True)
class PidGains:
    kp: float = 0.48
    ki: float = 2e-5
    kd: float = 7e-4
    integral_clamp: float = 10.0

    def __post_init__(self):
        if min(self.kp, self.ki, self.kd) < 0.0:
            raise ValueError("PID gains must be non-negative")


@dataclass(frozen=True)
class TandemSettings:
    enabled: bool = True
    percent_scale: bool = True


@dataclass
class SimConfig:
    design: DesignPoint
    geometry: WingGeometry
    inertia: InertiaTensor
    motor: MotorParams
    spring: SpringSpec
    membrane: MembraneParams
    environment: AeroEnvironment
    pid: PidGains = field(default_factory=PidGains)
    tandem: TandemSettings = field(default_factory=TandemSettings)
    j_gear: float = 0.0
    eta_tr: float = 0.8
    steps_per_cycle: int = 1000
    max_cycles: int = 60
    settle_tol: float = 1e-3
    amplitude_rad: float | None = None  # override of the commanded amplitude
    aero_on: bool = True
    pid_on: bool = True
    membrane_on: bool = True
    initial_state: np.ndarray | None = None  # 16 values, else equilibrium

    def __post_init__(self):
        if self.steps_per_cycle < 200:
            raise ValueError("need at least 200 steps per cycle")

    @property
    def dt(self) -> float:
        return 1.0 / (self.steps_per_cycle * self.design.f_wing)


@dataclass(frozen=True)
class SimResult:
    mean_lift: np.ndarray           # per wing, N
    l_takeoff: float                # N
    achieved_amplitude: np.ndarray  # per wing, rad
    achieved_frequency: float       # Hz
    max_motor_speed: np.ndarray     # per wing, rad/s (motor side)
    max_current: np.ndarray         # per wing, A
    mean_electrical_power: np.ndarray  # per wing, W
    mean_heat: np.ndarray           # per wing, W
    mean_pitch_amplitude: np.ndarray   # per wing, rad
    settled: bool
    cycles_used: int
    tandem_clamps: int
    final_state: np.ndarray


def cpg_target(t: float, amp: float, f: float, phase: float) -> float:
    """Central-pattern-generator flapping target amp*sin(2 pi f t + phase)."""
    if f <= 0.0:
        raise ValueError("frequency must be positive")
    return amp * math.sin(2.0 * math.pi * f * t + phase)


def pid_torque(e: float, e_int: float, e_dot: float, gains: PidGains) -> float:
    return gains.kp * e + gains.ki * e_int + gains.kd * e_dot


def accelerations(phi, torques_m, torques_yw, torques_zw, torques_vtm,
                  inertia: InertiaTensor, j_motor_zz: float, k_a):
    """Acceleration assembly of the 8-DOF equations.

    Wings 2 and 3 (indices 1, 2) carry the pi-offset spring terms. j_motor_zz
    is the flap-side drive inertia (gear plus reflected rotor). Returns
    (phi_ddot, theta_ddot) arrays.
    """
    phi = np.asarray(phi, dtype=float)
    k_a = np.broadcast_to(np.asarray(k_a, dtype=float), phi.shape)
    det = (j_motor_zz * inertia.jyy + inertia.jyy * inertia.jzz
           - inertia.jyz**2)
    if det == 0.0:
        raise SimulationError("singular inertia assembly")
    phi_ddot = np.empty(4)
    theta_ddot = np.empty(4)
    for i in range(4):
        tau_phi = (torques_m[i] + torques_zw[i]
                   - k_a[i] * (phi[i] - WING_OFFSETS[i]))
        tau_theta = torques_yw[i] + torques_vtm[i]
        phi_ddot[i] = (inertia.jyy * tau_phi - inertia.jyz * tau_theta) / det
        theta_ddot[i] = (-inertia.jyz * tau_phi
                         + (j_motor_zz + inertia.jzz) * tau_theta) / det
    return phi_ddot, theta_ddot


@njit(cache=True)
def _tandem_factors(phi_f, phid_f, phi_h, phid_h, amp, w_max, percent):
    x = _features(phi_f, phid_f, phi_h, phid_h, amp, w_max, w_max, w_max)
    cf = _c_fore(x[0], x[1], x[2], x[3], x[4], x[5], x[6], x[7], x[8], x[9],
                 x[10], x[11])
    ch = _c_hind(x[0], x[1], x[2], x[3], x[4], x[5], x[6], x[7], x[8], x[9],
                 x[10], x[11])
    if percent:
        cf /= 100.0
        ch /= 100.0
    clamps = 0
    if cf < -1.0:
        cf = -1.0
        clamps += 1
    if ch < -1.0:
        ch = -1.0
        clamps += 1
    return cf + 1.0, ch + 1.0, clamps


@njit(cache=True)
def _membrane(theta, theta_dot, phi_dot, c_c1, c_scale1, c_move, k1, sigma,
              mu, theta_tat, exponent):
    c_tens = c_scale1 * (theta_dot * phi_dot) - c_move
    arg = c_tens * c_tens
    if arg > 50.0:
        arg = 50.0
    gate = c_c1 / (1.0 + math.exp(-arg))
    n0 = 1.0 / (sigma * math.sqrt(2.0 * math.pi))
    a1 = abs((k1 * theta - mu) / sigma) ** exponent
    if a1 > 100.0:
        a1 = 100.0
    a2 = abs((k1 * theta_tat - mu) / sigma) ** exponent
    a0 = abs(mu / sigma) ** exponent
    g1 = (k1 - n0 * math.exp(-0.5 * a1)) / k1
    g2 = (k1 - n0 * math.exp(-0.5 * a2)) / k1
    g0 = (k1 - n0 * math.exp(-0.5 * a0)) / k1
    kws = (g1 * g1 - g0 * g0) / (g2 * g2 - g0 * g0)
    return gate * kws * theta + gate * theta_dot


@njit(cache=True)
def _derivative(t, y, phidd_lag, thetadd_lag, out,
                amp, f, phases, offsets, pid_on, kp, ki, kd, eint_clamp,
                aero_on, r_s, c_s, dr, rho, crot1, add_coef, r2_radius, cbar,
                membrane_on, c_c1, c_scale1, c_move, k1, sigma, mu, theta_tat,
                exponent, tandem_on, percent, w_max, amp_norm,
                jyy, jzz, jyz, jmzz, k_a, lift_out, tm_out):
    """Time derivative of the 20-dim state [phi4, theta4, phid4, thetad4, eint4].

    Returns the tandem clamp count; fills out, lift_out, tm_out in place.
    """
    omega = 2.0 * math.pi * f
    tyw = np.zeros(4)
    tzw = np.zeros(4)
    tvtm = np.zeros(4)
    clamps = 0
    for i in range(4):
        phi = y[i]
        theta = y[4 + i]
        phid = y[8 + i]
        thetad = y[12 + i]
        if aero_on:
            out10 = aero._strip_loads(theta, phid, thetad, phidd_lag[i],
                                      thetadd_lag[i], r_s, c_s, dr, rho,
                                      crot1, add_coef, r2_radius, cbar)
            fx = out10[0] + out10[4] + out10[7]
            fz = out10[1]
            tyw[i] = out10[2] + out10[5] + out10[8]
            tzw[i] = out10[3] + out10[6] + out10[9]
            lift_out[i] = -(fx * math.cos(theta) + fz * math.sin(theta))
        else:
            lift_out[i] = 0.0
        if membrane_on:
            tvtm[i] = -_membrane(theta, thetad, phid, c_c1, c_scale1, c_move,
                                 k1, sigma, mu, theta_tat, exponent)
    if tandem_on and aero_on:
        for side in range(2):
            fore = side          # wings 1, 2 -> indices 0, 1
            hind = 3 - side      # wings 4, 3 -> indices 3, 2
            pf = y[fore] - offsets[fore]
            phh = y[hind] - offsets[hind]
            kf, kh, cl = _tandem_factors(pf, y[8 + fore], phh, y[8 + hind],
                                         amp_norm, w_max, percent)
            clamps += cl
            tyw[fore] *= kf
            tzw[fore] *= kf
            tyw[hind] *= kh
            tzw[hind] *= kh
    for i in range(4):
        phi = y[i]
        phid = y[8 + i]
        if pid_on:
            tgt = offsets[i] + amp * math.sin(omega * t + phases[i])
            tgtd = amp * omega * math.cos(omega * t + phases[i])
            e = tgt - phi
            eint = y[16 + i]
            if eint > eint_clamp:
                eint = eint_clamp
            elif eint < -eint_clamp:
                eint = -eint_clamp
            tm = kp * e + ki * eint + kd * (tgtd - phid)
            out[16 + i] = e
        else:
            tm = 0.0
            out[16 + i] = 0.0
        tm_out[i] = tm
        det = jmzz * jyy + jyy * jzz - jyz * jyz
        tau_phi = tm + tzw[i] - k_a * (phi - offsets[i])
        tau_theta = tyw[i] + tvtm[i]
        out[i] = phid
        out[4 + i] = y[12 + i]
        out[8 + i] = (jyy * tau_phi - jyz * tau_theta) / det
        out[12 + i] = (-jyz * tau_phi + (jmzz + jzz) * tau_theta) / det
    return clamps


@njit(cache=True)
def _run_cycle(y, phidd_lag, thetadd_lag, t0, dt, steps,
               amp, f, phases, offsets, pid_on, kp, ki, kd, eint_clamp,
               aero_on, r_s, c_s, dr, rho, crot1, add_coef, r2_radius, cbar,
               membrane_on, c_c1, c_scale1, c_move, k1, sigma, mu, theta_tat,
               exponent, tandem_on, percent, w_max, amp_norm,
               jyy, jzz, jyz, jmzz, k_a, gamma, eta_tr, i0, r0, kt, kv_rad,
               trace, trace_every):
    """Integrate one flapping cycle with RK4; returns cycle measurements."""
    lift_mean = np.zeros(4)
    power_mean = np.zeros(4)
    heat_mean = np.zeros(4)
    max_w = np.zeros(4)
    max_i = np.zeros(4)
    phi_min = np.full(4, 1e30)
    phi_max = np.full(4, -1e30)
    th_min = np.full(4, 1e30)
    th_max = np.full(4, -1e30)
    clamps = 0
    k1v = np.empty(20)
    k2v = np.empty(20)
    k3v = np.empty(20)
    k4v = np.empty(20)
    lift = np.zeros(4)
    scratch_lift = np.zeros(4)
    tm = np.zeros(4)
    scratch_tm = np.zeros(4)
    n_trace = 0
    t = t0
    for s in range(steps):
        cl = _derivative(t, y, phidd_lag, thetadd_lag, k1v,
                         amp, f, phases, offsets, pid_on, kp, ki, kd,
                         eint_clamp, aero_on, r_s, c_s, dr, rho, crot1,
                         add_coef, r2_radius, cbar, membrane_on, c_c1,
                         c_scale1, c_move, k1, sigma, mu, theta_tat, exponent,
                         tandem_on, percent, w_max, amp_norm, jyy, jzz, jyz,
                         jmzz, k_a, lift, tm)
        clamps += cl
        # refresh the added-mass lag from this step's base state
        for i in range(4):
            phidd_lag[i] = k1v[8 + i]
            thetadd_lag[i] = k1v[12 + i]
        _derivative(t + 0.5 * dt, y + 0.5 * dt * k1v, phidd_lag, thetadd_lag,
                    k2v, amp, f, phases, offsets, pid_on, kp, ki, kd,
                    eint_clamp, aero_on, r_s, c_s, dr, rho, crot1, add_coef,
                    r2_radius, cbar, membrane_on, c_c1, c_scale1, c_move, k1,
                    sigma, mu, theta_tat, exponent, tandem_on, percent, w_max,
                    amp_norm, jyy, jzz, jyz, jmzz, k_a, scratch_lift,
                    scratch_tm)
        _derivative(t + 0.5 * dt, y + 0.5 * dt * k2v, phidd_lag, thetadd_lag,
                    k3v, amp, f, phases, offsets, pid_on, kp, ki, kd,
                    eint_clamp, aero_on, r_s, c_s, dr, rho, crot1, add_coef,
                    r2_radius, cbar, membrane_on, c_c1, c_scale1, c_move, k1,
                    sigma, mu, theta_tat, exponent, tandem_on, percent, w_max,
                    amp_norm, jyy, jzz, jyz, jmzz, k_a, scratch_lift,
                    scratch_tm)
        _derivative(t + dt, y + dt * k3v, phidd_lag, thetadd_lag,
                    k4v, amp, f, phases, offsets, pid_on, kp, ki, kd,
                    eint_clamp, aero_on, r_s, c_s, dr, rho, crot1, add_coef,
                    r2_radius, cbar, membrane_on, c_c1, c_scale1, c_move, k1,
                    sigma, mu, theta_tat, exponent, tandem_on, percent, w_max,
                    amp_norm, jyy, jzz, jyz, jmzz, k_a, scratch_lift,
                    scratch_tm)
        for j in range(20):
            y[j] = y[j] + dt / 6.0 * (k1v[j] + 2.0 * k2v[j] + 2.0 * k3v[j]
                                      + k4v[j])
        t = t0 + (s + 1) * dt
        total_lift = 0.0
        total_power = 0.0
        for i in range(4):
            lift_mean[i] += lift[i]
            wm = gamma * y[8 + i]
            tmm = tm[i] / (gamma * eta_tr)
            im = i0 + tmm / kt
            um = r0 * im + wm / kv_rad
            pm = um * im
            power_mean[i] += pm
            heat_mean[i] += im * im * r0
            if abs(wm) > max_w[i]:
                max_w[i] = abs(wm)
            if abs(im) > max_i[i]:
                max_i[i] = abs(im)
            if y[i] < phi_min[i]:
                phi_min[i] = y[i]
            if y[i] > phi_max[i]:
                phi_max[i] = y[i]
            if y[4 + i] < th_min[i]:
                th_min[i] = y[4 + i]
            if y[4 + i] > th_max[i]:
                th_max[i] = y[4 + i]
            total_lift += lift[i]
            total_power += pm
        if trace_every > 0 and s % trace_every == 0:
            trace[n_trace, 0] = t
            for i in range(4):
                trace[n_trace, 1 + i] = y[i]
                trace[n_trace, 5 + i] = y[4 + i]
            trace[n_trace, 9] = total_lift
            trace[n_trace, 10] = total_power
            n_trace += 1
    inv = 1.0 / steps
    return (lift_mean * inv, power_mean * inv, heat_mean * inv, max_w, max_i,
            0.5 * (phi_max - phi_min), 0.5 * (th_max - th_min), clamps,
            n_trace)


def _kernel_args(cfg: SimConfig, amp: float):
    m = morphology(cfg.geometry)
    r_s, c_s, dr = strip_grid(cfg.geometry, cfg.environment.n_strips)
    add_coef = (aero.f_lambda(cfg.environment.lam)
                * aero.f_aspect(m.aspect_ratio)
                * aero.f_accel(cfg.environment.re))
    w_max = 2.0 * math.pi * cfg.design.f_wing * (cfg.design.phi_am / 2.0)
    jmzz = cfg.j_gear + cfg.design.gamma_tr**2 * cfg.motor.rotor_inertia
    mem = cfg.membrane
    phases = np.array([0.0, 0.0, math.pi, math.pi])
    return dict(
        amp=amp, f=cfg.design.f_wing, phases=phases, offsets=WING_OFFSETS,
        pid_on=cfg.pid_on, kp=cfg.pid.kp, ki=cfg.pid.ki, kd=cfg.pid.kd,
        eint_clamp=cfg.pid.integral_clamp, aero_on=cfg.aero_on,
        r_s=r_s, c_s=c_s, dr=dr, rho=cfg.environment.rho,
        crot1=aero.c_rot1(cfg.environment.re), add_coef=add_coef,
        r2_radius=m.second_moment_radius, cbar=m.mean_chord,
        membrane_on=cfg.membrane_on, c_c1=mem.c_c1, c_scale1=mem.c_scale1,
        c_move=mem.c_move, k1=mem.k1, sigma=mem.sigma, mu=mem.mu,
        theta_tat=mem.theta_tat, exponent=mem.exponent,
        tandem_on=cfg.tandem.enabled, percent=cfg.tandem.percent_scale,
        w_max=w_max, amp_norm=cfg.design.phi_am,
        jyy=cfg.inertia.jyy, jzz=cfg.inertia.jzz, jyz=cfg.inertia.jyz,
        jmzz=jmzz, k_a=cfg.spring.k_a, gamma=cfg.design.gamma_tr,
        eta_tr=cfg.eta_tr, i0=cfg.motor.i0, r0=cfg.motor.r0, kt=cfg.motor.kt,
        kv_rad=cfg.motor.kv_rad,
    )


def simulate(cfg: SimConfig, trace_path=None, trace_every: int = 10) -> SimResult:
    """Run to a steady cycle and return cycle-averaged measurements.

    Non-finite state aborts with SimulationError; failure to settle within
    max_cycles returns settled=False (optimizers treat that as infeasible).
    """
    amp = cfg.design.phi_am if cfg.amplitude_rad is None else cfg.amplitude_rad
    args = _kernel_args(cfg, amp)
    y = np.zeros(20)
    y[0:4] = WING_OFFSETS
    if cfg.initial_state is not None:
        y[0:16] = cfg.initial_state
    phidd_lag = np.zeros(4)
    thetadd_lag = np.zeros(4)
    dt = cfg.dt
    trace_rows = []
    trace_buf = np.zeros((cfg.steps_per_cycle + 1, 11))
    prev_lift = None
    settle_hits = 0
    settled = False
    clamps = 0
    cycles = 0
    last = None
    for cyc in range(cfg.max_cycles):
        out = _run_cycle(y, phidd_lag, thetadd_lag, cyc / cfg.design.f_wing,
                         dt, cfg.steps_per_cycle,
                         trace=trace_buf,
                         trace_every=trace_every if trace_path else 0,
                         **args)
        (lift, power, heat, max_w, max_i, amp_ach, th_amp, cl, n_tr) = out
        cycles = cyc + 1
        clamps += cl
        if not np.all(np.isfinite(y)):
            raise SimulationError(f"state diverged in cycle {cyc}")
        if trace_path:
            trace_rows.append(trace_buf[:n_tr].copy())
        last = (lift, power, heat, max_w, max_i, amp_ach, th_amp)
        if prev_lift is not None:
            ref = np.maximum(np.abs(prev_lift), 1e-12)
            if np.all(np.abs(lift - prev_lift) / ref < cfg.settle_tol):
                settle_hits += 1
                if settle_hits >= 2:
                    settled = True
                    break
            else:
                settle_hits = 0
        prev_lift = lift.copy()
    lift, power, heat, max_w, max_i, amp_ach, th_amp = last
    if trace_path:
        rows = np.vstack(trace_rows)
        header = "t,phi1,phi2,phi3,phi4,theta1,theta2,theta3,theta4,lift,power"
        with open(trace_path, "w") as fh:
            fh.write("# schema=flapbench/trace/v1\n")
            fh.write(header + "\n")
            np.savetxt(fh, rows, delimiter=",", fmt="%.9g")
    return SimResult(
        mean_lift=lift, l_takeoff=float(np.sum(lift)),
        achieved_amplitude=amp_ach, achieved_frequency=cfg.design.f_wing,
        max_motor_speed=max_w, max_current=max_i,
        mean_electrical_power=power, mean_heat=heat,
        mean_pitch_amplitude=th_amp, settled=settled, cycles_used=cycles,
        tandem_clamps=clamps, final_state=y.copy(),
    )


MAX_AMPLITUDE_RAD = math.pi / 2.0  # total sweep of 180 degrees


def max_amplitude_run(cfg: SimConfig) -> SimResult:
    """Same pipeline at the maximum commanded amplitude (180 degree sweep)."""
    import copy
    cfg2 = copy.copy(cfg)
    cfg2.amplitude_rad = MAX_AMPLITUDE_RAD
    return simulate(cfg2)


def measure_frequency(trace_t: np.ndarray, signal: np.ndarray) -> float:
    """Oscillation frequency from interpolated positive-going zero crossings."""
    s = np.sign(signal)
    idx = np.where(np.diff(s) > 0)[0]
    if len(idx) < 2:
        raise SimulationError("too few zero crossings to measure frequency")
    crossings = []
    for i in idx:
        t0, v0 = trace_t[i], signal[i]
        t1, v1 = trace_t[i + 1], signal[i + 1]
        crossings.append(t0 - v0 * (t1 - t0) / (v1 - v0))
    return 1.0 / float(np.mean(np.diff(crossings)))
