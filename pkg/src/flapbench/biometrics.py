"""Minimal Biorobotic Stealth Distance: eye-resolution model, wingspan shape
distance, wingtip-trajectory dissimilarity and individual variability.

Amplitudes here are total stroke sweeps in degrees (the biological
convention); the wingtip angle runs median + (amplitude/2) * cos(2 pi f t).
Trajectory pairs are phase-aligned at a stroke extreme at t = 0 and compared
on a common uniform time grid covering ten cycles of the slower trajectory
sampled at 200 points per cycle of the faster one.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

EYE_CONSTANT = 6.82e-4  # human-eye angular resolution scale (rad)


class BioMetricsError(ValueError):
    pass


@dataclass(frozen=True)
class EyeModel:
    c_eye: float = EYE_CONSTANT

    def __post_init__(self):
        if self.c_eye <= 0.0:
            raise BioMetricsError("eye constant must be positive")


@dataclass(frozen=True)
class FlightModeRange:
    mode: str
    frequency: tuple            # Hz (lo, hi)
    plane_angle: tuple          # deg
    amplitude: tuple            # deg, total sweep
    median: tuple               # deg
    phase_difference: tuple     # deg; not used in single-wingtip synthesis
    individual_variability: float

    def __post_init__(self):
        for rng in (self.frequency, self.plane_angle, self.amplitude,
                    self.median, self.phase_difference):
            if rng[0] > rng[1]:
                raise BioMetricsError(f"range {rng} reversed")


# observed dragonfly flight-mode parameter ranges
FLIGHT_MODES = {
    "hovering": FlightModeRange("hovering", (38.8, 41.0), (0.0, 0.0),
                                (60.0, 90.0), (0.0, 0.0), (180.0, 180.0),
                                0.627),
    "climbing": FlightModeRange("climbing", (27.2, 41.5), (37.0, 66.0),
                                (65.2, 94.0), (-3.0, 22.3), (76.7, 102.3),
                                0.763),
    "turning": FlightModeRange("turning", (33.3, 41.7), (19.3, 80.0),
                               (31.0, 90.0), (-9.0, 1.5), (0.0, 74.0),
                               0.693),
    "forward": FlightModeRange("forward", (24.0, 46.0), (19.3, 80.0),
                               (50.0, 86.0), (-10.8, 7.3), (60.0, 90.0),
                               0.642),
}
OVERALL_INDIVIDUAL_VARIABILITY = 0.6


@dataclass(frozen=True)
class TrajectoryParams:
    semi_span: float        # m
    frequency: float        # Hz
    plane_angle: float      # deg
    amplitude: float        # deg, total sweep
    median: float           # deg

    def __post_init__(self):
        if self.frequency <= 0.0 or self.amplitude <= 0.0:
            raise BioMetricsError("frequency and amplitude must be positive")


@dataclass(frozen=True)
class WingtipTrajectory:
    points: np.ndarray  # (n, 3)
    dt: float
    period: float


def hover_reference(semi_span: float) -> TrajectoryParams:
    """Reference dragonfly hovering trajectory: midpoints of the hovering
    parameter ranges (39.9 Hz, 75 degree sweep, level stroke plane)."""
    return TrajectoryParams(semi_span=semi_span, frequency=39.9,
                            plane_angle=0.0, amplitude=75.0, median=0.0)


def min_resolution_distance(d: float, eye: EyeModel = EyeModel()) -> float:
    """Distance at which a length error d is just resolvable: D = d / C_eye."""
    if d < 0.0:
        raise BioMetricsError("resolvable error must be non-negative")
    return d / eye.c_eye


def shape_distance(s_aircraft: float, s_animal: float,
                   eye: EyeModel = EyeModel()) -> float:
    """Resolution distance of the wingspan excess; zero when the aircraft
    blends under the animal span."""
    if s_aircraft <= 0.0 or s_animal <= 0.0:
        raise BioMetricsError("spans must be positive")
    excess = s_aircraft - s_animal
    return excess / eye.c_eye if excess > 0.0 else 0.0


def _tip_points(ts: np.ndarray, p: TrajectoryParams) -> np.ndarray:
    phi = (math.radians(p.median)
           + 0.5 * math.radians(p.amplitude) * np.cos(2 * np.pi * p.frequency * ts))
    beta = math.radians(p.plane_angle)
    e_lat = np.array([0.0, 1.0, 0.0])
    e_fwd = np.array([math.cos(beta), 0.0, math.sin(beta)])
    return p.semi_span * (np.outer(np.cos(phi), e_lat)
                          + np.outer(np.sin(phi), e_fwd))


def wingtip_trajectory(p: TrajectoryParams, n_cycles: int = 10,
                       samples_per_cycle: int = 200) -> WingtipTrajectory:
    """Sampled wingtip path on the sphere of radius semi_span."""
    period = 1.0 / p.frequency
    dt = period / samples_per_cycle
    ts = np.arange(n_cycles * samples_per_cycle) * dt
    return WingtipTrajectory(points=_tip_points(ts, p), dt=dt,
                             period=period * n_cycles)


def dynamic_dissimilarity(a: TrajectoryParams, ref: TrajectoryParams,
                          n_cycles: int = 10,
                          samples_per_cycle: int = 200) -> float:
    """Mean pointwise wingtip distance over the common grid, normalized by the
    aircraft semi-span."""
    f_lo = min(a.frequency, ref.frequency)
    f_hi = max(a.frequency, ref.frequency)
    duration = n_cycles / f_lo
    dt = 1.0 / (samples_per_cycle * f_hi)
    ts = np.arange(0.0, duration, dt)
    d = np.linalg.norm(_tip_points(ts, a) - _tip_points(ts, ref), axis=1)
    return float(np.mean(d)) / a.semi_span


def individual_variability(mode: FlightModeRange, semi_span: float = 0.03,
                           n_cycles: int = 10,
                           samples_per_cycle: int = 200) -> float:
    """Largest pairwise trajectory dissimilarity over corner-and-midpoint
    combinations of the mode's parameter ranges at a fixed span."""
    def levels(rng):
        lo, hi = rng
        return [lo] if lo == hi else [lo, 0.5 * (lo + hi), hi]

    combos = [TrajectoryParams(semi_span, f, pa, am, md)
              for f in levels(mode.frequency)
              for pa in levels(mode.plane_angle)
              for am in levels(mode.amplitude)
              for md in levels(mode.median)]
    if len(combos) < 2:
        return 0.0
    return max(dynamic_dissimilarity(a, b, n_cycles, samples_per_cycle)
               for a, b in itertools.combinations(combos, 2))


@dataclass(frozen=True)
class MbsdBreakdown:
    d_shape: float
    d_trajectory: float
    c_dynamic: float
    c_individual: float

    @property
    def total(self) -> float:
        return self.d_shape + self.d_trajectory


def mbsd(aircraft: TrajectoryParams, ref: TrajectoryParams,
         c_individual: float, s_animal: float = 0.030,
         eye: EyeModel = EyeModel(), n_cycles: int = 10,
         samples_per_cycle: int = 200) -> MbsdBreakdown:
    """Stealth distance: wingspan-excess term plus the floored trajectory term
    S * max(C_dynamic - C_individual, 0) / C_eye."""
    d_shape = shape_distance(aircraft.semi_span, s_animal, eye)
    c_dyn = dynamic_dissimilarity(aircraft, ref, n_cycles, samples_per_cycle)
    excess = max(c_dyn - c_individual, 0.0)
    d_traj = aircraft.semi_span * excess / eye.c_eye
    return MbsdBreakdown(d_shape=d_shape, d_trajectory=d_traj,
                         c_dynamic=c_dyn, c_individual=c_individual)


def mbsd_for_design(semi_span: float, f_wing: float, phi_am_deg: float,
                    mode: FlightModeRange = FLIGHT_MODES["hovering"],
                    s_animal: float = 0.030, eye: EyeModel = EyeModel(),
                    c_individual: float | None = None,
                    n_cycles: int = 10,
                    samples_per_cycle: int = 200) -> MbsdBreakdown:
    """MBSD of a design point: the wingtip sweeps twice the design half-sweep
    amplitude; the reference is the mode's midpoint trajectory at equal span."""
    aircraft = TrajectoryParams(semi_span=semi_span, frequency=f_wing,
                                plane_angle=0.0, amplitude=2.0 * phi_am_deg,
                                median=0.0)
    ref = TrajectoryParams(semi_span=semi_span,
                           frequency=0.5 * (mode.frequency[0] + mode.frequency[1]),
                           plane_angle=0.5 * (mode.plane_angle[0] + mode.plane_angle[1]),
                           amplitude=0.5 * (mode.amplitude[0] + mode.amplitude[1]),
                           median=0.5 * (mode.median[0] + mode.median[1]))
    ci = mode.individual_variability if c_individual is None else c_individual
    return mbsd(aircraft, ref, ci, s_animal, eye, n_cycles, samples_per_cycle)
