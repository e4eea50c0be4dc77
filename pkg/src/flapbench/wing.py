"""Trapezoidal wing planform: morphology and cuboid-discretized inertia.

Wing frame convention (used consistently across the whole package):
+Y spanwise from the flapping axis toward the tip, +Z chordwise from the
leading edge toward the trailing edge, +X normal to the plate. The flapping
axis passes through the origin along X at the root; the pitch axis is the
leading edge (the Y axis). With this frame the product of inertia Jyz of a
plate hanging behind its leading edge is positive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# design-rule constants: fixed aspect ratio and root-to-tip ratio
DESIGN_ASPECT_RATIO = 3.302
DESIGN_TAPER = 0.40


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class WingGeometry:
    R: float            # tip radius from flapping axis [m]
    delta_r: float      # root offset from flapping axis [m]
    c_root: float       # root chord [m]
    c_tip: float        # tip chord [m]
    thickness: float    # membrane thickness [m]
    density: float      # material density [kg/m^3]
    nx: int = 2         # discretization through thickness
    ny: int = 10        # discretization along span
    nz: int = 10        # discretization along chord

    def __post_init__(self):
        if not (self.R > self.delta_r >= 0.0):
            raise GeometryError(f"need R > delta_r >= 0, got R={self.R}, delta_r={self.delta_r}")
        if self.c_root <= 0.0 or self.c_tip <= 0.0:
            raise GeometryError("chords must be positive")
        if self.c_tip > self.c_root:
            raise GeometryError("tip chord must not exceed root chord")
        if self.thickness <= 0.0 or self.density <= 0.0:
            raise GeometryError("thickness and density must be positive")
        if min(self.nx, self.ny, self.nz) < 2:
            raise GeometryError("discretization counts must be >= 2")

    @property
    def span(self) -> float:
        return self.R - self.delta_r


@dataclass(frozen=True)
class Morphology:
    mean_chord: float       # [m]
    area: float             # [m^2]
    aspect_ratio: float
    r2: float               # dimensionless second moment of area
    second_moment_radius: float  # r2 * R [m]


@dataclass(frozen=True)
class InertiaTensor:
    jxx: float
    jyy: float
    jzz: float
    jyz: float

    def __post_init__(self):
        if min(self.jxx, self.jyy, self.jzz) <= 0.0:
            raise GeometryError("moments of inertia must be positive")
        if self.jyz * self.jyz >= self.jyy * self.jzz:
            raise GeometryError("inertia tensor not positive definite")


def design_wing(semi_span: float, thickness: float, density: float,
                nx: int = 2, ny: int = 10, nz: int = 10) -> WingGeometry:
    """Wing for a design point: AR = 3.302 and c_tip/c_root = 0.40 fix the
    planform once the semi-span is chosen; the root sits on the flapping axis."""
    area = semi_span**2 / DESIGN_ASPECT_RATIO
    c_root = 2.0 * area / ((1.0 + DESIGN_TAPER) * semi_span)
    return WingGeometry(R=semi_span, delta_r=0.0, c_root=c_root,
                        c_tip=DESIGN_TAPER * c_root, thickness=thickness,
                        density=density, nx=nx, ny=ny, nz=nz)


def chord_at(geom: WingGeometry, r: float) -> float:
    """Chord at spanwise station r, linear from c_root to c_tip."""
    if not (geom.delta_r <= r <= geom.R):
        raise GeometryError(f"station r={r} outside [{geom.delta_r}, {geom.R}]")
    frac = (r - geom.delta_r) / geom.span
    return geom.c_root + (geom.c_tip - geom.c_root) * frac


def strip_grid(geom: WingGeometry, n: int):
    """Midpoint strip grid (stations, chords, width) for spanwise integration."""
    dr = geom.span / n
    r = geom.delta_r + (np.arange(n) + 0.5) * dr
    slope = (geom.c_tip - geom.c_root) / geom.span
    c = geom.c_root + slope * (r - geom.delta_r)
    return r, c, dr


def morphology(geom: WingGeometry) -> Morphology:
    """Mean chord, area, aspect ratio and dimensionless second moment of area.

    The second moment uses the closed-form polynomial integral of c(r)*r^2 so
    it can serve as an independent oracle for strip-summed quantities.
    """
    mean_chord = 0.5 * (geom.c_root + geom.c_tip)
    area = mean_chord * geom.span
    aspect_ratio = geom.R**2 / area
    # int_{dR}^{R} (a + b (r - dR)) r^2 dr expanded about r = 0
    a = geom.c_root - (geom.c_tip - geom.c_root) / geom.span * geom.delta_r
    b = (geom.c_tip - geom.c_root) / geom.span
    i2 = (a * (geom.R**3 - geom.delta_r**3) / 3.0
          + b * (geom.R**4 - geom.delta_r**4) / 4.0)
    r2 = np.sqrt(i2 / area) / geom.R
    return Morphology(mean_chord=mean_chord, area=area, aspect_ratio=aspect_ratio,
                      r2=r2, second_moment_radius=r2 * geom.R)


def wing_inertia(geom: WingGeometry) -> InertiaTensor:
    """Cuboid-discretized plate inertia about the wing-frame axes.

    The plate is split into nx*ny*nz cells; each cell's mass is lumped at its
    centroid. Converges to the exact thin-plate moments as the grid refines.
    """
    dy = geom.span / geom.ny
    dx = geom.thickness / geom.nx
    x = -0.5 * geom.thickness + (np.arange(geom.nx) + 0.5) * dx
    y = geom.delta_r + (np.arange(geom.ny) + 0.5) * dy
    slope = (geom.c_tip - geom.c_root) / geom.span
    jxx = jyy = jzz = jyz = 0.0
    x2_sum = float(np.sum(x * x))
    for yj in y:
        c = geom.c_root + slope * (yj - geom.delta_r)
        dz = c / geom.nz
        z = (np.arange(geom.nz) + 0.5) * dz
        m_cell = geom.density * dx * dy * dz
        # sum over the nz chord cells and nx thickness cells of this strip
        z2 = float(np.sum(z * z))
        zs = float(np.sum(z))
        jxx += m_cell * (geom.nx * (geom.nz * yj * yj + z2) + 0.0)
        jyy += m_cell * (geom.nz * x2_sum + geom.nx * z2)
        jzz += m_cell * (geom.nz * x2_sum + geom.nx * geom.nz * yj * yj)
        jyz += m_cell * geom.nx * yj * zs
    if jzz <= 0.0:
        raise GeometryError("degenerate geometry: zero inertia")
    return InertiaTensor(jxx=jxx, jyy=jyy, jzz=jzz, jyz=jyz)
