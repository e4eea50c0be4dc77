"""Fore/hind-wing interference correction.

The correction multiplies single-wing loads by (c + 1) where c comes from two
fitted symbolic-regression expressions evaluated on twelve dimensionless
features of the fore and hind flapping states. The fitted expressions return
percent values; the default configuration divides by 100 before applying.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from numba import njit

from .aero import WingLoads


class TandemError(ValueError):
    pass


@dataclass(frozen=True)
class TandemFeatures:
    x: tuple  # x0..x11

    def __post_init__(self):
        if len(self.x) != 12:
            raise TandemError("expected 12 features")


@dataclass(frozen=True)
class TandemCoefficients:
    c_fore: float
    c_hind: float


def features(phi_f: float, phi_dot_f: float, phi_h: float, phi_dot_h: float,
             amp: float, w_max_f: float, w_max_h: float,
             w_max_d: float) -> TandemFeatures:
    """Dimensionless regression features from the fore/hind flapping states.

    amp is the total stroke amplitude in radians; the w_max values are the
    peak commanded flapping rates used as rate normalizers.
    """
    if amp <= 0.0 or min(w_max_f, w_max_h, w_max_d) <= 0.0:
        raise TandemError("amplitude and peak rates must be positive")
    return TandemFeatures(x=_features(phi_f, phi_dot_f, phi_h, phi_dot_h,
                                      amp, w_max_f, w_max_h, w_max_d))


@njit(cache=True)
def _features(phi_f, phi_dot_f, phi_h, phi_dot_h, amp, w_max_f, w_max_h, w_max_d):
    return (
        phi_dot_f / (w_max_f * amp),
        phi_dot_h / (w_max_h * amp),
        (phi_dot_f - phi_dot_h) / (w_max_d * amp),
        phi_f / amp,
        phi_h / amp,
        (phi_f - phi_h) / amp,
        math.sin(2.0 * phi_f * math.pi / amp),
        math.sin(2.0 * phi_h * math.pi / amp),
        math.sin(4.0 * phi_f * math.pi / amp),
        math.sin(4.0 * phi_h * math.pi / amp),
        math.sin(8.0 * phi_f * math.pi / amp),
        math.sin(8.0 * phi_h * math.pi / amp),
    )


@njit(cache=True)
def _c_fore(x0, x1, x2, x3, x4, x5, x6, x7, x8, x9, x10, x11):
    return (x0 * x8 * (-11.453 * x0 * (-5.0 * x6 + x7) - 22.906 * x1
                       + 11.453 * x2 - 11.453 * x4 + 11.453 * x5
                       - 11.453 * x7 - 11.453 * math.sin(math.sin(x8)))
            + x0 * x9 * (11.453 * x10 + 11.453 * x11 + 11.453 * x2
                         - 22.906 * x4 - 11.453 * x5 * (x1 - x11 - x5)
                         - 11.453 * x7)
            + 9.0 * x1 - 7.892 * x2 + 7.892 * x4 + x8 - 6.166)


@njit(cache=True)
def _c_hind(x0, x1, x2, x3, x4, x5, x6, x7, x8, x9, x10, x11):
    gate = x3 + x4 + x6 + x7
    inner = (-2.0 * x1 - x10 - x11 + x2
             - x7 * (x1 + x7 - math.sin(x10 - x5)) * (x1 + x11 - x9 - 45.822)
             - x8
             - (x2 + x4 - math.sin(x1 - 124.935))
             * (2.0 * x0 - 3.0 * x10 - x9 - 34.855) * gate
             - 49.314)
    return (49.314 * x1
            - (x2 - x5 - math.sin(x1 - 124.935))
            * (x2 + x4 - x8 - 0.994) * gate * inner)


def coefficients(f: TandemFeatures) -> TandemCoefficients:
    """Evaluate the two fitted interference expressions (percent values)."""
    return TandemCoefficients(c_fore=_c_fore(*f.x), c_hind=_c_hind(*f.x))


def apply(loads: WingLoads, c: float) -> tuple[WingLoads, bool]:
    """Scale a load set by (c + 1), c expressed as a fraction.

    c below -1 is clamped to full cancellation; the returned flag records
    whether the clamp engaged.
    """
    clamped = c < -1.0
    k = max(c, -1.0) + 1.0
    return loads.scaled(k), clamped
