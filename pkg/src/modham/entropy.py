"""Local entropy of a Klein-Gordon wave packet in a ball.

For the ball ``B_R(c)`` at time ``t`` the entropy is

    S = pi int_B (R^2 - rho^2)/R T00 + (pi D / R) int_B Phi^2
        + (pi m^2 / 2R) iint_{B x B} G_m(x - y) Phi(x) Phi(y),

the Yukawa coefficient being the one fixed by the generator (see
:mod:`modham.massive`). It is also the vacuum relative entropy of the
coherent state built on ``Phi``, restricted to the double cone over ``B``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import field as fld
from .conformal import apply_legendre, scaling_dimension
from .massive import (
    _RadialSamples,
    ball_form_terms,
    ball_green,
    radial_green_on_ball,
)


def ball_volume(d, radius=1.0):
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1) * radius**d


def sphere_area(d, radius):
    """Area of the (d-1)-sphere of the given radius."""
    return d * ball_volume(d, 1.0) * radius ** (d - 1)


@dataclass(frozen=True)
class EntropyReport:
    R: float
    t: float
    center: tuple
    termStress: float
    termNorm: float
    termYukawa: float
    energy: float  # energy inside the ball, same quadrature as termStress
    pointEnergyDensity: float  # T00 at the centre
    pointFieldSquared: float  # Phi^2 at the centre
    d: int = 3

    @property
    def total(self):
        return self.termStress + self.termNorm + self.termYukawa

    @property
    def ratioLargeR(self):
        den = math.pi * self.energy * self.R
        return self.total / den if den > 0 else math.nan

    @property
    def bekensteinOK(self):
        return self.total <= math.pi * self.energy * self.R * (1 + 1e-12)

    @property
    def ratioSmallR(self):
        """``S / ((pi/d)(T00 + D Phi^2) A_{d-1}(R))`` at the centre."""
        D = scaling_dimension(self.d)
        den = math.pi / self.d * (self.pointEnergyDensity + D * self.pointFieldSquared) * sphere_area(self.d, self.R)
        return self.total / den if den > 0 else math.nan

    @property
    def ratioLeadingOrder(self):
        """``S / (pi D Phi^2 V_d R^(d-1))``: tends to 1 whenever ``Phi(c) != 0``."""
        D = scaling_dimension(self.d)
        den = math.pi * D * self.pointFieldSquared * ball_volume(self.d, 1.0) * self.R ** (self.d - 1)
        return self.total / den if den > 0 else math.nan

    def to_dict(self):
        return {
            "R": self.R,
            "t": self.t,
            "center": list(self.center),
            "termStress": self.termStress,
            "termNorm": self.termNorm,
            "termYukawa": self.termYukawa,
            "total": self.total,
            "energy": self.energy,
            "ratioLargeR": self.ratioLargeR,
            "ratioSmallR": self.ratioSmallR,
            "ratioLeadingOrder": self.ratioLeadingOrder,
            "bekensteinOK": self.bekensteinOK,
        }


def _center_tuple(grid, center):
    if center is None:
        return (0.0,) * grid.d
    c = tuple(float(x) for x in center)
    if len(c) != grid.d:
        raise fld.BallOutsideGrid(f"centre needs {grid.d} coordinates")
    return c


def _ball_energy(phi, radius, center):
    grid = phi.grid
    if grid.radial_mode:
        s = _RadialSamples.of(phi, radius)
        x = s.rule.nodes
        t00 = 0.5 * (s.g**2 + s.df**2 + phi.m**2 * s.f**2)
        return float(s.rule.integrate(4 * np.pi * x * x * t00))
    chi = fld.ball_mask(grid, radius, center)
    return fld.integrate(grid, chi * fld.energy_density(phi))


def _point_values(phi, center):
    grid = phi.grid
    if grid.radial_mode:
        f0 = fld.radial_value_at_origin(grid, phi.f)
        g0 = fld.radial_value_at_origin(grid, phi.g)
        return 0.5 * (g0**2 + phi.m**2 * f0**2), f0**2
    f0 = fld.point_value(grid, phi.f, center)
    g0 = fld.point_value(grid, phi.g, center)
    grads = [fld.point_value(grid, gk, center) for gk in fld.gradient(grid, phi.f)]
    return 0.5 * (g0**2 + sum(x * x for x in grads) + phi.m**2 * f0**2), f0**2


def entropy_ball(phi, radius=1.0, center=None, t=0.0):
    """Three-term entropy of ``Phi`` (evolved to time ``t``) in ``B_R(center)``."""
    grid = phi.grid
    fld.check_ball(grid, radius, center)
    c = _center_tuple(grid, center)
    center = None if grid.radial_mode else c
    state = fld.kg_evolve(phi, t)
    terms = ball_form_terms(state, None, radius, center).scaled(2 * math.pi)
    t00, phi2 = _point_values(state, c)
    return EntropyReport(
        R=float(radius),
        t=float(t),
        center=c,
        termStress=terms.stress,
        termNorm=terms.norm,
        termYukawa=terms.yukawa,
        energy=_ball_energy(state, radius, center),
        pointEnergyDensity=float(t00),
        pointFieldSquared=float(phi2),
        d=grid.d,
    )


def relative_entropy_coherent(phi, radius=1.0):
    """Vacuum relative entropy of the coherent state of ``Phi`` on the double cone over ``B_R``."""
    return entropy_ball(phi, radius).total


def entropy_cutting_form(phi, radius=1.0, center=None):
    """``pi int_B (Psi_f g - f Psi_g)`` with ``Psi = K_m^B`` applied to the data inside ``B``."""
    grid, m = phi.grid, phi.m
    fld.check_ball(grid, radius, center)
    D = scaling_dimension(grid.d)
    if grid.radial_mode:
        s = _RadialSamples.of(phi, radius)
        x = s.rule.nodes
        lap = fld.evaluate_radial(grid, fld.radial_coefficients(grid, phi.f), x)[2]
        M = (radius**2 - x * x) / (2 * radius)
        lf = M * (lap - m * m * s.f) - (x / radius) * s.df - (D / radius) * s.f
        if m > 0:
            lf = lf - m * m / (2 * radius) * radial_green_on_ball(grid, phi.f, m, radius, x)
        integrand = M * s.g * s.g - s.f * lf
        return float(math.pi * s.rule.integrate(4 * np.pi * x * x * integrand))
    chi = fld.ball_mask(grid, radius, center)
    rho = fld.radius_from(grid, center)
    M = (radius**2 - rho**2) / (2 * radius)
    lf = apply_legendre(grid, phi.f, radius, center, m)
    if m > 0:
        lf = lf - m * m / (2 * radius) * ball_green(grid, phi.f, m, radius, center)
    return math.pi * fld.integrate(grid, chi * (M * phi.g * phi.g - phi.f * lf))


# -- radius scans --------------------------------------------------------------


@dataclass(frozen=True)
class ScanResult:
    reports: list
    largeRRatio: float  # ratio at the largest radius
    smallRRatio: float  # Richardson-extrapolated areal ratio at R -> 0
    smallRLeading: float  # Richardson-extrapolated leading-order ratio at R -> 0
    bekensteinAll: bool  # bound holds at every radius beyond the data's support
    supportRadius: float
    extras: dict = field(default_factory=dict)


def richardson_limit(radii, values):
    """Value at ``R = 0`` of the polynomial in ``R^2`` through the given points."""
    radii = np.asarray(radii, float)
    values = np.asarray(values, float)
    ok = np.isfinite(values)
    if ok.sum() == 0:
        return math.nan
    x, y = radii[ok] ** 2, values[ok]
    if x.size == 1:
        return float(y[0])
    coeffs = np.polyfit(x, y, x.size - 1)
    return float(coeffs[-1])


def radius_scan(phi, radii, center=None, t=0.0, small_count=3):
    """Entropy reports over ``radii`` with large-R and small-R diagnostics.

    The small-R limit extrapolates the ``small_count`` smallest radii.
    """
    radii = sorted(float(r) for r in radii)
    if not radii:
        raise ValueError("need at least one radius")
    reports = [entropy_ball(phi, R, center, t) for R in radii]
    grid = phi.grid
    c = None if grid.radial_mode else _center_tuple(grid, center)
    state = fld.kg_evolve(phi, t)
    supp = max(fld.support_radius(grid, state.f, c), fld.support_radius(grid, state.g, c))
    small = reports[:small_count]
    beyond = [r for r in reports if r.R >= supp]
    return ScanResult(
        reports=reports,
        largeRRatio=reports[-1].ratioLargeR,
        smallRRatio=richardson_limit([r.R for r in small], [r.ratioSmallR for r in small]),
        smallRLeading=richardson_limit([r.R for r in small], [r.ratioLeadingOrder for r in small]),
        bekensteinAll=all(r.bekensteinOK for r in beyond),
        supportRadius=supp,
    )
