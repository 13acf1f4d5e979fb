"""Massive ball generator, Helmholtz Green kernel and the quadratic form.

For a ball of radius ``R`` centred at ``c`` write ``rho = |x - c|``,
``M = (R^2 - rho^2)/(2R)`` and ``D = (d - 1)/2``. The generator acts on
Cauchy data as ``K (f, g) = (M g, L f)`` with

    L f = M (lap - m^2) f - (rho/R) d_rho f - (D/R) f - (m^2 / 2R) G * f,

where ``G`` is the Green function of ``-lap + m^2``. In ``K~_m`` the
convolution runs over all space; in ``K_m^B`` it is compressed to the ball.
The massless case drops every ``m^2`` term rather than evaluating an
inverse that does not exist.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import field as fld
from .config import DEFAULT_TOLERANCES
from .conformal import apply_legendre, scaling_dimension
from .errors import DomainError, SupportViolation
from .quadrature import CompositeGauss

EULER_GAMMA = 0.57721566490153286061
MAX_MASS_RADIUS = 300.0  # exp(m R) must stay finite in the separable Yukawa sums


# -- Bessel K0 and the Green kernel ------------------------------------------


def _k0_series(x):
    y = 0.25 * x * x
    term = np.ones_like(x)
    i0 = np.ones_like(x)
    tail = np.zeros_like(x)
    harmonic = 0.0
    for k in range(1, 40):
        term = term * y / (k * k)
        harmonic += 1.0 / k
        i0 = i0 + term
        tail = tail + term * harmonic
    return -(np.log(0.5 * x) + EULER_GAMMA) * i0 + tail


def _k0_scaled_trapezoid(x, h=0.1, tmax=6.5):
    """``e^x K0(x) = int_0^inf exp(-x (cosh t - 1)) dt`` by the trapezoid rule."""
    t = np.arange(0.0, tmax + h, h)
    w = np.full(t.size, h)
    w[0] = 0.5 * h
    return np.exp(-np.outer(x, np.cosh(t) - 1.0)) @ w


def _k0_scaled_asymptotic(x):
    total = np.ones_like(x)
    term = np.ones_like(x)
    for k in range(1, 60):
        term = term * (-((2 * k - 1) ** 2)) / (k * 8.0 * x)
        total = total + term
        if np.all(np.abs(term) < 1e-17 * np.abs(total)):
            break
    return np.sqrt(np.pi / (2.0 * x)) * total


def bessel_k0(x):
    """Modified Bessel function ``K0(x)`` for ``x > 0`` (relative accuracy ~1e-14)."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("K0 needs a positive argument")
    flat = np.atleast_1d(x).ravel()
    out = np.empty_like(flat)
    lo, mid, hi = flat <= 2.0, (flat > 2.0) & (flat < 25.0), flat >= 25.0
    out[lo] = _k0_series(flat[lo])
    out[mid] = _k0_scaled_trapezoid(flat[mid]) * np.exp(-flat[mid])
    out[hi] = _k0_scaled_asymptotic(flat[hi]) * np.exp(-flat[hi])
    return float(out[0]) if x.ndim == 0 else out.reshape(x.shape)


def bessel_k_half(x):
    """``K_{1/2}(x) = sqrt(pi / 2x) e^-x``."""
    x = np.asarray(x, dtype=float)
    return np.sqrt(np.pi / (2.0 * x)) * np.exp(-x)


def green_kernel_eval(d, m, r):
    """Green function ``G_m(r)`` of ``-lap + m^2`` in ``d`` = 2 or 3 dimensions."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("the Green kernel is evaluated at r > 0 only")
    if not m > 0:
        raise DomainError("the Green kernel needs m > 0")
    if d == 3:
        out = np.exp(-m * r) / (4.0 * np.pi * r)
    elif d == 2:
        out = bessel_k0(m * r) / (2.0 * np.pi)
    else:
        raise DomainError("Green kernel implemented for d = 2, 3")
    out = np.asarray(out)
    return float(out) if out.ndim == 0 else out


def green_kernel_bessel_form(d, m, r):
    """``(2 pi)^(-d/2) (m/r)^(d/2-1) K_(d/2-1)(m r)``, the general-d expression."""
    r = np.asarray(r, dtype=float)
    nu = 0.5 * d - 1.0
    if d == 3:
        k = bessel_k_half(m * r)
    elif d == 2:
        k = bessel_k0(m * r)
    else:
        raise DomainError("Bessel form implemented for d = 2, 3")
    out = (2 * np.pi) ** (-0.5 * d) * (m / r) ** nu * k
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class GreenKernel:
    d: int
    m: float

    def __post_init__(self):
        if self.d not in (2, 3):
            raise DomainError("Green kernel implemented for d = 2, 3")
        if not self.m > 0:
            raise DomainError("the Green kernel needs m > 0")

    def __call__(self, r):
        return green_kernel_eval(self.d, self.m, r)

    def rescaled(self, lam):
        """Kernel of mass ``lam m``; equals ``lam^(d-2) G_m(lam r)``."""
        return GreenKernel(self.d, lam * self.m)


def radial_green_mean(m, r, rp):
    """Spherical mean of the Yukawa kernel over the sphere ``|y| = rp`` seen from ``|x| = r``."""
    r, rp = np.asarray(r, float), np.asarray(rp, float)
    return (np.exp(-m * np.abs(r - rp)) - np.exp(-m * (r + rp))) / (8 * np.pi * m * r * rp)


# -- radial ball quadrature ---------------------------------------------------


@lru_cache(maxsize=64)
def _ball_rule(radius):
    panels = max(8, math.ceil(radius / 0.0625))
    return CompositeGauss(0.0, radius, panel_width=radius / panels, order=16)


@dataclass(frozen=True, eq=False)
class _RadialSamples:
    """Cauchy data evaluated at the Gauss nodes of ``[0, R]``."""

    rule: CompositeGauss
    f: np.ndarray
    df: np.ndarray
    g: np.ndarray

    @classmethod
    def of(cls, phi, radius):
        rule = _ball_rule(float(radius))
        grid = phi.grid
        f, df, _ = fld.evaluate_radial(grid, fld.radial_coefficients(grid, phi.f), rule.nodes)
        g = fld.evaluate_radial(grid, fld.radial_coefficients(grid, phi.g), rule.nodes)[0]
        return cls(rule, f, df, g)


def _yukawa_cumulants(rule, h, m):
    """Running integrals ``A(r) = int_0^r s h(s) 2 sinh(m s) ds`` and ``B(r) = int_0^r s h(s) e^(-m s) ds``."""
    x = rule.nodes
    a_vals = x * h * 2.0 * np.sinh(m * x)
    b_vals = x * h * np.exp(-m * x)
    return a_vals, b_vals


def _radial_yukawa_quadratic(rule, h, m):
    """``iint_{B x B} G_m(x - y) h(x) h(y)`` for radial ``h`` sampled at the nodes."""
    x = rule.nodes
    a_vals, _ = _yukawa_cumulants(rule, h, m)
    A = rule.cumulative_at_nodes(a_vals)
    return 4 * np.pi / m * rule.integrate(x * h * np.exp(-m * x) * A)


def radial_green_on_ball(grid, f, m, radius, points):
    """``(G_m * (chi_B f))(r)`` at the radii ``points`` (exact kernel, ball quadrature)."""
    _check_mass_radius(m, radius)
    rule = _ball_rule(float(radius))
    h = fld.evaluate_radial(grid, fld.radial_coefficients(grid, f), rule.nodes)[0]
    a_vals, b_vals = _yukawa_cumulants(rule, h, m)
    pts = np.asarray(points, float)
    inner = np.minimum(pts, radius)
    A = rule.cumulative(a_vals, inner)
    B = rule.cumulative(b_vals, inner)
    Btot = rule.integrate(b_vals)
    out = np.exp(-m * pts) * A + np.where(pts < radius, 2.0 * np.sinh(m * inner) * (Btot - B), 0.0)
    return out / (2.0 * m * pts)


def _check_mass_radius(m, radius):
    if m * radius > MAX_MASS_RADIUS:
        raise DomainError(f"m R = {m * radius:.1f} exceeds {MAX_MASS_RADIUS}; rescale the problem")


# -- Green operators on grids --------------------------------------------------


def helmholtz_multiplier(grid, f, m):
    """``mu_m^-2 f = (-lap + m^2)^-1 f`` by the grid's own spectral multiplier."""
    if not m > 0:
        raise DomainError("(-lap + m^2)^-1 needs m > 0")
    return fld.apply_multiplier(grid, f, 1.0 / (fld.wavenumber_squared(grid) + m * m))


def green_convolve(grid, f, m):
    """``G_m * f`` on all of R^d.

    Cartesian grids embed ``f`` in a box twice as large before applying
    the multiplier so periodic images sit far away; radial grids use the
    sine-basis multiplier (images only through the wall at ``R_max``).
    """
    if grid.radial_mode:
        return helmholtz_multiplier(grid, f, m)
    big = fld.GridSpec.cartesian(grid.d, 2 * grid.L, 2 * grid.N)
    lo = grid.N // 2
    sl = tuple(slice(lo, lo + grid.N) for _ in range(grid.d))
    padded = np.zeros(big.shape)
    padded[sl] = f
    return helmholtz_multiplier(big, padded, m)[sl]


def ball_green(grid, f, m, radius=1.0, center=None):
    """``chi_B G_m * (chi_B f)``: the Green operator compressed to the ball."""
    chi = fld.ball_mask(grid, radius, center)
    if grid.radial_mode:
        r = fld.coordinates(grid)
        out = np.zeros(grid.shape)
        inside = r < radius
        out[inside] = radial_green_on_ball(grid, f, m, radius, r[inside])
        return out
    return chi * green_convolve(grid, chi * f, m)


# -- generator ------------------------------------------------------------------


def apply_M(grid, g, radius=1.0, center=None):
    """Multiplication by ``M = (R^2 - rho^2)/(2R)``."""
    rho = fld.radius_from(grid, center)
    return (radius**2 - rho**2) / (2 * radius) * g


def apply_Lm(grid, f, m, radius=1.0, center=None):
    """``L_m f`` with the Helmholtz inverse taken over the whole grid."""
    out = apply_legendre(grid, f, radius, center, m)
    if m > 0:
        out = out - (m * m / (2 * radius)) * helmholtz_multiplier(grid, f, m)
    return out


@dataclass(frozen=True)
class MassiveGenerator:
    """Applier of ``K~_m`` and ``K_m^B`` for one ball and mass."""

    grid: fld.GridSpec
    m: float
    radius: float = 1.0
    center: tuple = None

    def __post_init__(self):
        if self.m < 0:
            raise DomainError("mass must be nonnegative")
        fld.check_ball(self.grid, self.radius, self.center)
        if self.center is not None:
            object.__setattr__(self, "center", tuple(float(c) for c in self.center))

    @property
    def D(self):
        return scaling_dimension(self.grid.d)

    def _check(self, phi):
        if phi.grid != self.grid:
            raise fld.GridMismatch("generator and data live on different grids")
        if phi.m != self.m:
            raise fld.GridMismatch(f"generator mass {self.m} differs from data mass {phi.m}")

    def M(self, g):
        return apply_M(self.grid, g, self.radius, self.center)

    def legendre(self, f):
        return apply_legendre(self.grid, f, self.radius, self.center, self.m)

    def apply_tilde(self, phi):
        """``K~_m`` on arbitrary Schwartz data."""
        self._check(phi)
        return phi.replace(self.M(phi.g), apply_Lm(self.grid, phi.f, self.m, self.radius, self.center))

    def apply_ball(self, phi, tolerances=DEFAULT_TOLERANCES):
        """``K_m^B`` on data supported in the ball."""
        self._check(phi)
        require_ball_support(phi, self.radius, self.center, tolerances)
        return phi.replace(self.M(phi.g), self.legendre(phi.f) - self.apply_V(phi).g)

    def apply_K0(self, phi):
        self._check(phi)
        lf = apply_legendre(self.grid, phi.f, self.radius, self.center, 0.0)
        return phi.replace(self.M(phi.g), lf)

    def apply_P(self, phi):
        """Mass perturbation ``m^2 M`` acting on ``f``, into the second slot."""
        return phi.replace(np.zeros(self.grid.shape), self.m**2 * self.M(phi.f))

    def apply_V(self, phi):
        """Green perturbation ``(m^2 / 2R) chi_B G_m chi_B`` on ``f``, into the second slot."""
        zero = np.zeros(self.grid.shape)
        if self.m == 0:
            return phi.replace(zero, zero)
        return phi.replace(zero, (self.m**2 / (2 * self.radius)) * ball_green(self.grid, phi.f, self.m, self.radius, self.center))


def require_ball_support(phi, radius, center=None, tolerances=DEFAULT_TOLERANCES):
    leak = fld.mass_outside(phi, radius, center)
    if leak > tolerances.support:
        raise SupportViolation(f"Cauchy data are not supported in the ball (outside mass {leak:.2e})")


def apply_KmB(phi, radius=1.0, center=None, tolerances=DEFAULT_TOLERANCES):
    return MassiveGenerator(phi.grid, phi.m, radius, center).apply_ball(phi, tolerances)


def apply_Ktilde(phi, radius=1.0, center=None):
    return MassiveGenerator(phi.grid, phi.m, radius, center).apply_tilde(phi)


# -- quadratic forms -------------------------------------------------------------


@dataclass(frozen=True)
class FormTerms:
    """Stress, norm and Yukawa terms of a ball quadratic form, plus their sum."""

    stress: float
    norm: float
    yukawa: float

    @property
    def total(self):
        return self.stress + self.norm + self.yukawa

    def scaled(self, c):
        return FormTerms(c * self.stress, c * self.norm, c * self.yukawa)

    def to_dict(self):
        return {"stress": self.stress, "norm": self.norm, "yukawa": self.yukawa, "total": self.total}


def _ball_terms_radial(phi, psi, radius):
    m = phi.m
    D = scaling_dimension(3)
    a = _RadialSamples.of(phi, radius)
    b = a if psi is phi else _RadialSamples.of(psi, radius)
    rule = a.rule
    x = rule.nodes
    vol = 4 * np.pi * x * x
    M = (radius**2 - x * x) / (2 * radius)
    t00 = 0.5 * (a.g * b.g + a.df * b.df + m * m * a.f * b.f)
    stress = rule.integrate(vol * M * t00)
    norm = 0.5 * D / radius * rule.integrate(vol * a.f * b.f)
    yuk = 0.0
    if m > 0:
        _check_mass_radius(m, radius)
        if psi is phi:
            q = _radial_yukawa_quadratic(rule, a.f, m)
        else:
            q = 0.25 * (
                _radial_yukawa_quadratic(rule, a.f + b.f, m) - _radial_yukawa_quadratic(rule, a.f - b.f, m)
            )
        yuk = m * m / (4 * radius) * q
    return FormTerms(float(stress), float(norm), float(yuk))


def _ball_terms_cartesian(phi, psi, radius, center):
    grid, m = phi.grid, phi.m
    D = scaling_dimension(grid.d)
    chi = fld.ball_mask(grid, radius, center)
    rho = fld.radius_from(grid, center)
    M = (radius**2 - rho**2) / (2 * radius)
    ga, gb = fld.gradient(grid, phi.f), fld.gradient(grid, psi.f)
    t00 = 0.5 * (phi.g * psi.g + sum(x * y for x, y in zip(ga, gb)) + m * m * phi.f * psi.f)
    stress = fld.integrate(grid, chi * M * t00)
    norm = 0.5 * D / radius * fld.integrate(grid, chi * phi.f * psi.f)
    yuk = 0.0
    if m > 0:
        q = fld.integrate(grid, chi * phi.f * green_convolve(grid, chi * psi.f, m))
        yuk = m * m / (4 * radius) * q
    return FormTerms(float(stress), float(norm), float(yuk))


def ball_form_terms(phi, psi=None, radius=1.0, center=None):
    """Bilinear ball form ``int_B M T00 + (D/2R) int_B f f' + (m^2/4R) iint_BxB G f f'``.

    No support check: data are cut to the ball by the integration domain.
    """
    psi = phi if psi is None else psi
    phi._check(psi)
    fld.check_ball(phi.grid, radius, center)
    if phi.grid.radial_mode:
        return _ball_terms_radial(phi, psi, radius)
    return _ball_terms_cartesian(phi, psi, radius, center)


def quadratic_form_massive(phi, radius=1.0, center=None, tolerances=DEFAULT_TOLERANCES):
    """Three-term breakdown of ``beta(Phi, K~_m Phi)`` for ball-supported data."""
    require_ball_support(phi, radius, center, tolerances)
    return ball_form_terms(phi, None, radius, center)


def beta_generator_form(phi, radius=1.0, center=None):
    """``beta(Phi, K~_m Phi)`` straight from the operator, on the grid."""
    return fld.symplectic_form(phi, apply_Ktilde(phi, radius, center))


def matrix_element_logDelta(phi, psi, radius=1.0, center=None, tolerances=DEFAULT_TOLERANCES):
    """``-Re(Phi, log Delta_{R,m} Psi)`` for data supported in the ball ``B_R``."""
    require_ball_support(phi, radius, center, tolerances)
    require_ball_support(psi, radius, center, tolerances)
    return 2 * np.pi * ball_form_terms(phi, psi, radius, center).total
