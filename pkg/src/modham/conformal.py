"""Massless modular flow of the unit ball and its generator.

The flow acts on a massless solution by
``(V(s) Phi)(t, x) = gamma(u, v; s) Phi(Z(u, s), Z(v, s))`` in lightcone
coordinates ``u = t + r``, ``v = t - r``, with ``Z = g/f`` and the cocycle
``gamma = F(u, s) F(-v, -s)``, ``F = f^(-D)``, where

    f(z, s) = ((1 + z) + e^-s (1 - z)) / 2,
    g(z, s) = ((1 + z) - e^-s (1 - z)) / 2.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import field as fld
from .config import DEFAULT_TOLERANCES
from .errors import DomainError, PoleHit, SupportViolation, UnsupportedMode


@dataclass(frozen=True)
class FlowParams:
    s: float
    d: int = 3

    def __post_init__(self):
        if self.d < 2:
            raise DomainError("spatial dimension must be at least 2")

    @property
    def D(self):
        return scaling_dimension(self.d)


def scaling_dimension(d):
    return 0.5 * (d - 1)


def _f(z, s):
    return 0.5 * ((1 + z) + np.exp(-s) * (1 - z))


def _g(z, s):
    return 0.5 * ((1 + z) - np.exp(-s) * (1 - z))


def _check_pole(fz, tol):
    if np.any(np.abs(fz) < tol):
        raise PoleHit("flow map evaluated at its pole")


def flow_map_Z(z, s, tolerances=DEFAULT_TOLERANCES):
    fz = _f(z, s)
    _check_pole(fz, tolerances.pole)
    out = _g(z, s) / fz
    return float(out) if np.ndim(out) == 0 else out


def flow_cocycle(u, v, s, D, tolerances=DEFAULT_TOLERANCES):
    a, b = _f(u, s), _f(-np.asarray(v, float), -s)
    _check_pole(a, tolerances.pole)
    _check_pole(b, tolerances.pole)
    out = a ** (-D) * b ** (-D)
    return float(out) if np.ndim(out) == 0 else out


# -- the generator ----------------------------------------------------------


def _ball_factors(grid, radius, center):
    rho = fld.radius_from(grid, center)
    return (radius**2 - rho**2) / (2.0 * radius)


def apply_legendre(grid, f, radius=1.0, center=None, m=0.0):
    """``M (lap - m^2) f - (rho/R) d_rho f - (D/R) f`` with ``M = (R^2 - rho^2)/(2R)``.

    On the unit ball at m = 0 this is ``1/2 (1 - r^2) lap f - r d_r f - D f``.
    """
    fld.check_ball(grid, radius, center)
    D = scaling_dimension(grid.d)
    M = _ball_factors(grid, radius, center)
    lap = fld.laplacian(grid, f)
    return M * (lap - m * m * f) - fld.euler_derivative(grid, f, center, radius) - (D / radius) * f


def apply_K0(phi, radius=1.0, center=None):
    """Massless ball generator ``K_0 (f, g) = (M g, L_0 f)``."""
    if phi.m != 0:
        raise DomainError("apply_K0 needs massless data")
    M = _ball_factors(phi.grid, radius, center)
    return phi.replace(M * phi.g, apply_legendre(phi.grid, phi.f, radius, center))


# -- the geometric flow -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class FlowResult:
    data: fld.CauchyData
    s: float
    leakage: float  # relative L2 mass of the flowed data at evaluable r > 1
    evaluable: np.ndarray  # grid radii where the flowed data could be evaluated


class _RadialSolution:
    """Massless radial solution ``Phi(t, r)`` summed exactly from its sine modes."""

    def __init__(self, phi):
        grid = phi.grid
        self.grid = grid
        self.p = fld._tables(grid)["p"]
        self.a = fld.radial_coefficients(grid, phi.f)
        self.b = fld.radial_coefficients(grid, phi.g)

    def evaluate(self, t, r, chunk=128):
        """Return ``Phi, Phi_t, Phi_r`` at the paired points ``(t_i, r_i)``."""
        p = self.p
        out = np.zeros((3, t.size))
        for s in range(0, t.size, chunk):
            tt, rr = t[s : s + chunk, None], r[s : s + chunk, None]
            c, sn = np.cos(p * tt), np.sin(p * tt)
            amp = self.a * c + self.b * sn / p
            damp = -self.a * p * sn + self.b * c
            sr, cr = np.sin(p * rr), np.cos(p * rr)
            u = np.sum(amp * sr, axis=1)
            ut = np.sum(damp * sr, axis=1)
            ur = np.sum(amp * p * cr, axis=1)
            rv = rr[:, 0]
            out[0, s : s + chunk] = u / rv
            out[1, s : s + chunk] = ut / rv
            out[2, s : s + chunk] = (ur - u / rv) / rv
        return out


def flow_geometric_report(phi, s, tolerances=DEFAULT_TOLERANCES):
    """Time-zero Cauchy data of ``V(s) Phi`` plus a support-leakage diagnostic."""
    grid = phi.grid
    if not grid.radial_mode:
        raise UnsupportedMode("flow_geometric is available on radial3d grids only")
    if phi.m != 0:
        raise DomainError("the geometric flow is the massless one")
    outside = fld.mass_outside(phi, 1.0)
    if outside > tolerances.support:
        raise SupportViolation(f"Cauchy data leak outside the unit ball ({outside:.2e})")
    if s == 0:
        return FlowResult(phi, 0.0, 0.0, np.ones(grid.N, bool))
    D = scaling_dimension(grid.d)
    r = fld.coordinates(grid)
    u, v = r, -r
    fu, fv = _f(u, s), _f(-v, -s)
    ok = (fu > tolerances.pole) & (fv > tolerances.pole)
    up = np.where(ok, _g(u, s) / np.where(ok, fu, 1.0), 0.0)
    vp = np.where(ok, -_g(-v, -s) / np.where(ok, fv, 1.0), 0.0)
    # Z(v, s) = -Z(-v, -s): the same map, written to reuse f(-v, -s)
    tp, rp = 0.5 * (up + vp), 0.5 * (up - vp)
    ok &= (np.abs(tp) + rp < 2 * grid.L - 1.0) & (rp > 0)
    sol = _RadialSolution(phi)
    vals = np.zeros((3, grid.N))
    vals[:, ok] = sol.evaluate(tp[ok], rp[ok])
    Phi, Phit, Phir = vals
    Fu, Fv = fu ** (-D), fv ** (-D)
    gamma = Fu * Fv
    # d_z f(z, s) = (1 - e^-s)/2 and d_z Z(z, s) = e^-s / f(z, s)^2
    Fu_z = -D * fu ** (-D - 1) * 0.5 * (1.0 - math.exp(-s))
    Fv_z = -D * fv ** (-D - 1) * 0.5 * (1.0 - math.exp(s))
    gamma_u, gamma_v = Fu_z * Fv, -Fu * Fv_z
    Zu = math.exp(-s) / fu**2
    Zv = math.exp(s) / fv**2
    Phi_u = 0.5 * (Phit + Phir)
    Phi_v = 0.5 * (Phit - Phir)
    f_new = np.where(ok, gamma * Phi, 0.0)
    g_new = np.where(ok, (gamma_u + gamma_v) * Phi + gamma * (Phi_u * Zu + Phi_v * Zv), 0.0)
    out = phi.replace(f_new, g_new)
    ext = ok & (r > 1.0)
    num = fld.integrate(grid, np.where(ext, f_new**2 + g_new**2, 0.0))
    den = fld.integrate(grid, np.where(ok, f_new**2 + g_new**2, 0.0))
    leak = 0.0 if den == 0 else math.sqrt(num / den)
    return FlowResult(out, float(s), leak, ok)


def flow_geometric(phi, s, tolerances=DEFAULT_TOLERANCES):
    return flow_geometric_report(phi, s, tolerances).data


# -- quadratic form ---------------------------------------------------------


def quadratic_form_massless(phi, radius=1.0, center=None):
    """``int M T00 + (D/2R) int Phi^2`` over the whole grid (``M = (R^2 - r^2)/2R``).

    Equals ``beta(Phi, K_0 Phi)``; on data supported in the ball it is the
    nonnegative vacuum-entropy density integral divided by ``2 pi``.
    """
    if phi.m != 0:
        raise DomainError("quadratic_form_massless needs massless data")
    grid = phi.grid
    M = _ball_factors(grid, radius, center)
    D = scaling_dimension(grid.d)
    t00 = fld.energy_density(phi)
    return fld.integrate(grid, M * t00) + 0.5 * D / radius * fld.integrate(grid, phi.f**2)


def identity_r12(grid, f):
    """Both sides of ``int 1/2 (1-r^2)|grad f|^2 = -int 1/2 (1-r^2) f lap f + int r f f_r``."""
    w = 0.5 * (1.0 - fld.radius_from(grid) ** 2)
    lhs = fld.integrate(grid, w * fld.grad_squared(grid, f))
    rhs = -fld.integrate(grid, w * f * fld.laplacian(grid, f)) + fld.integrate(
        grid, f * fld.euler_derivative(grid, f)
    )
    return lhs, rhs


def identity_zg_residuals(points, h=1e-5, d=3):
    """Central-difference residuals of ``Z'(z, 0) = (1 - z^2)/2`` and ``gamma'(u, v; 0) = -D (u+v)/2``."""
    D = scaling_dimension(d)
    zres, gres = 0.0, 0.0
    for u, v in points:
        dz = (flow_map_Z(u, h) - flow_map_Z(u, -h)) / (2 * h)
        zres = max(zres, abs(dz - 0.5 * (1 - u * u)))
        dg = (flow_cocycle(u, v, h, D) - flow_cocycle(u, v, -h, D)) / (2 * h)
        gres = max(gres, abs(dg + 0.5 * D * (u + v)))
    return zres, gres
