"""Galerkin cross-check of the ball modular Hamiltonian.

The one-particle subspace of the unit ball is truncated to the real span of
``(phi_j, 0)`` and ``(0, phi_j)``, ``j < n``, where

    phi_j(r) = (1 - x^2)^p P_j^(2p, 1/2)(2 x^2 - 1),   x = r / r_b,

are nested radial polynomials, L2-orthogonal on the ball ``r < r_b``
(``r_b`` is the ball radius minus a two-cell margin). The modular data of
this finite standard subspace, with the true complex structure ``i_m``,
give ``-(Phi, log Delta_n Phi)`` for vectors in the span; it is compared
with ``2 pi`` times the closed-form quadratic form.
"""

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.fft as sf
from scipy.special import eval_jacobi

from . import field as fld
from .config import DEFAULT_TOLERANCES
from .errors import ConfigError, IllConditioned, ProjectionResidualTooLarge
from .massive import quadratic_form_massive
from .modular_core import (
    ComplexSpace,
    make_standard_subspace,
    modular_data,
    projection_P,
    symplectic_spectrum,
    vector_entropy,
)

ORACLE_GRID = fld.GridSpec.radial(40.0, 2**16)
MAX_BASIS = 96
FIXTURE_DEGREE = 3


def jacobi_basis(r, n, power=2, radius=1.0):
    """Values and radial derivatives of the first ``n`` basis functions, unit L2 norm."""
    x = np.asarray(r, float) / radius
    inside = x < 1
    w = np.where(inside, 1 - x * x, 0.0)
    y = 2 * x * x - 1
    a, b = 2.0 * power, 0.5
    vals, ders = [], []
    for j in range(n):
        P = eval_jacobi(j, a, b, y)
        dP = 0.0 if j == 0 else 0.5 * (j + a + b + 1) * eval_jacobi(j - 1, a + 1, b + 1, y) * 4 * x
        wp = w**power
        dwp = power * w ** (power - 1) * (-2 * x)
        vals.append(np.where(inside, P * wp, 0.0))
        ders.append(np.where(inside, (dP * wp + P * dwp) / radius, 0.0))
    vals, ders = np.array(vals), np.array(ders)
    # exact L2(R^3) norms of the Jacobi family on the ball
    norms = np.array([_jacobi_norm(j, power, radius) for j in range(n)])
    return vals / norms[:, None], ders / norms[:, None]


def _jacobi_norm(j, power, radius):
    """``||phi_j||_{L2(R^3)}`` from the Jacobi orthogonality constant."""
    a, b = 2.0 * power, 0.5
    # int_0^1 4 pi x^2 (1-x^2)^(2p) P_j(2x^2-1)^2 dx, with y = 2x^2 - 1
    h = (
        2 ** (a + b + 1)
        / (2 * j + a + b + 1)
        * math.gamma(j + a + 1)
        * math.gamma(j + b + 1)
        / (math.gamma(j + a + b + 1) * math.factorial(j))
    )
    # x^2 (1-x^2)^(2p) dx = 2^(-a-b) (1-y)^a (1+y)^b dy / 4
    scale = math.pi * 2.0 ** (-a - b)
    return math.sqrt(scale * h * radius**3)


@dataclass(frozen=True, eq=False)
class DiscretizedSubspace:
    """Truncated ``H_m(B)``: ``n`` basis functions per Cauchy component."""

    grid: fld.GridSpec
    m: float
    ball_radius: float
    n_basis: int
    power: int
    values: np.ndarray  # (n, N) basis samples on the grid
    derivatives: np.ndarray
    real_gram: np.ndarray  # Re <b_i, b_j>, 2n x 2n
    symplectic: np.ndarray  # beta(b_i, b_j)
    closed_form: np.ndarray  # matrix of the closed-form quadratic form
    mu_forms: dict = field(repr=False)
    pruned: int = 0

    @property
    def gram(self):
        """Complex Gram matrix ``<b_i, b_j>``."""
        return self.real_gram + 1j * self.symplectic

    @property
    def gram_condition(self):
        ev = np.linalg.eigvalsh(self.real_gram)
        return float(ev.max() / ev.min())

    def spectrum(self, tolerances=DEFAULT_TOLERANCES):
        return symplectic_spectrum(self.real_gram, self.symplectic, tolerances.gram_cond)

    def vector(self, coeffs):
        """Cauchy data with basis coordinates ``coeffs`` (f block then g block)."""
        c = np.asarray(coeffs, float)
        n = self.n_basis
        return fld.CauchyData(self.grid, c[:n] @ self.values, c[n:] @ self.values, self.m)

    def coordinates(self, phi):
        """Real-orthogonal projection coordinates of ``phi`` and the relative residual."""
        if phi.grid != self.grid or phi.m != self.m:
            raise fld.GridMismatch("fixture must live on the oracle grid with the oracle mass")
        bf = fld.radial_coefficients(self.grid, phi.f)
        bg = fld.radial_coefficients(self.grid, phi.g)
        B, mu, w = self.mu_forms["coeffs"], self.mu_forms["mu"], self.mu_forms["weight"]
        rhs = 0.5 * np.concatenate([(B * (w * mu)) @ bf, (B * (w / mu)) @ bg])
        x = np.linalg.solve(self.real_gram, rhs)
        norm2 = 0.5 * (np.sum(w * mu * bf * bf) + np.sum(w / mu * bg * bg))
        resid2 = max(norm2 - x @ rhs, 0.0)
        return x, (math.sqrt(resid2 / norm2) if norm2 > 0 else 0.0)

    def log_delta_form(self, x, tolerances=DEFAULT_TOLERANCES):
        """``-(h, log Delta_n h)`` for the span vector with coordinates ``x``."""
        return self.spectrum(tolerances).log_delta_form(np.asarray(x, float))

    def ambient(self):
        """Complex span ``H + i_m H`` as a :class:`ComplexSpace` on ``[B | i_m B]``."""
        G, beta = self.real_gram, self.symplectic
        k = len(G)
        J = np.block([[np.zeros((k, k)), -np.eye(k)], [np.eye(k), np.zeros((k, k))]])
        g = np.block([[G, -beta], [beta, G]])
        return ComplexSpace(J, g)

    def standard_subspace(self, tolerances=DEFAULT_TOLERANCES):
        amb = self.ambient()
        k = len(self.real_gram)
        return make_standard_subspace(amb, np.vstack([np.eye(k), np.zeros((k, k))]), tolerances)

    def generator_mismatch(self, coords, tolerances=DEFAULT_TOLERANCES):
        """Relative gap between ``i log Delta_n`` and ``-2 pi K`` applied to span vectors.

        ``K`` is the operator with ``beta(x, K y) = Q(x, y)`` for the closed-form
        quadratic form ``Q`` (the finite shadow of the generator). The gap is
        measured in the one-particle norm, vector by vector, and the median
        is returned; saturated high modes would swamp a matrix norm.
        """
        KH = self.spectrum(tolerances).generator()
        KG = -2 * np.pi * np.linalg.solve(self.symplectic, self.closed_form)
        G = self.real_gram
        gaps = []
        for x in coords:
            d, t = (KH - KG) @ x, KG @ x
            gaps.append(math.sqrt(max(d @ G @ d, 0.0) / (t @ G @ t)))
        return float(np.median(gaps)) if gaps else 0.0


def build_discretized(
    n_basis, m=0.0, grid=ORACLE_GRID, power=2, ball_radius=1.0, tolerances=DEFAULT_TOLERANCES
):
    """Assemble the truncated standard subspace for ``n_basis`` functions per component."""
    if not 1 <= n_basis <= MAX_BASIS:
        raise ConfigError(f"nBasis must lie in [1, {MAX_BASIS}]")
    if not grid.radial_mode:
        raise ConfigError("the oracle runs on radial3d grids")
    fld.check_ball(grid, ball_radius)
    r = fld.coordinates(grid)
    r_b = ball_radius - 2 * grid.spacing
    n = n_basis
    while True:
        vals, ders = jacobi_basis(r, n, power, r_b)
        dsub = _assemble(grid, m, ball_radius, n, power, vals, ders, n_basis - n)
        if dsub.gram_condition <= tolerances.gram_cond:
            return dsub
        if n == 1:
            raise IllConditioned("oracle Gram matrix is ill-conditioned even for one function")
        n -= 1


def _assemble(grid, m, radius, n, power, vals, ders, pruned):
    t = fld._tables(grid)
    r, p, wts = t["r"], t["p"], t["wts"]
    B = sf.dst(r * vals, type=2, axis=-1) / grid.N
    B[:, -1] /= 2
    mu = np.sqrt(p**2 + m * m)
    weight = 4 * np.pi * grid.spacing * wts
    Mp = (B * (weight * mu)) @ B.T
    Mm = (B * (weight / mu)) @ B.T
    vol = t["vol"]
    L2 = (vals * vol) @ vals.T
    z = np.zeros((n, n))
    G = 0.5 * np.block([[Mp, z], [z, Mm]])
    beta = np.block([[z, -0.5 * L2], [0.5 * L2, z]])
    # closed form: int M T00 + D/2 int f^2 + m^2/4 (f, G f), D = 1, ball radius R
    M = np.clip((radius**2 - r * r) / (2 * radius), 0.0, None)
    Qff = 0.5 * (ders * (vol * M)) @ ders.T + 0.5 * m * m * (vals * (vol * M)) @ vals.T + 0.5 / radius * L2
    if m > 0:
        Qff = Qff + m * m / (4 * radius) * (B * (weight / mu**2)) @ B.T
    Qgg = 0.5 * (vals * (vol * M)) @ vals.T
    Q = np.block([[Qff, z], [z, Qgg]])
    return DiscretizedSubspace(
        grid=grid,
        m=float(m),
        ball_radius=float(radius),
        n_basis=n,
        power=power,
        values=vals,
        derivatives=ders,
        real_gram=G,
        symplectic=beta,
        closed_form=0.5 * (Q + Q.T),
        mu_forms={"coeffs": B, "mu": mu, "weight": weight},
        pruned=pruned,
    )


# -- fixtures and cross-checks ---------------------------------------------------


def oracle_fixtures(count, m=0.0, grid=ORACLE_GRID, seed=0, power=2, ball_radius=1.0):
    """Random ball-supported Cauchy data in the span of the first basis functions."""
    rng = np.random.default_rng(seed)
    r = fld.coordinates(grid)
    vals, _ = jacobi_basis(r, FIXTURE_DEGREE, power, ball_radius - 2 * grid.spacing)
    out = []
    for _ in range(count):
        c = rng.normal(size=2 * FIXTURE_DEGREE)
        out.append(fld.CauchyData(grid, c[:FIXTURE_DEGREE] @ vals, c[FIXTURE_DEGREE:] @ vals, m))
    return out


@dataclass(frozen=True)
class CrosscheckRow:
    q1: float  # -(Phi, log Delta_n Phi) from the truncated modular data
    q2: float  # 2 pi x closed form
    residual: float  # projection residual of the fixture

    @property
    def deviation(self):
        return (self.q1 - self.q2) / self.q2 if self.q2 != 0 else 0.0


@dataclass(frozen=True)
class CrosscheckReport:
    n_basis: int
    m: float
    rows: list
    gram_condition: float
    saturated_modes: int
    generator_mismatch: float

    @property
    def median_deviation(self):
        return float(np.median([abs(r.deviation) for r in self.rows])) if self.rows else 0.0

    @property
    def median_signed_deviation(self):
        return float(np.median([r.deviation for r in self.rows])) if self.rows else 0.0

    def to_dict(self):
        return {
            "nBasis": self.n_basis,
            "m": self.m,
            "medianDeviation": self.median_deviation,
            "medianSignedDeviation": self.median_signed_deviation,
            "gramCondition": self.gram_condition,
            "saturatedModes": self.saturated_modes,
            "generatorMismatch": self.generator_mismatch,
            "rows": [{"q1": r.q1, "q2": r.q2, "deviation": r.deviation, "residual": r.residual} for r in self.rows],
        }


def _crosscheck(dsub, fixtures, closed, tolerances):
    spec = dsub.spectrum(tolerances)
    rows, coords = [], []
    for phi in fixtures:
        x, res = dsub.coordinates(phi)
        if res > tolerances.projection_residual:
            raise ProjectionResidualTooLarge(f"fixture projection residual {res:.2e}")
        coords.append(x)
        rows.append(CrosscheckRow(float(spec.log_delta_form(x)), float(closed(phi)), float(res)))
    return CrosscheckReport(
        n_basis=dsub.n_basis,
        m=dsub.m,
        rows=rows,
        gram_condition=spec.gram_condition,
        saturated_modes=spec.saturated,
        generator_mismatch=dsub.generator_mismatch([c for c in coords if np.any(c)], tolerances),
    )


def crosscheck_hamiltonian(dsub, fixtures, tolerances=DEFAULT_TOLERANCES):
    """Truncated ``-(Phi, log Delta Phi)`` against ``2 pi`` x the closed-form quadratic form."""
    return _crosscheck(
        dsub,
        fixtures,
        lambda phi: 2 * np.pi * quadratic_form_massive(phi, dsub.ball_radius, tolerances=tolerances).total,
        tolerances,
    )


def crosscheck_entropy(dsub, fixtures, tolerances=DEFAULT_TOLERANCES):
    """Vector entropy in the truncated subspace against the closed-form ball entropy."""
    from .entropy import entropy_ball

    return _crosscheck(dsub, fixtures, lambda phi: entropy_ball(phi, dsub.ball_radius).total, tolerances)


def dense_check(dsub, coeffs, tolerances=DEFAULT_TOLERANCES):
    """Dense-route diagnostics for small truncations.

    Returns the cutting-projection residual ``|P_H h - h| / |h|`` for the span
    vector ``h`` and the dense vector entropy (to compare with the
    symplectic-spectrum route).
    """
    H = dsub.standard_subspace(tolerances)
    md = modular_data(H, tolerances)
    k = len(dsub.real_gram)
    h = np.concatenate([np.asarray(coeffs, float), np.zeros(k)])
    r = projection_P(md) @ h - h
    g = H.ambient.g
    resid = math.sqrt(max(r @ g @ r, 0.0) / (h @ g @ h))
    return resid, vector_entropy(md, h)


def refinement_report(n_list=(12, 24, 48), masses=(0.0, 1.0), count=8, seed=0, grid=ORACLE_GRID, tolerances=DEFAULT_TOLERANCES):
    """Median deviations per (m, nBasis) for the shared fixture set."""
    out = {"grid": grid.to_dict(), "fixtures": count, "seed": seed, "cells": []}
    for m in masses:
        fixtures = oracle_fixtures(count, m, grid, seed)
        meds = []
        for n in n_list:
            rep = crosscheck_hamiltonian(build_discretized(n, m, grid, tolerances=tolerances), fixtures, tolerances)
            meds.append(rep.median_deviation)
            out["cells"].append(rep.to_dict())
        out.setdefault("trend", []).append(
            {
                "m": m,
                "nBasis": list(n_list),
                "medianDeviation": meds,
                "strictlyDecreasing": all(b < a for a, b in zip(meds, meds[1:])),
            }
        )
    return out
