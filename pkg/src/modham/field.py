"""Klein-Gordon Cauchy data on spectral grids.

Two discretisations are supported:

* ``cartesian``: a periodic box ``[-L, L)^d`` (d = 2 or 3) with FFTs;
* ``radial3d``: spherically symmetric data in three dimensions on the
  offset grid ``r_j = (j + 1/2) dr`` of ``[0, R_max]``. The substitution
  ``u = r f`` turns the radial Laplacian into ``u''/r`` and the sine modes
  ``sin(p_k r)``, ``p_k = k pi / R_max``, diagonalise it (Dirichlet at both
  ends, which is the odd extension through the origin).

Fields are plain numpy arrays sampled on the grid; :class:`CauchyData`
bundles the pair ``(f, g) = (Phi, d_t Phi)`` at one time with the mass.
"""

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np
import scipy.fft as sf

from .config import DEFAULT_TOLERANCES
from .errors import (
    BallOutsideGrid,
    ConfigError,
    GridMismatch,
    MasslessInfrared,
    SupportOverflow,
    UnsupportedMode,
)

SCHEMA_VERSION = 1
MODES = ("cartesian", "radial3d")


@dataclass(frozen=True)
class GridSpec:
    """Discretisation of R^d.

    ``L`` is the box half-length in cartesian mode and the truncation radius
    ``R_max`` in radial mode; ``N`` is the number of points per axis.
    """

    mode: str
    d: int
    L: float
    N: int

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"grid mode must be one of {MODES}, got {self.mode!r}")
        if self.mode == "radial3d" and self.d != 3:
            raise ConfigError("radial3d grids are three-dimensional")
        if self.mode == "cartesian" and self.d not in (2, 3):
            raise ConfigError("cartesian grids need d = 2 or 3")
        if self.N < 16 or self.N & (self.N - 1):
            raise ConfigError(f"N must be a power of two >= 16, got {self.N}")
        if not self.L > 1:
            raise ConfigError("the unit ball must fit strictly inside the grid (L > 1)")
        object.__setattr__(self, "L", float(self.L))

    @classmethod
    def radial(cls, r_max, n):
        return cls("radial3d", 3, r_max, n)

    @classmethod
    def cartesian(cls, d, half_length, n):
        return cls("cartesian", d, half_length, n)

    @property
    def radial_mode(self):
        return self.mode == "radial3d"

    @property
    def spacing(self):
        return self.L / self.N if self.radial_mode else 2 * self.L / self.N

    @property
    def shape(self):
        return (self.N,) if self.radial_mode else (self.N,) * self.d

    def to_dict(self):
        return {"mode": self.mode, "d": self.d, "L": self.L, "N": self.N}


@lru_cache(maxsize=32)
def _tables(grid):
    """Coordinates and spectral tables for a grid (cached, read-only)."""
    t = {}
    if grid.radial_mode:
        dr = grid.spacing
        r = (np.arange(grid.N) + 0.5) * dr
        p = np.arange(1, grid.N + 1) * np.pi / grid.L
        wts = np.full(grid.N, grid.N / 2.0)
        wts[-1] = grid.N
        t.update(r=r, p=p, p2=p**2, wts=wts, vol=4 * np.pi * r**2 * dr)
    else:
        dx = grid.spacing
        x = -grid.L + dx * np.arange(grid.N)
        k = 2 * np.pi * sf.fftfreq(grid.N, d=dx)
        ks = np.meshgrid(*([k] * grid.d), indexing="ij")
        xs = np.meshgrid(*([x] * grid.d), indexing="ij")
        kd = k.copy()
        kd[grid.N // 2] = 0.0  # odd derivatives drop the Nyquist mode
        kds = np.meshgrid(*([kd] * grid.d), indexing="ij")
        t.update(x=x, k=k, ks=ks, kds=kds, xs=xs, p2=sum(q**2 for q in ks), cell=dx**grid.d)
    for v in t.values():
        if isinstance(v, np.ndarray):
            v.setflags(write=False)
        elif isinstance(v, list):
            for a in v:
                a.setflags(write=False)
    return t


def coordinates(grid):
    """Radial nodes (radial mode) or the list of coordinate meshes (cartesian)."""
    t = _tables(grid)
    return t["r"] if grid.radial_mode else t["xs"]


def radius_from(grid, center=None):
    """Distance of every grid point from ``center`` (origin by default)."""
    if grid.radial_mode:
        _require_origin(center)
        return _tables(grid)["r"]
    c = np.zeros(grid.d) if center is None else np.asarray(center, float)
    xs = _tables(grid)["xs"]
    return np.sqrt(sum((x - ci) ** 2 for x, ci in zip(xs, c)))


def _require_origin(center):
    if center is not None and np.any(np.asarray(center, float) != 0):
        raise UnsupportedMode("radial3d grids only support balls centred at the origin")


# -- spectral transforms ----------------------------------------------------


def radial_coefficients(grid, f):
    """Sine coefficients ``b_k`` with ``r f(r) = sum_k b_k sin(p_k r)``."""
    u = _tables(grid)["r"] * f
    b = sf.dst(u, type=2) / grid.N
    b[..., -1] /= 2
    return b


def radial_synthesis(grid, b):
    """Inverse of :func:`radial_coefficients` (returns ``f`` on the grid)."""
    x = b / 2.0
    x[..., -1] = b[..., -1]
    return sf.dst(x, type=3) / _tables(grid)["r"]


def _cosine_sum(grid, c):
    """``sum_k c_k cos(p_k r_j)`` on the grid (the k = N term vanishes there)."""
    x = np.zeros_like(c)
    x[..., 1:] = c[..., :-1] / 2.0
    return sf.dct(x, type=3)


def _sine_sum(grid, c):
    x = c / 2.0
    x[..., -1] = c[..., -1]
    return sf.dst(x, type=3)


def forward(grid, f):
    return radial_coefficients(grid, f) if grid.radial_mode else sf.fftn(f)


def inverse(grid, c):
    return radial_synthesis(grid, c) if grid.radial_mode else sf.ifftn(c).real


def wavenumber_squared(grid):
    return _tables(grid)["p2"]


def apply_multiplier(grid, f, values):
    """Multiply the spectral coefficients of ``f`` by ``values`` (same layout)."""
    return inverse(grid, forward(grid, f) * values)


def laplacian(grid, f):
    return apply_multiplier(grid, f, -wavenumber_squared(grid))


def radial_derivative(grid, f):
    """``f'(r)`` on a radial grid."""
    t = _tables(grid)
    b = radial_coefficients(grid, f)
    du = _cosine_sum(grid, b * t["p"])
    return (du - f) / t["r"]


def gradient(grid, f):
    """List of the cartesian partial derivatives of ``f``."""
    F = sf.fftn(f)
    return [sf.ifftn(1j * kd * F).real for kd in _tables(grid)["kds"]]


def euler_derivative(grid, f, center=None, scale=1.0):
    """``((x - c)/scale) . grad f``; ``r d_r f`` in radial mode."""
    if grid.radial_mode:
        _require_origin(center)
        return _tables(grid)["r"] * radial_derivative(grid, f) / scale
    c = np.zeros(grid.d) if center is None else np.asarray(center, float)
    xs = _tables(grid)["xs"]
    return sum((x - ci) * gk for x, ci, gk in zip(xs, c, gradient(grid, f))) / scale


def grad_squared(grid, f):
    if grid.radial_mode:
        return radial_derivative(grid, f) ** 2
    return sum(gk**2 for gk in gradient(grid, f))


def integrate(grid, values):
    """Quadrature over the whole grid (midpoint in r / trapezoid on the torus)."""
    t = _tables(grid)
    if grid.radial_mode:
        return float(np.dot(t["vol"], values))
    return float(np.sum(values) * t["cell"])


def l2_pairing(grid, a, b):
    return integrate(grid, a * b)


def spectral_pairing(grid, a, b, weight):
    """``int conj(a_hat) weight b_hat dp`` for real fields (Parseval)."""
    if grid.radial_mode:
        t = _tables(grid)
        ca, cb = radial_coefficients(grid, a), radial_coefficients(grid, b)
        return float(4 * np.pi * grid.spacing * np.sum(ca * cb * t["wts"] * weight))
    fa, fb = sf.fftn(a), sf.fftn(b)
    cell = _tables(grid)["cell"]
    return float(np.sum((np.conj(fa) * fb).real * weight) * cell / fa.size)


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Spectral coefficients of a real field (sine modes or FFT modes)."""

    grid: GridSpec
    coefficients: np.ndarray

    @property
    def real_symmetric(self):
        """Whether the coefficients come from a real field (always true here)."""
        return True

    @classmethod
    def from_samples(cls, grid, f):
        return cls(grid, forward(grid, np.asarray(f, float)))

    def to_samples(self):
        return inverse(self.grid, self.coefficients)


# -- radial series evaluation off the grid ----------------------------------


def radial_series(grid, f):
    """Sine coefficients of ``u = r f`` (handy for repeated off-grid evaluation)."""
    return radial_coefficients(grid, f)


def evaluate_radial(grid, coeffs, points, chunk=256):
    """Evaluate ``f``, ``f'`` and ``lap f`` at arbitrary radii ``points > 0``.

    ``coeffs`` are sine coefficients of ``u = r f``; the series is summed
    exactly, so band-limited data are reproduced to rounding error.
    """
    p = _tables(grid)["p"]
    pts = np.asarray(points, float)
    u = np.empty(pts.shape)
    du = np.empty(pts.shape)
    d2u = np.empty(pts.shape)
    for s in range(0, pts.size, chunk):
        rr = pts.ravel()[s : s + chunk]
        ph = np.outer(rr, p)
        sn, cs = np.sin(ph), np.cos(ph)
        u.ravel()[s : s + chunk] = sn @ coeffs
        du.ravel()[s : s + chunk] = cs @ (coeffs * p)
        d2u.ravel()[s : s + chunk] = -(sn @ (coeffs * p**2))
    f = u / pts
    return f, (du - f) / pts, d2u / pts


def radial_value_at_origin(grid, f):
    """``f(0) = u'(0) = sum_k b_k p_k``."""
    return float(np.dot(radial_coefficients(grid, f), _tables(grid)["p"]))


# -- Cauchy data ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CauchyData:
    """Cauchy data ``(f, g)`` of a Klein-Gordon wave of mass ``m``."""

    grid: GridSpec
    f: np.ndarray
    g: np.ndarray
    m: float = 0.0

    def __post_init__(self):
        f = np.array(self.f, dtype=float)
        g = np.array(self.g, dtype=float)
        if f.shape != self.grid.shape or g.shape != self.grid.shape:
            raise GridMismatch(f"fields must have shape {self.grid.shape}")
        if not (np.all(np.isfinite(f)) and np.all(np.isfinite(g))):
            raise ValueError("Cauchy data must be finite")
        if not self.m >= 0:
            raise ValueError("mass must be nonnegative")
        f.setflags(write=False)
        g.setflags(write=False)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "m", float(self.m))

    def replace(self, f=None, g=None, m=None):
        return CauchyData(
            self.grid, self.f if f is None else f, self.g if g is None else g, self.m if m is None else m
        )

    @classmethod
    def zeros(cls, grid, m=0.0):
        return cls(grid, np.zeros(grid.shape), np.zeros(grid.shape), m)

    def _check(self, other):
        if other.grid != self.grid or other.m != self.m:
            raise GridMismatch("Cauchy data live on different grids or masses")

    def __add__(self, other):
        self._check(other)
        return self.replace(self.f + other.f, self.g + other.g)

    def __sub__(self, other):
        self._check(other)
        return self.replace(self.f - other.f, self.g - other.g)

    def __mul__(self, c):
        return self.replace(c * self.f, c * self.g)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0


def _omega(grid, m):
    return np.sqrt(wavenumber_squared(grid) + m * m)


def kg_evolve(phi, t):
    """Exact spectral Klein-Gordon evolution by time ``t``."""
    if t == 0:
        return phi
    grid = phi.grid
    w = _omega(grid, phi.m)
    a, b = forward(grid, phi.f), forward(grid, phi.g)
    c, s = np.cos(w * t), np.sin(w * t)
    with np.errstate(divide="ignore", invalid="ignore"):
        sinc = np.where(w > 0, s / np.where(w > 0, w, 1.0), t)
    f = inverse(grid, c * a + sinc * b)
    g = inverse(grid, -w * s * a + c * b)
    return phi.replace(f, g)


def infrared_fraction(grid, f):
    """Share of the DC mode in ``||f||^2`` (0 on radial grids, which have none)."""
    if grid.radial_mode:
        return 0.0
    F = sf.fftn(f)
    total = float(np.sum(np.abs(F) ** 2))
    return float(np.abs(F.flat[0]) ** 2 / total) if total > 0 else 0.0


def _mu_power(grid, f, m, power, tolerances):
    vals = wavenumber_squared(grid) + m * m
    if m == 0 and power < 0 and not grid.radial_mode:
        frac = infrared_fraction(grid, f)
        if frac > tolerances.infrared:
            raise MasslessInfrared(
                f"DC fraction {frac:.3e} exceeds {tolerances.infrared:.1e} at m = 0"
            )
        vals = vals.copy()
        vals.flat[0] = 1.0
        out = vals ** (power / 2.0)
        out.flat[0] = 0.0
        return out
    return vals ** (power / 2.0)


def sobolev_norm(grid, f, s, m, tolerances=DEFAULT_TOLERANCES):
    """Squared norm ``int (|p|^2 + m^2)^s |f_hat(p)|^2 dp``."""
    weight = _mu_power(grid, f, m, 2.0 * s, tolerances)
    return spectral_pairing(grid, f, f, weight)


def mu_apply(grid, f, m, power, tolerances=DEFAULT_TOLERANCES):
    """Apply ``(-lap + m^2)^(power/2)``."""
    if power == 0:
        return np.array(f, dtype=float)
    return apply_multiplier(grid, f, _mu_power(grid, f, m, power, tolerances))


def complex_structure(phi, tolerances=DEFAULT_TOLERANCES):
    """``i_m (f, g) = (mu^-1 g, -mu f)``."""
    grid, m = phi.grid, phi.m
    return phi.replace(mu_apply(grid, phi.g, m, -1, tolerances), -mu_apply(grid, phi.f, m, 1, tolerances))


def symplectic_form(phi, psi):
    """``beta(Phi, Psi) = 1/2 int (f2 g1 - f1 g2)``; independent of the mass."""
    if phi.grid != psi.grid:
        raise GridMismatch("Cauchy data live on different grids")
    return 0.5 * integrate(phi.grid, psi.f * phi.g - phi.f * psi.g)


def inner_product(phi, psi, tolerances=DEFAULT_TOLERANCES):
    """One-particle scalar product (antilinear in ``phi``)."""
    phi._check(psi)
    grid, m = phi.grid, phi.m
    re = 0.5 * (
        spectral_pairing(grid, phi.f, psi.f, _mu_power(grid, psi.f, m, 1, tolerances))
        + spectral_pairing(grid, phi.g, psi.g, _mu_power(grid, psi.g, m, -1, tolerances))
    )
    return complex(re, symplectic_form(phi, psi))


def energy_density(phi, t00_mass=None):
    """``T00 = 1/2 (g^2 + |grad f|^2 + m^2 f^2)`` on the grid."""
    m = phi.m if t00_mass is None else t00_mass
    return 0.5 * (phi.g**2 + grad_squared(phi.grid, phi.f) + m * m * phi.f**2)


def energy(phi):
    """Total energy, summed in spectral space so it is exactly conserved by kg_evolve."""
    grid = phi.grid
    w2 = wavenumber_squared(grid) + phi.m**2
    return 0.5 * (spectral_pairing(grid, phi.g, phi.g, 1.0) + spectral_pairing(grid, phi.f, phi.f, w2))


# -- balls ------------------------------------------------------------------


def check_ball(grid, radius, center=None):
    if not radius > 0:
        raise BallOutsideGrid("ball radius must be positive")
    if grid.radial_mode:
        _require_origin(center)
        if radius >= grid.L:
            raise BallOutsideGrid(f"ball radius {radius} does not fit in R_max = {grid.L}")
        return
    c = np.zeros(grid.d) if center is None else np.asarray(center, float)
    if c.shape != (grid.d,):
        raise BallOutsideGrid(f"ball centre must have {grid.d} coordinates")
    if np.any(np.abs(c) + radius >= grid.L):
        raise BallOutsideGrid("ball does not fit inside the periodic box")


def ball_mask(grid, radius, center=None):
    check_ball(grid, radius, center)
    return (radius_from(grid, center) < radius).astype(float)


def cut_to_ball(phi, radius=1.0, center=None):
    """Multiply both components by the ball's characteristic function."""
    chi = ball_mask(phi.grid, radius, center)
    return phi.replace(phi.f * chi, phi.g * chi)


def support_radius(grid, values, center=None, rel=1e-12):
    """Largest distance from ``center`` where ``|values|`` exceeds ``rel * max``."""
    a = np.abs(values)
    top = a.max()
    if top == 0:
        return 0.0
    rad = radius_from(grid, center)
    return float(rad[a > rel * top].max())


def mass_outside(phi, radius, center=None):
    """Relative L2 mass of ``(f, g)`` outside a ball."""
    out = 1.0 - ball_mask(phi.grid, radius, center)
    num = integrate(phi.grid, (phi.f**2 + phi.g**2) * out)
    den = integrate(phi.grid, phi.f**2 + phi.g**2)
    return 0.0 if den == 0 else math.sqrt(num / den)


# -- dilations --------------------------------------------------------------


def _trig_eval_matrix(grid, pts):
    """Rows evaluate the periodic trigonometric interpolant at ``pts``."""
    t = _tables(grid)
    k = t["k"]
    ph = np.outer(pts - t["x"][0], k)
    E = np.exp(1j * ph) / grid.N
    nyq = grid.N // 2
    E[:, nyq] = np.cos(ph[:, nyq]) / grid.N
    return E


def point_value(grid, values, point):
    """Spectral interpolant of a cartesian field at one point."""
    F = sf.fftn(values)
    for x in np.asarray(point, float):
        F = np.tensordot(_trig_eval_matrix(grid, np.array([x]))[0], F, axes=([0], [0]))
    return float(np.real(F))


def _resample(grid, values, lam):
    """``values(lam * x)`` on the same grid; zero where ``lam * x`` leaves it."""
    if grid.radial_mode:
        r = _tables(grid)["r"]
        pts = lam * r
        inside = pts < grid.L
        out = np.zeros_like(r)
        b = radial_coefficients(grid, values)
        out[inside] = evaluate_radial(grid, b, pts[inside])[0]
        return out
    x = _tables(grid)["x"]
    pts = lam * x
    E = _trig_eval_matrix(grid, pts)
    E[np.abs(pts) >= grid.L] = 0.0
    F = sf.fftn(values)
    for axis in range(grid.d):
        F = np.moveaxis(np.tensordot(E, F, axes=([1], [axis])), 0, axis)
    return F.real


def dilate(phi, lam):
    """``delta_lam: (f, g, m) -> (lam^D f(lam x), lam^(D+1) g(lam x), lam m)``."""
    if not lam > 0:
        raise ValueError("dilation factor must be positive")
    if lam == 1:
        return phi
    grid = phi.grid
    D = 0.5 * (grid.d - 1)
    supp = max(support_radius(grid, phi.f), support_radius(grid, phi.g))
    limit = grid.L if grid.radial_mode else grid.L / math.sqrt(grid.d)
    if not grid.radial_mode:
        amax = max(_axis_extent(grid, phi.f), _axis_extent(grid, phi.g))
        if amax / lam >= grid.L * (1 - 2.0 / grid.N):
            raise SupportOverflow("dilated data would leave the periodic box")
    elif supp / lam >= limit * (1 - 2.0 / grid.N):
        raise SupportOverflow("dilated data would leave the radial grid")
    f = lam**D * _resample(grid, phi.f, lam)
    g = lam ** (D + 1) * _resample(grid, phi.g, lam)
    return CauchyData(grid, f, g, lam * phi.m)


def _axis_extent(grid, values, rel=1e-12):
    a = np.abs(values)
    if a.max() == 0:
        return 0.0
    mask = a > rel * a.max()
    return float(max(np.abs(x[mask]).max() for x in _tables(grid)["xs"]))


# -- test fields and wave specs ---------------------------------------------


def bump_profile(rho, radius):
    """``exp(1 - 1/(1 - (rho/a)^2))`` inside ``rho < a``, 0 outside (peak 1)."""
    x2 = (np.asarray(rho, float) / radius) ** 2
    out = np.zeros_like(x2)
    inside = x2 < 1
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - x2[inside]))
    return out


def mollified_bump_profile(rho, radius):
    """Bump multiplied by a Gaussian of width ``radius/2`` (still compact, smooth)."""
    rho = np.asarray(rho, float)
    return bump_profile(rho, radius) * np.exp(-2.0 * (rho / radius) ** 2)


PROFILES = {"bump": bump_profile, "gaussian-mollified-bump": mollified_bump_profile}


def _component_values(grid, comp):
    kind = comp.get("kind")
    if kind == "sum":
        parts = comp.get("components")
        if not isinstance(parts, list) or not parts:
            raise ConfigError("a 'sum' component needs a non-empty 'components' list")
        total = {"f": np.zeros(grid.shape), "g": np.zeros(grid.shape)}
        for part in parts:
            sub = _component_values(grid, part)
            total["f"] += sub["f"]
            total["g"] += sub["g"]
        return total
    if kind not in PROFILES:
        raise ConfigError(f"unknown component kind {kind!r}")
    try:
        radius = float(comp["radius"])
        amplitude = float(comp.get("amplitude", 1.0))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad component {comp!r}: {exc}") from exc
    if not radius > 0:
        raise ConfigError("component radius must be positive")
    target = comp.get("target", "f")
    if target not in ("f", "g"):
        raise ConfigError("component target must be 'f' or 'g'")
    center = comp.get("center")
    if grid.radial_mode:
        if center is not None and np.any(np.asarray(center, float) != 0):
            raise ConfigError("radial3d components must be centred at the origin")
        rho = _tables(grid)["r"]
    else:
        c = np.zeros(grid.d) if center is None else np.asarray(center, float)
        if c.shape != (grid.d,):
            raise ConfigError(f"component centre needs {grid.d} coordinates")
        rho = radius_from(grid, c)
    values = amplitude * PROFILES[kind](rho, radius)
    zero = np.zeros(grid.shape)
    return {"f": values, "g": zero} if target == "f" else {"f": zero, "g": values}


def wave_from_spec(spec):
    """Build :class:`CauchyData` from a wave-spec mapping (see README)."""
    if not isinstance(spec, dict):
        raise ConfigError("wave spec must be a JSON object")
    version = spec.get("schemaVersion", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schemaVersion {version}")
    try:
        mode = spec["mode"]
        d = int(spec.get("d", 3))
        L = float(spec.get("L", spec.get("R_max", 0)))
        N = int(spec["N"])
        m = float(spec.get("m", 0.0))
        comps = spec["components"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"wave spec is missing or has a bad field: {exc}") from exc
    if m < 0:
        raise ConfigError("mass must be nonnegative")
    grid = GridSpec(mode, d, L, N)
    values = _component_values(grid, {"kind": "sum", "components": comps})
    return CauchyData(grid, values["f"], values["g"], m)


def load_wave_spec(path):
    try:
        spec = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read wave spec {path}: {exc}") from exc
    return wave_from_spec(spec)


def radial_bump(grid, radius=0.8, amplitude=1.0, target="f", m=0.0, kind="bump"):
    """Convenience: a single centred bump as Cauchy data."""
    vals = _component_values(grid, {"kind": kind, "radius": radius, "amplitude": amplitude, "target": target})
    return CauchyData(grid, vals["f"], vals["g"], m)
