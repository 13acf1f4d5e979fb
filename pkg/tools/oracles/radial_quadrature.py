"""Ball integrals, Yukawa double integrals and Fourier-space norms by adaptive quadrature.

Everything is evaluated directly from the profile formulas with
scipy.integrate.quad; no grids or transforms are involved.
"""

import math

import numpy as np
import warnings

from scipy import integrate

from fixtures import BUMP3D, MASSLESS, PAIR_A, PAIR_B, STRADDLE
from fixtures import float_component_functions as component_functions

EPS = dict(epsabs=1e-15, epsrel=1e-13, limit=400)


def _float(fn):
    return fn


def quad(fn, a, b, points=None):
    val, _ = integrate.quad(fn, a, b, points=points, **EPS)
    return val


def ball_terms(spec, R=1.0):
    """2 pi x (stress, norm, Yukawa) over B_R plus the energy inside B_R."""
    m = spec["m"]
    f, df, sf = component_functions(spec, "f")
    g, _, sg = component_functions(spec, "g")
    f, df, g = _float(f), _float(df), _float(g)
    top = R
    pts = [p for p in (sf, sg) if 0 < p < R] or None

    def t00(r):
        return 0.5 * (g(r) ** 2 + df(r) ** 2 + m * m * f(r) ** 2)

    shell = lambda r: 4 * math.pi * r * r
    stress = quad(lambda r: shell(r) * (R * R - r * r) / (2 * R) * t00(r), 0, top, pts)
    norm_int = quad(lambda r: shell(r) * f(r) ** 2, 0, top, pts)
    energy = quad(lambda r: shell(r) * t00(r), 0, top, pts)
    yuk = yukawa_double(f, m, min(R, sf)) if m > 0 else 0.0
    D = 1.0
    return {
        "stress": 2 * math.pi * stress,
        "norm": 2 * math.pi * D / (2 * R) * norm_int,
        "yukawa": 2 * math.pi * m * m / (4 * R) * yuk,
        "energy": energy,
    }


def yukawa_double(f, m, top):
    """iint_{B x B} G_m(x - y) f(x) f(y) for radial f, via the angular mean of G_m."""

    def inner(r):
        k = lambda s: s * f(s) * (math.exp(-m * (r - s)) - math.exp(-m * (r + s)))
        return quad(k, 0, r)

    # (2 pi / m) iint r s f(r) f(s) (e^{-m|r-s|} - e^{-m(r+s)}), twice the r > s half
    outer = quad(lambda r: r * f(r) * inner(r), 0, top)
    return 2 * (2 * math.pi / m) * outer


def massless_form(spec, R=1.0):
    """int_B M T00 + (D / 2R) int_B f^2 with M = (R^2 - r^2) / 2R (not scaled by 2 pi)."""
    t = ball_terms(spec, R)
    return (t["stress"] + t["norm"]) / (2 * math.pi)


def beta_pair():
    """beta((f1, 0), (0, g2)) = -1/2 int f1 g2 with f1 = bump(0.9), g2 = bump(0.7)."""
    f1, _, _ = component_functions(MASSLESS, "f")
    g2, _, _ = component_functions(MASSLESS, "g")
    f1 = _float(f1)
    g2 = lambda r: float(component_functions(MASSLESS, "g")[0](r)) / 0.8
    return -0.5 * quad(lambda r: 4 * math.pi * r * r * f1(r) * g2(r), 0, 0.7)


# -- Fourier space -----------------------------------------------------------------

P_MAX = 1200.0
PANEL = 2.0
NODES = 32


def _p_nodes():
    x, w = np.polynomial.legendre.leggauss(NODES)
    left = np.arange(0.0, P_MAX, PANEL)
    p = (left[:, None] + PANEL * (x[None, :] + 1) / 2).ravel()
    return p, np.tile(w * PANEL / 2, left.size)


def radial_ft(fn, support, p):
    """F(p) = 4 pi int f(r) r sin(p r) / p dr (unnormalised 3-d transform), tabulated."""
    warnings.simplefilter("ignore", integrate.IntegrationWarning)
    out = np.empty_like(p)
    for i, pi in enumerate(p):
        val, _ = integrate.quad(lambda r: fn(r) * r, 0, support, weight="sin", wvar=pi, limit=2000, epsabs=0, epsrel=1e-12)
        out[i] = 4 * math.pi * val / pi
    return out


def fourier_pairing(Fa, Fb, weight, p, w):
    """int weight(p) f_hat_a f_hat_b d^3p with the unitary transform."""
    return float(np.sum(w * 4 * math.pi * p * p * weight * Fa * Fb)) / (2 * math.pi) ** 3


def pair_values():
    m = PAIR_A["m"]
    p, w = _p_nodes()
    F = {}
    for name, spec in (("a", PAIR_A), ("b", PAIR_B)):
        for t in ("f", "g"):
            fn, _, sup = component_functions(spec, t)
            F[name + t] = radial_ft(fn, sup, p)
    mu = np.sqrt(p * p + m * m)
    pair = lambda x, y: 0.5 * (fourier_pairing(F[x + "f"], F[y + "f"], mu, p, w)
                               + fourier_pairing(F[x + "g"], F[y + "g"], 1 / mu, p, w))
    out = {
        "re_ab": pair("a", "b"),
        "re_aa": pair("a", "a"),
        "sobolev_plus_half_fA": fourier_pairing(F["af"], F["af"], mu, p, w),
        "sobolev_minus_half_fA": fourier_pairing(F["af"], F["af"], 1 / mu, p, w),
    }
    # (mu_1 f_A)(r) by the inverse radial transform
    pts = []
    for r in (0.0, 0.3, 0.6, 1.0, 2.0):
        kern = p * p if r == 0 else p * np.sin(p * r) / r
        pts.append([r, float(np.sum(w * 4 * math.pi * kern * mu * F["af"])) / (2 * math.pi) ** 3])
    out["mu_f_pairA"] = pts
    return out


def green_convolution(points=(0.0, 0.3, 1.0, 2.5)):
    """(G_1 * f)(r) for f = bump(0.8) in d = 3, using the angular mean of e^{-m d} / (4 pi d)."""
    f, _, sf = component_functions(BUMP3D, "f")
    f = _float(f)
    m = 1.0
    out = []
    for r in points:
        if r == 0:
            val = quad(lambda s: s * f(s) * math.exp(-m * s), 0, sf)
        else:
            k = lambda s, r=r: s * f(s) * (math.exp(-m * abs(r - s)) - math.exp(-m * (r + s))) / (2 * m * r)
            val = quad(k, 0, sf, [r] if r < sf else None)
        out.append([r, val])
    return out


def run():
    return {
        "bump3d_R1": ball_terms(BUMP3D, 1.0),
        "bump3d_R2": ball_terms(BUMP3D, 2.0),
        "straddle_R1": ball_terms(STRADDLE, 1.0),
        "massless_form_R1": massless_form(MASSLESS, 1.0),
        "beta_f1_g2": beta_pair(),
        "pairs_m1": pair_values(),
        "green_conv_bump08_m1": green_convolution(),
    }


if __name__ == "__main__":
    import json

    print(json.dumps(run(), indent=1))
