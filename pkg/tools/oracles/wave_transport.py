"""Massless radial waves by d'Alembert's formula for u = r Phi on the half line.

u_tt = u_rr with u(0) = 0, so the odd extensions u0(x) = x f(|x|) and
v0(x) = x g(|x|) are transported along characteristics:
    r Phi(t, r) = (u0(r + t) + u0(r - t)) / 2 + 1/2 int_{r-t}^{r+t} v0.
"""

import warnings

from scipy import integrate

from fixtures import float_component_functions

SPEC = {
    "schemaVersion": 1, "mode": "radial3d", "d": 3, "L": 12.0, "N": 2048, "m": 0.0,
    "components": [
        {"kind": "bump", "radius": 0.8, "amplitude": 1.0, "target": "f"},
        {"kind": "bump", "radius": 0.6, "amplitude": 0.7, "target": "g"},
    ],
}
TIMES = [0.5, 1.5, 4.0]
RADII = [0.1, 0.5, 1.0, 1.7, 3.9, 4.3]


def solution(t, r):
    warnings.simplefilter("ignore", integrate.IntegrationWarning)
    f, _, _ = float_component_functions(SPEC, "f")
    g, _, _ = float_component_functions(SPEC, "g")
    u0 = lambda x: x * f(abs(x))
    v0 = lambda x: x * g(abs(x))
    pts = [p for p in (-0.8, -0.6, 0.0, 0.6, 0.8) if r - t < p < r + t]
    integral, _ = integrate.quad(v0, r - t, r + t, points=pts or None, epsabs=1e-15, epsrel=1e-13, limit=200)
    return (0.5 * (u0(r + t) + u0(r - t)) + 0.5 * integral) / r


def run():
    return {"spec": SPEC, "values": [[t, r, solution(t, r)] for t in TIMES for r in RADII]}


if __name__ == "__main__":
    import json

    print(json.dumps(run(), indent=1))
