"""Fixture definitions shared by the oracle scripts and (via the frozen module) the tests.

The profiles are re-implemented here from their defining formulas so the
oracles do not import the package numerics.
"""

import math

import mpmath as mp

BUMP3D = {
    "schemaVersion": 1, "mode": "radial3d", "d": 3, "L": 12.0, "N": 2048, "m": 1.0,
    "components": [
        {"kind": "bump", "radius": 0.8, "amplitude": 1.0, "target": "f"},
        {"kind": "bump", "radius": 0.8, "amplitude": 0.5, "target": "g"},
    ],
}

# mollified bump straddling the unit sphere
STRADDLE = {
    "schemaVersion": 1, "mode": "radial3d", "d": 3, "L": 12.0, "N": 4096, "m": 1.0,
    "components": [
        {"kind": "gaussian-mollified-bump", "radius": 1.4, "amplitude": 1.0, "target": "f"},
        {"kind": "gaussian-mollified-bump", "radius": 1.2, "amplitude": -0.7, "target": "g"},
    ],
}

MASSLESS = {
    "schemaVersion": 1, "mode": "radial3d", "d": 3, "L": 12.0, "N": 2048, "m": 0.0,
    "components": [
        {"kind": "bump", "radius": 0.9, "amplitude": 1.0, "target": "f"},
        {"kind": "bump", "radius": 0.7, "amplitude": 0.8, "target": "g"},
    ],
}

# two Gaussian-mollified pairs for scalar products (same grid, m = 1)
PAIR_A = {
    "schemaVersion": 1, "mode": "radial3d", "d": 3, "L": 16.0, "N": 4096, "m": 1.0,
    "components": [
        {"kind": "gaussian-mollified-bump", "radius": 1.0, "amplitude": 1.0, "target": "f"},
        {"kind": "gaussian-mollified-bump", "radius": 0.7, "amplitude": 0.4, "target": "g"},
    ],
}
PAIR_B = {
    "schemaVersion": 1, "mode": "radial3d", "d": 3, "L": 16.0, "N": 4096, "m": 1.0,
    "components": [
        {"kind": "gaussian-mollified-bump", "radius": 0.8, "amplitude": -0.6, "target": "f"},
        {"kind": "gaussian-mollified-bump", "radius": 1.1, "amplitude": 1.0, "target": "g"},
    ],
}


def bump(r, a):
    x2 = (mp.mpf(r) / a) ** 2
    return mp.e * mp.exp(-1 / (1 - x2)) if x2 < 1 else mp.mpf(0)


def dbump(r, a):
    r = mp.mpf(r)
    x2 = (r / a) ** 2
    if x2 >= 1:
        return mp.mpf(0)
    return bump(r, a) * (-2 * r / a**2) / (1 - x2) ** 2


def mollified(r, a):
    return bump(r, a) * mp.exp(-2 * (mp.mpf(r) / a) ** 2)


def dmollified(r, a):
    r = mp.mpf(r)
    w = mp.exp(-2 * (r / a) ** 2)
    return dbump(r, a) * w + bump(r, a) * w * (-4 * r / a**2)


PROFILE = {"bump": (bump, dbump), "gaussian-mollified-bump": (mollified, dmollified)}


def component_functions(spec, target):
    """(value, derivative) callables for one Cauchy component of a radial spec."""
    parts = [c for c in spec["components"] if c.get("target", "f") == target]

    def val(r):
        return mp.fsum(c.get("amplitude", 1.0) * PROFILE[c["kind"]][0](r, c["radius"]) for c in parts)

    def der(r):
        return mp.fsum(c.get("amplitude", 1.0) * PROFILE[c["kind"]][1](r, c["radius"]) for c in parts)

    support = max([c["radius"] for c in parts], default=0.0)
    return val, der, support


def _fbump(r, a):
    x2 = (r / a) ** 2
    return math.exp(1.0 - 1.0 / (1.0 - x2)) if x2 < 1 else 0.0


def _fdbump(r, a):
    x2 = (r / a) ** 2
    return _fbump(r, a) * (-2 * r / a**2) / (1 - x2) ** 2 if x2 < 1 else 0.0


def _fmoll(r, a):
    return _fbump(r, a) * math.exp(-2 * (r / a) ** 2)


def _fdmoll(r, a):
    w = math.exp(-2 * (r / a) ** 2)
    return _fdbump(r, a) * w + _fbump(r, a) * w * (-4 * r / a**2)


FLOAT_PROFILE = {"bump": (_fbump, _fdbump), "gaussian-mollified-bump": (_fmoll, _fdmoll)}


def float_component_functions(spec, target):
    """Double-precision twin of :func:`component_functions`, for nested quadrature."""
    parts = [(c.get("amplitude", 1.0), FLOAT_PROFILE[c["kind"]], c["radius"])
             for c in spec["components"] if c.get("target", "f") == target]

    def val(r):
        return sum(a * p[0](r, rad) for a, p, rad in parts)

    def der(r):
        return sum(a * p[1](r, rad) for a, p, rad in parts)

    return val, der, max([rad for _, _, rad in parts], default=0.0)
