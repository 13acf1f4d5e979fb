"""Numerical tolerances shared across modules."""

from dataclasses import dataclass, fields, replace

from .errors import ConfigError


@dataclass(frozen=True)
class Tolerances:
    structure: float = 1e-12  # J^2 = -1, g(J., J.) = g
    rank_cond: float = 1e12  # condition-number ceiling for [B | JB]
    factorial: float = 1e-10  # |lambda - 1| below this is "not factorial"
    invariance: float = 1e-8
    infrared: float = 1e-6  # DC fraction allowed at m = 0, negative powers
    pole: float = 1e-14
    leakage: float = 1e-6
    support: float = 1e-8  # relative mass outside a ball still counted as inside
    gram_cond: float = 1e10
    projection_residual: float = 1e-2

    def override(self, **changes):
        """Return a copy with some tolerances replaced; unknown names are rejected."""
        known = {f.name for f in fields(self)}
        bad = set(changes) - known
        if bad:
            raise ConfigError(f"unknown tolerance(s): {sorted(bad)}")
        for key, value in changes.items():
            if not value > 0:
                raise ConfigError(f"tolerance {key} must be positive, got {value}")
        return replace(self, **{k: float(v) for k, v in changes.items()})


DEFAULT_TOLERANCES = Tolerances()
