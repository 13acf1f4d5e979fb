import json
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from modham import entropy as en
from modham import field as fld
from modham import massive as ms
from modham.errors import BallOutsideGrid

from frozen_values import FIXTURES, QUADRATURE

FIXTURE_DIR = Path(__file__).resolve().parents[1] / "fixtures"
GRID = fld.GridSpec.radial(12.0, 4096)


def wave(m=1.0, fr=0.8, gr=0.6, ga=0.7, grid=GRID):
    return fld.radial_bump(grid, fr, 1.0, "f", m) + fld.radial_bump(grid, gr, ga, "g", m)


@pytest.mark.parametrize("name,radius", [("bump3d", 1.0), ("bump3d", 2.0)])
def test_terms_against_quadrature_oracle(name, radius):
    e = en.entropy_ball(fld.wave_from_spec(FIXTURES[name]), radius)
    q = QUADRATURE[f"{name}_R{int(radius)}"]
    assert e.termStress == pytest.approx(q["stress"], rel=1e-10)
    assert e.termNorm == pytest.approx(q["norm"], rel=1e-10)
    assert e.termYukawa == pytest.approx(q["yukawa"], rel=1e-10)
    assert e.energy == pytest.approx(q["energy"], rel=1e-10)


def test_terms_for_data_crossing_the_sphere():
    e = en.entropy_ball(fld.wave_from_spec(FIXTURES["straddle"]), 1.0)
    q = QUADRATURE["straddle_R1"]
    assert e.termStress == pytest.approx(q["stress"], rel=1e-10)
    assert e.termNorm == pytest.approx(q["norm"], rel=1e-10)
    assert e.termYukawa == pytest.approx(q["yukawa"], rel=1e-10)
    assert e.energy == pytest.approx(q["energy"], rel=1e-10)


@pytest.mark.parametrize("m", [0.0, 1.0, 2.5])
def test_entropy_triangle(m):
    phi = wave(m)
    total = en.entropy_ball(phi).total
    assert en.entropy_cutting_form(phi) == pytest.approx(total, rel=1e-10)
    assert 2 * math.pi * ms.beta_generator_form(phi) == pytest.approx(total, rel=1e-10)
    assert 2 * math.pi * ms.quadratic_form_massive(phi).total == pytest.approx(total, rel=1e-12)
    assert en.relative_entropy_coherent(phi) == total


def test_entropy_triangle_on_a_cartesian_grid():
    phi = fld.load_wave_spec(FIXTURE_DIR / "bump2d.json")
    e = en.entropy_ball(phi, 1.2, (0.0, 0.0))
    # the sharp ball mask limits cartesian quadrature to a few digits
    assert en.entropy_cutting_form(phi, 1.2, (0.0, 0.0)) == pytest.approx(e.total, rel=2e-4)


@given(st.floats(0.4, 0.95), st.floats(0.4, 0.95), st.floats(-2, 2), st.sampled_from([0.0, 0.5, 1.0]))
def test_entropy_is_positive_and_terms_nonnegative(fr, gr, ga, m):
    e = en.entropy_ball(wave(m, fr, gr, ga))
    assert e.termStress >= 0 and e.termNorm >= 0 and e.termYukawa >= 0
    assert e.total > 0
    assert (e.termYukawa == 0) == (m == 0)


def test_entropy_scaling_covariance():
    phi = fld.wave_from_spec(FIXTURES["bump3d"])
    base = en.entropy_ball(phi, 1.0)
    for lam in (0.5, 2.0):
        scaled = en.entropy_ball(fld.dilate(phi, lam), 1.0 / lam)
        assert scaled.total == pytest.approx(base.total, rel=1e-6)
        assert scaled.termYukawa == pytest.approx(base.termYukawa, rel=1e-6)


def test_entropy_translation_covariance():
    spec = json.loads((FIXTURE_DIR / "bump2d.json").read_text())
    phi = fld.wave_from_spec(spec)
    # shift by whole grid cells so the translation is exact on the lattice
    shift = (0.5, 0.25)
    for comp in spec["components"]:
        comp["center"] = [comp["center"][0] + shift[0], comp["center"][1] + shift[1]]
    moved = fld.wave_from_spec(spec)
    a = en.entropy_ball(phi, 1.2, (0.0, 0.0)).total
    b = en.entropy_ball(moved, 1.2, shift).total
    assert b == pytest.approx(a, rel=1e-12)


def test_entropy_at_time_t_uses_evolved_data():
    phi = wave()
    a = en.entropy_ball(phi, 1.0, t=0.7)
    b = en.entropy_ball(fld.kg_evolve(phi, 0.7), 1.0)
    assert a.total == pytest.approx(b.total, rel=1e-14)
    assert a.t == 0.7


def test_energy_in_a_large_ball_is_conserved():
    phi = wave()
    e0 = en.entropy_ball(phi, 6.0).energy
    for t in (1.0, 2.5):
        assert en.entropy_ball(phi, 6.0, t=t).energy == pytest.approx(e0, rel=1e-9)
    assert e0 == pytest.approx(fld.energy(phi), rel=1e-9)


# -- asymptotics ------------------------------------------------------------------------------


def test_large_radius_ratio_tends_to_one():
    phi = wave(1.0, grid=fld.GridSpec.radial(24.0, 8192))
    ratios = [en.entropy_ball(phi, R).ratioLargeR for R in (2.0, 4.0, 8.0, 16.0)]
    assert all(a < b for a, b in zip(ratios, ratios[1:]))
    assert abs(ratios[-1] - 1) < 2e-3
    # the deficit of the large-R expansion is O(1/R^2)
    gaps = [1 - r for r in ratios]
    assert gaps[-2] / gaps[-1] == pytest.approx(4.0, rel=0.05)


def test_bekenstein_bound_beyond_the_support():
    phi = wave(1.0)
    for R in (0.8, 1.0, 2.0, 4.0, 8.0):
        assert en.entropy_ball(phi, R).bekensteinOK


def test_small_radius_areal_ratio_where_energy_density_vanishes():
    phi = fld.radial_bump(fld.GridSpec.radial(12.0, 8192), 0.8, 1.0, "f", 0.0)
    scan = en.radius_scan(phi, [0.05, 0.1, 0.2])
    assert scan.smallRRatio == pytest.approx(1.0, abs=1e-5)
    assert scan.smallRLeading == pytest.approx(1.0, abs=1e-5)


def test_small_radius_limit_at_a_generic_point():
    phi = wave(1.0, grid=fld.GridSpec.radial(12.0, 8192))
    scan = en.radius_scan(phi, [0.05, 0.1, 0.2])
    r = scan.reports[0]
    D = 1.0
    expected = D * r.pointFieldSquared / (r.pointEnergyDensity + D * r.pointFieldSquared)
    assert scan.smallRRatio == pytest.approx(expected, rel=1e-4)
    assert scan.smallRLeading == pytest.approx(1.0, abs=1e-4)


def test_radius_scan_bookkeeping():
    phi = wave(1.0)
    scan = en.radius_scan(phi, [8.0, 0.1, 2.0, 0.05, 0.2])
    assert [r.R for r in scan.reports] == [0.05, 0.1, 0.2, 2.0, 8.0]
    assert scan.largeRRatio == scan.reports[-1].ratioLargeR
    # numerical support: the bump exp(1 - 1/(1 - x^2)) drops below 1e-12 of its peak
    edge = 0.8 * math.sqrt(1 - 1 / (1 + 12 * math.log(10)))
    assert scan.supportRadius == pytest.approx(edge, abs=GRID.spacing)
    assert scan.bekensteinAll
    with pytest.raises(ValueError):
        en.radius_scan(phi, [])


@given(st.lists(st.floats(0.01, 1.0), min_size=3, max_size=3, unique=True), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
def test_richardson_recovers_quadratic_in_r_squared(radii, a, b, c):
    if min(abs(x * x - y * y) for i, x in enumerate(radii) for y in radii[i + 1 :]) < 1e-3:
        return
    vals = [a + b * r**2 + c * r**4 for r in radii]
    assert en.richardson_limit(radii, vals) == pytest.approx(a, abs=1e-8 * (1 + abs(b) + abs(c)) / 1e-3)


def test_richardson_ignores_nan_entries():
    assert en.richardson_limit([0.1, 0.2], [math.nan, 2.0]) == 2.0
    assert math.isnan(en.richardson_limit([0.1], [math.nan]))


def test_report_serialisation():
    d = en.entropy_ball(wave(), 1.0).to_dict()
    assert list(d)[:8] == ["R", "t", "center", "termStress", "termNorm", "termYukawa", "total", "energy"]
    assert d["total"] == pytest.approx(d["termStress"] + d["termNorm"] + d["termYukawa"])


def test_ball_must_fit_on_the_grid():
    phi = wave()
    with pytest.raises(BallOutsideGrid):
        en.entropy_ball(phi, 20.0)
    cart = fld.load_wave_spec(FIXTURE_DIR / "bump2d.json")
    with pytest.raises(BallOutsideGrid):
        en.entropy_ball(cart, 1.0, (0.0, 0.0, 0.0))


def test_geometry_helpers():
    assert en.ball_volume(3, 2.0) == pytest.approx(4 / 3 * math.pi * 8)
    assert en.sphere_area(3, 2.0) == pytest.approx(16 * math.pi)
    assert en.sphere_area(2, 1.5) == pytest.approx(3 * math.pi)
    assert np.isclose(en.ball_volume(2), math.pi)
