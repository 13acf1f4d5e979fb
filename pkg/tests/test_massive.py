import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from modham import conformal as cf
from modham import field as fld
from modham import massive as ms
from modham.errors import DomainError, GridMismatch, SupportViolation

from conftest import bump_pair, rel
from frozen_values import BESSEL, FIXTURES, QUADRATURE

GRID = fld.GridSpec.radial(12.0, 2048)


# -- Bessel functions and Green kernels -------------------------------------------------------------


def test_bessel_k0_against_reference():
    for x, expected in BESSEL["K0"]:
        assert ms.bessel_k0(x) == pytest.approx(expected, rel=1e-12)


def test_bessel_k0_band_edges_are_continuous():
    for edge in (2.0, 25.0):
        lo, hi = ms.bessel_k0(np.nextafter(edge, 0)), ms.bessel_k0(edge)
        assert lo == pytest.approx(hi, rel=1e-12)


def test_bessel_k_half_against_reference():
    for x, expected in BESSEL["K_half"]:
        assert ms.bessel_k_half(x) == pytest.approx(expected, rel=1e-13)


def test_yukawa_closed_form_value():
    assert ms.green_kernel_eval(3, 1.0, 1.0) == pytest.approx(BESSEL["yukawa_m1_r1"], rel=1e-15)
    assert ms.green_kernel_eval(3, 1.0, 1.0) == pytest.approx(math.exp(-1) / (4 * math.pi), rel=1e-15)
    assert ms.green_kernel_eval(2, 1.5, 0.4) == pytest.approx(BESSEL["green2d_m1p5_r0p4"], rel=1e-12)


@given(st.floats(1e-3, 40.0), st.floats(0.1, 5.0))
def test_yukawa_closed_form_equals_bessel_form(r, m):
    a = ms.green_kernel_eval(3, m, r)
    b = ms.green_kernel_bessel_form(3, m, r)
    assert a == pytest.approx(b, rel=1e-12, abs=1e-300)


@given(st.sampled_from([2, 3]), st.floats(0.05, 10.0), st.floats(0.2, 4.0), st.floats(0.25, 4.0))
def test_green_kernel_scaling(d, r, m, lam):
    lhs = ms.green_kernel_eval(d, lam * m, r)
    rhs = lam ** (d - 2) * ms.green_kernel_eval(d, m, lam * r)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-300)
    assert ms.GreenKernel(d, m).rescaled(lam)(r) == pytest.approx(lhs, rel=1e-15, abs=1e-300)


def test_green_kernel_domain():
    with pytest.raises(DomainError):
        ms.GreenKernel(4, 1.0)
    with pytest.raises(DomainError):
        ms.GreenKernel(3, 0.0)


def test_spherical_mean_against_monte_carlo():
    rng = np.random.default_rng(3)
    m, r, rp = 1.3, 0.7, 0.45
    v = rng.normal(size=(400_000, 3))
    v *= rp / np.linalg.norm(v, axis=1, keepdims=True)
    d = np.linalg.norm(v - np.array([r, 0, 0]), axis=1)
    mc = np.mean(np.exp(-m * d) / (4 * np.pi * d))
    assert ms.radial_green_mean(m, r, rp) == pytest.approx(mc, rel=5e-3)


def test_helmholtz_inverse_matches_convolution_oracle():
    phi = fld.wave_from_spec(FIXTURES["bump3d"])
    h = ms.helmholtz_multiplier(phi.grid, phi.f, 1.0)
    b = fld.radial_coefficients(phi.grid, h)
    for r, expected in QUADRATURE["green_conv_bump08_m1"]:
        val = fld.evaluate_radial(phi.grid, b, np.array([max(r, 1e-12)]))[0][0]
        # (lap - m^2)^-1 = -G_m *, i.e. (-lap + m^2)^-1 = +G_m *
        assert val == pytest.approx(expected, rel=1e-8)


def test_ball_green_agrees_with_full_convolution_inside_support():
    phi = fld.radial_bump(GRID, 0.8, m=1.0)
    r = fld.coordinates(GRID)
    inside = r < 1.0
    a = ms.ball_green(GRID, phi.f, 1.0)[inside]
    b = ms.green_convolve(GRID, phi.f, 1.0)[inside]
    assert rel(a, b) < 1e-9


def test_cartesian_green_convolution_of_a_heat_kernel():
    # exp(-8 r^2) is (pi/8) times the heat kernel at t = 1/32, and e^{t lap} G_m = e^{m^2 t} G_m
    # away from the source; the padded box of period 24 still leaves images at ~e^-18
    grid = fld.GridSpec.cartesian(2, 6.0, 128)
    xs = fld.coordinates(grid)
    f = np.exp(-8 * (xs[0] ** 2 + xs[1] ** 2))
    m = 1.0
    out = ms.green_convolve(grid, f, m)
    x = xs[0][96, 64]
    images = sum(
        ms.green_kernel_eval(2, m, math.hypot(x + 24 * i, 24 * j))
        for i in range(-2, 3)
        for j in range(-2, 3)
    )
    expected = math.pi / 8 * math.exp(m * m / 32) * images
    assert out[96, 64] == pytest.approx(expected, rel=1e-9)


# -- generator -------------------------------------------------------------------------------


def test_complex_linearity_identity_massive():
    grid = fld.GridSpec.radial(12.0, 8192)
    f = fld.radial_bump(grid, 0.8, kind="gaussian-mollified-bump").f
    lhs = fld.mu_apply(grid, ms.apply_M(grid, fld.mu_apply(grid, f, 1.0, 1)), 1.0, 1)
    assert rel(lhs, -ms.apply_Lm(grid, f, 1.0)) < 1e-6


def test_decomposition_K_equals_K0_minus_P_minus_V():
    phi = bump_pair(GRID, 1.0)
    gen = ms.MassiveGenerator(GRID, 1.0)
    K = gen.apply_ball(phi)
    massless = phi.replace(m=0.0)
    K0 = cf.apply_K0(massless)
    P, V = gen.apply_P(phi), gen.apply_V(phi)
    assert rel(K.f, K0.f - P.f - V.f) < 1e-14
    assert rel(K.g, K0.g - P.g - V.g) < 1e-14
    # each term against its own definition
    r = fld.coordinates(GRID)
    assert rel(P.g, (1 - r**2) / 2 * phi.f) < 1e-14
    inside = r < 1
    G = ms.radial_green_on_ball(GRID, phi.f, 1.0, 1.0, r[inside])
    assert rel(V.g[inside], 0.5 * G) < 1e-14


@given(st.floats(0.4, 0.95), st.floats(0.4, 0.95), st.floats(-2, 2), st.sampled_from([0.5, 1.0, 2.0]))
def test_ball_generator_is_beta_symmetric(fr, gr, ga, m):
    phi = fld.radial_bump(GRID, fr, 1.0, "f", m) + fld.radial_bump(GRID, gr, ga, "g", m)
    psi = fld.radial_bump(GRID, gr, -0.4, "f", m) + fld.radial_bump(GRID, fr, 1.0, "g", m)
    gen = ms.MassiveGenerator(GRID, m)
    a = fld.symplectic_form(phi, gen.apply_ball(psi))
    b = fld.symplectic_form(psi, gen.apply_ball(phi))
    assert a == pytest.approx(b, rel=1e-7)
    # skew-Hermitian: Re <Phi, i K Psi> is symmetric
    ia = fld.inner_product(phi, fld.complex_structure(gen.apply_ball(psi))).real
    ib = fld.inner_product(psi, fld.complex_structure(gen.apply_ball(phi))).real
    assert ia == pytest.approx(ib, rel=1e-7)


def test_ball_generator_needs_ball_support():
    phi = fld.radial_bump(GRID, 1.4, m=1.0)
    with pytest.raises(SupportViolation):
        ms.apply_KmB(phi)
    assert np.isfinite(ms.apply_Ktilde(phi).g).all()


def test_generator_checks_mass_and_grid():
    gen = ms.MassiveGenerator(GRID, 1.0)
    with pytest.raises(GridMismatch):
        gen.apply_ball(fld.radial_bump(GRID, 0.8, m=0.5))
    with pytest.raises(DomainError):
        ms.MassiveGenerator(GRID, -1.0)


def test_massless_generator_equals_K0():
    phi = bump_pair(GRID, 0.0)
    a, b = ms.apply_KmB(phi), cf.apply_K0(phi)
    assert np.array_equal(a.f, b.f) and np.array_equal(a.g, b.g)


# -- quadratic forms ----------------------------------------------------------------------------------


def test_form_terms_against_quadrature_oracle():
    phi = fld.wave_from_spec(FIXTURES["bump3d"])
    t = ms.ball_form_terms(phi).scaled(2 * math.pi)
    q = QUADRATURE["bump3d_R1"]
    assert t.stress == pytest.approx(q["stress"], rel=1e-9)
    assert t.norm == pytest.approx(q["norm"], rel=1e-9)
    assert t.yukawa == pytest.approx(q["yukawa"], rel=1e-9)


@given(st.floats(0.4, 0.95), st.floats(0.4, 0.95), st.floats(-2, 2), st.sampled_from([0.0, 0.5, 1.0, 3.0]))
def test_quadratic_form_is_positive_and_equals_beta(fr, gr, ga, m):
    phi = fld.radial_bump(GRID, fr, 1.0, "f", m) + fld.radial_bump(GRID, gr, ga, "g", m)
    terms = ms.quadratic_form_massive(phi)
    assert min(terms.stress, terms.norm, terms.yukawa) >= 0 and terms.total > 0
    assert terms.total == pytest.approx(ms.beta_generator_form(phi), rel=1e-7)


def test_mass_continuity_second_order():
    base = bump_pair(GRID, 0.0)
    q0 = cf.quadratic_form_massless(base)
    errs = [abs(ms.quadratic_form_massive(base.replace(m=m)).total - q0) for m in (0.2, 0.1, 0.05)]
    for a, b in zip(errs, errs[1:]):
        assert math.log2(a / b) > 1.9


def test_matrix_element_scaling_covariance():
    grid = fld.GridSpec.radial(12.0, 4096)
    phi, psi = bump_pair(grid, 1.0), bump_pair(grid, 1.0, 0.6, 0.9, -1.0)
    base = ms.matrix_element_logDelta(phi, psi, 1.0)
    for lam in (2.0, 0.5):
        val = ms.matrix_element_logDelta(fld.dilate(phi, lam), fld.dilate(psi, lam), 1.0 / lam)
        assert val == pytest.approx(base, rel=1e-6)


def test_mass_radius_guard():
    grid = fld.GridSpec.radial(12.0, 2048)
    phi = fld.radial_bump(grid, 0.8, m=400.0)
    with pytest.raises(DomainError):
        ms.quadratic_form_massive(phi)
