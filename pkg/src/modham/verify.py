"""Invariant battery shared by the ``verify`` subcommand and the test suite.

Every check returns a measured residual which is compared with a threshold.
Checks are small enough to run in seconds; heavier convergence studies live
in the test suite and the ``oracle`` subcommand.
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from . import conformal as cf
from . import entropy as en
from . import field as fld
from . import massive as ms
from . import modular_core as mc
from . import oracle as orc


@dataclass(frozen=True)
class CheckResult:
    module: str
    name: str
    residual: float
    threshold: float
    seconds: float

    @property
    def passed(self):
        return bool(np.isfinite(self.residual) and self.residual <= self.threshold)

    def to_dict(self):
        return {
            "module": self.module,
            "name": self.name,
            "residual": self.residual,
            "threshold": self.threshold,
            "passed": self.passed,
        }


def _rel(a, b):
    a, b = np.asarray(a, float), np.asarray(b, float)
    scale = max(np.abs(b).max(), 1e-300)
    return float(np.abs(a - b).max() / scale)


# -- fixtures -------------------------------------------------------------------


def _radial_pair(m, grid=None):
    grid = grid or fld.GridSpec.radial(12.0, 2048)
    phi = fld.radial_bump(grid, 0.8, 1.0, "f", m) + fld.radial_bump(grid, 0.6, 0.7, "g", m)
    psi = fld.radial_bump(grid, 0.9, -0.6, "f", m) + fld.radial_bump(grid, 0.7, 1.2, "g", m)
    return phi, psi


def _modular_fixture(seed, n=4, random_metric=True):
    rng = np.random.default_rng(seed)
    amb = mc.ComplexSpace.random_compatible(n, rng) if random_metric else mc.ComplexSpace.standard(n)
    H = mc.random_standard_subspace(n, rng, amb)
    return mc.modular_data(H, require_factorial=True), rng


# -- modular_core -----------------------------------------------------------------


def check_tomita_polar(seed):
    md, _ = _modular_fixture(seed)
    J = md.ambient.J
    half = md.function(np.sqrt)
    a = _rel(md.tomita, md.jconj @ half)
    b = _rel(md.jconj @ md.delta @ md.jconj, md.function(lambda l: 1 / l))
    return max(a, b)


def check_cutting_projection(seed):
    md, rng = _modular_fixture(seed)
    H = md.subspace
    P = mc.projection_P(md)
    E = mc.projection_E(md)
    a = _rel(P, -E @ mc.coth_half_log(md))
    Hp = H.symplectic_complement()
    h = H.basis @ rng.normal(size=H.dim)
    hp = Hp @ rng.normal(size=Hp.shape[1])
    return max(a, _rel(P @ (h + hp), h))


def check_entropy_routes(seed):
    md, rng = _modular_fixture(seed)
    k = rng.normal(size=md.ambient.real_dim)
    s1, s2 = mc.vector_entropy(md, k), mc.vector_entropy_direct(md, k)
    return abs(s1 - s2) / max(abs(s2), 1e-300) + (0.0 if s1 >= -1e-12 else 1.0)


def check_symplectic_route(seed):
    md, rng = _modular_fixture(seed)
    G, beta = mc.subspace_forms(md.subspace)
    spec = mc.symplectic_spectrum(G, beta)
    x = rng.normal(size=md.subspace.dim)
    h = md.subspace.basis @ x
    dense = -(h @ md.ambient.g @ md.log_delta() @ h)
    return abs(spec.log_delta_form(x) - dense) / abs(dense)


def check_passivity(seed):
    md, _ = _modular_fixture(seed)
    rep = mc.passivity_check(md, md.log_delta(), n=1, samples=200, rng=np.random.default_rng(seed))
    return max(rep.max_value, 0.0)


def check_invariance_equivalence(seed):
    md, _ = _modular_fixture(seed)
    rep = mc.invariance_equivalence_check(md.subspace, md.log_delta())
    return 0.0 if rep.consistent and rep.group_invariant else 1.0


# -- field ----------------------------------------------------------------------------


def check_energy_conservation(seed):
    phi, _ = _radial_pair(1.0)
    e0 = fld.energy(phi)
    return max(abs(fld.energy(fld.kg_evolve(phi, t)) - e0) / e0 for t in (0.5, 1.0, 2.0))


def check_evolution_group(seed):
    phi, _ = _radial_pair(1.0)
    a = fld.kg_evolve(fld.kg_evolve(phi, 0.7), 0.6)
    b = fld.kg_evolve(phi, 1.3)
    return max(_rel(a.f, b.f), _rel(a.g, b.g))


def check_complex_structure(seed):
    phi, psi = _radial_pair(1.0)
    ii = fld.complex_structure(fld.complex_structure(phi))
    sq = max(_rel(ii.f, -phi.f), _rel(ii.g, -phi.g))
    a = fld.inner_product(fld.complex_structure(phi), psi)
    b = fld.inner_product(phi, psi)
    sesq = abs(a + 1j * b) / abs(b)
    symp = abs(
        fld.symplectic_form(fld.complex_structure(phi), fld.complex_structure(psi)) - fld.symplectic_form(phi, psi)
    ) / abs(fld.symplectic_form(phi, psi))
    return max(sq, sesq, symp)


def check_beta_mass_independent(seed):
    grid = fld.GridSpec.radial(12.0, 2048)
    base = fld.symplectic_form(*_radial_pair(0.5, grid))
    out = 0.0
    for m in (0.5, 1.0, 2.0):
        phi, psi = _radial_pair(m, grid)
        out = max(out, abs(fld.inner_product(phi, psi).imag - base) / abs(base))
    return out


def check_mu_composition(seed):
    grid = fld.GridSpec.radial(12.0, 2048)
    f = fld.radial_bump(grid, 0.8).f
    a = fld.mu_apply(grid, fld.mu_apply(grid, f, 1.0, 0.5), 1.0, -1.5)
    return _rel(a, fld.mu_apply(grid, f, 1.0, -1.0))


def check_identity_r12(seed):
    grid = fld.GridSpec.radial(12.0, 4096)
    f = fld.radial_bump(grid, 0.9, kind="gaussian-mollified-bump").f
    lhs, rhs = cf.identity_r12(grid, f)
    return abs(lhs - rhs) / abs(lhs)


def check_dilation_symplectic(seed):
    grid = fld.GridSpec.radial(12.0, 4096)
    phi, psi = _radial_pair(1.0, grid)
    base = fld.symplectic_form(phi, psi)
    return max(
        abs(fld.symplectic_form(fld.dilate(phi, lam), fld.dilate(psi, lam)) - base) / abs(base) for lam in (2.0, 0.5)
    )


# -- conformal ----------------------------------------------------------------------


def _flow_pair():
    grid = fld.GridSpec.radial(2.0, 512)
    phi = fld.radial_bump(grid, 0.8, 1.0, "f") + fld.radial_bump(grid, 0.6, 0.6, "g")
    psi = fld.radial_bump(grid, 0.9, 1.0, "g") + fld.radial_bump(grid, 0.7, -0.4, "f")
    return phi, psi


def check_K0_skew(seed):
    phi, psi = _radial_pair(0.0)
    a = fld.symplectic_form(cf.apply_K0(phi), psi) + fld.symplectic_form(phi, cf.apply_K0(psi))
    return abs(a) / abs(fld.symplectic_form(phi, cf.apply_K0(psi)))


def check_K0_quadratic_form(seed):
    phi, _ = _radial_pair(0.0)
    q = cf.quadratic_form_massless(phi)
    return abs(q - fld.symplectic_form(phi, cf.apply_K0(phi))) / q


def check_complex_linearity(seed):
    grid = fld.GridSpec.radial(24.0, 8192)
    f = fld.radial_bump(grid, 0.8, kind="gaussian-mollified-bump").f
    out = 0.0
    for m in (0.0, 1.0):
        lhs = fld.mu_apply(grid, ms.apply_M(grid, fld.mu_apply(grid, f, m, 1)), m, 1)
        out = max(out, _rel(lhs, -ms.apply_Lm(grid, f, m)))
    return out


def check_flow_generator(seed):
    phi, _ = _flow_pair()
    h = 1e-3
    a, b = cf.flow_geometric(phi, h), cf.flow_geometric(phi, -h)
    K = cf.apply_K0(phi)
    return max(_rel((a.f - b.f) / (2 * h), K.f), _rel((a.g - b.g) / (2 * h), K.g))


def check_flow_group(seed):
    phi, _ = _flow_pair()
    a = cf.flow_geometric(cf.flow_geometric(phi, 0.4), 0.3)
    b = cf.flow_geometric(phi, 0.7)
    return max(_rel(a.f, b.f), _rel(a.g, b.g))


def check_flow_symplectic(seed):
    phi, psi = _flow_pair()
    base = fld.symplectic_form(phi, psi)
    return max(
        abs(fld.symplectic_form(cf.flow_geometric(phi, s), cf.flow_geometric(psi, s)) - base) / abs(base)
        for s in (0.5, -1.0)
    )


def check_flow_support(seed):
    phi, _ = _flow_pair()
    return max(cf.flow_geometric_report(phi, s).leakage for s in (0.5, -0.5, 1.0, -1.0))


def check_identity_zg(seed):
    return max(cf.identity_zg_residuals([(0.3, -0.2), (0.9, 0.1), (-0.5, -0.7)]))


# -- massive ---------------------------------------------------------------------------


def check_KmB_symmetric(seed):
    phi, psi = _radial_pair(1.0)
    gen = ms.MassiveGenerator(phi.grid, 1.0)
    a = fld.symplectic_form(phi, gen.apply_ball(psi))
    b = fld.symplectic_form(psi, gen.apply_ball(phi))
    return abs(a - b) / abs(a)


def check_massless_reduction(seed):
    phi, _ = _radial_pair(0.0)
    a = ms.MassiveGenerator(phi.grid, 0.0).apply_ball(phi)
    b = cf.apply_K0(phi)
    return max(_rel(a.f, b.f), _rel(a.g, b.g))


def check_green_positive(seed):
    phi, psi = _radial_pair(1.0)
    vals = [ms.ball_form_terms(x).yukawa for x in (phi, psi, phi - psi)]
    return 0.0 if min(vals) > 0 else 1.0


def check_mass_continuity(seed):
    grid = fld.GridSpec.radial(12.0, 2048)
    base = fld.radial_bump(grid, 0.8) + fld.radial_bump(grid, 0.6, 0.7, "g")
    q0 = cf.quadratic_form_massless(base)
    masses = (1.0, 0.5, 0.25, 0.125)
    errs = [abs(ms.quadratic_form_massive(base.replace(m=m)).total - q0) for m in masses]
    orders = [math.log2(a / b) for a, b in zip(errs, errs[1:])]
    return max(0.0, 1.9 - min(orders))


def check_green_scaling(seed):
    r = np.linspace(0.05, 4, 40)
    out = 0.0
    for d in (2, 3):
        a = ms.green_kernel_eval(d, 2.0, r)
        b = 2.0 ** (d - 2) * ms.green_kernel_eval(d, 1.0, 2.0 * r)
        out = max(out, _rel(a, b))
    return out


def check_yukawa_bessel_form(seed):
    r = np.geomspace(1e-3, 30, 50)
    return _rel(ms.green_kernel_bessel_form(3, 1.3, r), ms.green_kernel_eval(3, 1.3, r))


def check_logdelta_bookkeeping(seed):
    phi, psi = _radial_pair(1.0)
    a = ms.matrix_element_logDelta(phi, phi)
    b = 2 * math.pi * ms.quadratic_form_massive(phi).total
    sym = abs(ms.matrix_element_logDelta(phi, psi) - ms.matrix_element_logDelta(psi, phi))
    return max(abs(a - b) / b, sym / abs(a))


# -- entropy ---------------------------------------------------------------------------


def check_entropy_triangle(seed):
    out = 0.0
    for m in (0.0, 1.0):
        phi, _ = _radial_pair(m)
        s = en.entropy_ball(phi).total
        out = max(
            out,
            abs(en.entropy_cutting_form(phi) - s) / s,
            abs(2 * math.pi * ms.beta_generator_form(phi) - s) / s,
        )
    return out


def check_entropy_terms(seed):
    phi, _ = _radial_pair(1.0)
    rep = en.entropy_ball(phi, 1.5, t=0.4)
    bad = min(rep.termStress, rep.termNorm, rep.termYukawa) < 0
    return abs(rep.total - (rep.termStress + rep.termNorm + rep.termYukawa)) + (1.0 if bad else 0.0)


def check_entropy_time(seed):
    phi, _ = _radial_pair(1.0)
    a = en.entropy_ball(phi, 1.2, t=0.3).total
    b = en.entropy_ball(fld.kg_evolve(phi, 0.3), 1.2).total
    return abs(a - b) / abs(b)


def check_entropy_scaling(seed):
    phi, _ = _radial_pair(1.0, fld.GridSpec.radial(12.0, 4096))
    a = en.entropy_ball(phi, 1.0).total
    b = en.entropy_ball(fld.dilate(phi, 2.0), 0.5).total
    return abs(a - b) / a


def check_entropy_translation(seed):
    spec = {
        "mode": "cartesian", "d": 2, "L": 8.0, "N": 128, "m": 1.0,
        "components": [{"kind": "gaussian-mollified-bump", "center": [0.0, 0.0], "radius": 1.0}],
    }
    a = en.entropy_ball(fld.wave_from_spec(spec), 1.0, (0.0, 0.0)).total
    spec["components"][0]["center"] = [1.0, -0.5]
    b = en.entropy_ball(fld.wave_from_spec(spec), 1.0, (1.0, -0.5)).total
    return abs(a - b) / a


# -- oracle ------------------------------------------------------------------------------


def check_oracle_small(seed):
    grid = fld.GridSpec.radial(20.0, 2**13)
    ds = orc.build_discretized(3, 1.0, grid)
    amb = ds.ambient()
    J2 = _rel(amb.J @ amb.J, -np.eye(len(amb.J)))
    x = np.random.default_rng(seed).normal(size=6)
    resid, dense = orc.dense_check(ds, x)
    sigma = ds.log_delta_form(x)
    return max(J2, resid, abs(dense - sigma) / sigma, 0.0 if sigma > 0 else 1.0)


CHECKS = [
    ("modular_core", "polar decomposition of S and J Delta J = Delta^-1", check_tomita_polar, 1e-9),
    ("modular_core", "cutting projection identities", check_cutting_projection, 1e-9),
    ("modular_core", "vector entropy: spectral vs direct", check_entropy_routes, 1e-9),
    ("modular_core", "symplectic-spectrum route vs dense", check_symplectic_route, 1e-9),
    ("modular_core", "passivity of log Delta", check_passivity, 1e-9),
    ("modular_core", "invariance characterisations agree", check_invariance_equivalence, 0.5),
    ("field", "energy conservation", check_energy_conservation, 1e-10),
    ("field", "evolution group law", check_evolution_group, 1e-10),
    ("field", "complex structure: square, sesquilinearity, symplectic", check_complex_structure, 1e-10),
    ("field", "Im <.,.> equals beta for every mass", check_beta_mass_independent, 1e-10),
    ("field", "mu powers compose", check_mu_composition, 1e-10),
    ("field", "weighted gradient integration by parts", check_identity_r12, 1e-6),
    ("field", "dilations preserve beta", check_dilation_symplectic, 1e-8),
    ("conformal", "K0 beta-skew", check_K0_skew, 1e-8),
    ("conformal", "beta(Phi, K0 Phi) equals massless form", check_K0_quadratic_form, 1e-8),
    ("conformal", "mu M mu = -L at m = 0, 1", check_complex_linearity, 1e-6),
    ("conformal", "flow derivative matches K0", check_flow_generator, 1e-3),
    ("conformal", "flow group law", check_flow_group, 1e-5),
    ("conformal", "flow preserves beta", check_flow_symplectic, 1e-6),
    ("conformal", "flow keeps support in the ball", check_flow_support, 1e-6),
    ("conformal", "flow map and cocycle derivatives", check_identity_zg, 1e-8),
    ("massive", "K_m^B beta-symmetric", check_KmB_symmetric, 1e-7),
    ("massive", "massless limit equals K0", check_massless_reduction, 1e-10),
    ("massive", "Green form positive", check_green_positive, 0.5),
    ("massive", "mass continuity order >= 1.9", check_mass_continuity, 1e-12),
    ("massive", "Green kernel scaling", check_green_scaling, 1e-12),
    ("massive", "Yukawa closed form vs Bessel form", check_yukawa_bessel_form, 1e-12),
    ("massive", "log Delta matrix element bookkeeping", check_logdelta_bookkeeping, 1e-9),
    ("entropy", "ball, cutting form and generator agree", check_entropy_triangle, 1e-5),
    ("entropy", "decomposition and positivity", check_entropy_terms, 1e-12),
    ("entropy", "time covariance", check_entropy_time, 1e-12),
    ("entropy", "scaling covariance", check_entropy_scaling, 1e-6),
    ("entropy", "translation covariance", check_entropy_translation, 1e-8),
    ("oracle", "small truncation: J^2, cutting projection, routes", check_oracle_small, 1e-6),
]


def run_battery(seed=7, select=None):
    results = []
    for module, name, fn, thr in CHECKS:
        if select and module not in select:
            continue
        t0 = time.perf_counter()
        try:
            res = float(fn(seed))
        except Exception as exc:  # a crashing check is a failed check
            res = math.inf
            name = f"{name} ({type(exc).__name__}: {exc})"
        results.append(CheckResult(module, name, res, thr, time.perf_counter() - t0))
    return results
