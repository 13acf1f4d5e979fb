"""``modham`` command line: entropy, scan, hamiltonian, flow, verify, oracle.

Exit codes: 0 success, 1 computation or verification failure, 2 bad configuration.
"""

import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import click

from . import conformal as cf
from . import entropy as en
from . import field as fld
from . import io
from . import massive as ms
from . import oracle as orc
from .config import DEFAULT_TOLERANCES
from .errors import ConfigError, ModhamError

ENTROPY_COLUMNS = ["R", "t", "termStress", "termNorm", "termYukawa", "total", "energy", "ratioLargeR", "bekensteinOK"]


class Context:
    def __init__(self, fmt, out, tolerances, jobs):
        self.fmt = fmt
        self.out = out
        self.tolerances = tolerances
        self.jobs = jobs

    def emit(self, text):
        if self.out:
            io.atomic_write(self.out, text)
        else:
            click.echo(text, nl=False)

    def map(self, fn, items):
        items = list(items)
        if self.jobs <= 1 or len(items) <= 1:
            return [fn(x) for x in items]
        with ThreadPoolExecutor(max_workers=self.jobs) as pool:
            return list(pool.map(fn, items))


def _parse_tolerances(pairs):
    changes = {}
    for item in pairs:
        name, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"tolerance override {item!r} is not name=value")
        try:
            changes[name.strip()] = float(value)
        except ValueError as exc:
            raise ConfigError(f"tolerance {name!r}: {exc}") from exc
    return DEFAULT_TOLERANCES.override(**changes)


def _floats(text, what):
    try:
        vals = [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"{what}: {exc}") from exc
    if not vals or not all(math.isfinite(v) for v in vals):
        raise ConfigError(f"{what} needs finite numbers")
    return vals


def _ints(text, what):
    vals = _floats(text, what)
    if any(v != int(v) for v in vals):
        raise ConfigError(f"{what} must be integers")
    return [int(v) for v in vals]


def _load_wave(path, m, n_override, l_override):
    spec = _read_spec(path)
    if m is not None:
        spec["m"] = m
    if n_override is not None:
        spec["N"] = n_override
    if l_override is not None:
        spec["L"] = l_override
    return fld.wave_from_spec(spec)


def _read_spec(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read wave spec {path}: {exc}") from exc


def _center(text, phi):
    if text is None:
        return None
    c = _floats(text, "--center")
    if len(c) != phi.grid.d:
        raise ConfigError(f"--center needs {phi.grid.d} coordinates")
    if phi.grid.radial_mode:
        if any(c):
            raise ConfigError("radial3d balls are centred at the origin")
        return None
    return tuple(c)


def _check_radius(phi, radius, center):
    if not radius > 0:
        raise ConfigError("--R must be positive")
    try:
        fld.check_ball(phi.grid, radius, center)
    except ModhamError as exc:
        raise ConfigError(str(exc)) from exc


def common(default_format="json"):
    def wrap(fn):
        fn = click.option("--jobs", type=int, default=1, envvar="MODHAM_JOBS", show_default=True,
                          help="Worker threads (env MODHAM_JOBS).")(fn)
        fn = click.option("--tol", "tols", multiple=True, metavar="NAME=VALUE",
                          help="Override a numerical tolerance; repeatable.")(fn)
        fn = click.option("--out", type=click.Path(dir_okay=False), default=None,
                          help="Write here (atomically) instead of stdout.")(fn)
        fn = click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default=default_format,
                          show_default=True)(fn)
        return fn

    return wrap


def wave_options(fn):
    fn = click.option("--L", "grid_L", type=float, default=None, help="Override the grid extent.")(fn)
    fn = click.option("--N", "grid_N", type=int, default=None, help="Override the grid size.")(fn)
    fn = click.option("--m", "mass", type=float, default=None, help="Override the mass in the wave spec.")(fn)
    fn = click.option("--wave", required=True, type=click.Path(exists=True, dir_okay=False),
                      help="Wave-spec JSON file.")(fn)
    return fn


def _context(fmt, out, tols, jobs):
    if jobs < 1:
        raise ConfigError("--jobs must be at least 1")
    return Context(fmt, out, _parse_tolerances(tols), jobs)


def _entropy_rows(reports):
    rows = []
    for rep in reports:
        d = rep.to_dict()
        rows.append([d[k] for k in ENTROPY_COLUMNS])
    return io.csv_text(ENTROPY_COLUMNS, rows)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def modham():
    """Local modular Hamiltonian and wave-packet entropy of the free scalar field on a ball."""


@modham.command()
@wave_options
@click.option("--R", "radius", type=float, default=1.0, show_default=True)
@click.option("--center", default=None, help="Comma-separated ball centre.")
@click.option("--t", "time", type=float, default=0.0, show_default=True)
@common()
def entropy(wave, mass, grid_N, grid_L, radius, center, time, fmt, out, tols, jobs):
    """Entropy of a wave packet in a ball."""
    ctx = _context(fmt, out, tols, jobs)
    phi = _load_wave(wave, mass, grid_N, grid_L)
    c = _center(center, phi)
    _check_radius(phi, radius, c)
    rep = en.entropy_ball(phi, radius, c, time)
    if fmt == "csv":
        ctx.emit(_entropy_rows([rep]))
    else:
        ctx.emit(io.dumps(io.with_schema({"grid": phi.grid.to_dict(), "m": phi.m, "report": rep})))


@modham.command()
@wave_options
@click.option("--R", "radii", default="1,2,4,8", show_default=True, help="Comma-separated radii.")
@click.option("--center", default=None)
@click.option("--t", "time", type=float, default=0.0, show_default=True)
@click.option("--small-count", type=int, default=3, show_default=True,
              help="Smallest radii used for the R -> 0 extrapolation.")
@common(default_format="csv")
def scan(wave, mass, grid_N, grid_L, radii, center, time, small_count, fmt, out, tols, jobs):
    """Entropy over a list of radii, with large-R and small-R diagnostics."""
    ctx = _context(fmt, out, tols, jobs)
    phi = _load_wave(wave, mass, grid_N, grid_L)
    c = _center(center, phi)
    rs = sorted(_floats(radii, "--R"))
    for R in rs:
        _check_radius(phi, R, c)
    reports = ctx.map(lambda R: en.entropy_ball(phi, R, c, time), rs)
    if fmt == "csv":
        ctx.emit(_entropy_rows(reports))
        return
    res = en.radius_scan(phi, rs, c, time, small_count)
    ctx.emit(io.dumps(io.with_schema({
        "grid": phi.grid.to_dict(),
        "m": phi.m,
        "supportRadius": res.supportRadius,
        "largeRRatio": res.largeRRatio,
        "smallRRatio": res.smallRRatio,
        "smallRLeading": res.smallRLeading,
        "bekensteinAll": res.bekensteinAll,
        "reports": res.reports,
    })))


@modham.command()
@wave_options
@click.option("--wave2", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Second wave for off-diagonal matrix elements.")
@click.option("--R", "radius", type=float, default=1.0, show_default=True)
@click.option("--center", default=None)
@common()
def hamiltonian(wave, mass, grid_N, grid_L, wave2, radius, center, fmt, out, tols, jobs):
    """Stress, norm and Yukawa parts of the ball generator and its matrix elements."""
    ctx = _context(fmt, out, tols, jobs)
    phi = _load_wave(wave, mass, grid_N, grid_L)
    c = _center(center, phi)
    _check_radius(phi, radius, c)
    waves = {"phi": phi}
    if wave2:
        psi = _load_wave(wave2, phi.m, grid_N, grid_L)
        if psi.grid != phi.grid:
            raise ConfigError("--wave and --wave2 must share a grid")
        waves["psi"] = psi
    breakdown = ms.ball_form_terms(phi, None, radius, c)
    elements = {}
    for a, x in waves.items():
        for b, y in waves.items():
            elements[f"{a},{b}"] = ms.matrix_element_logDelta(x, y, radius, c, ctx.tolerances)
    if fmt == "csv":
        rows = [["stress", breakdown.stress], ["norm", breakdown.norm], ["yukawa", breakdown.yukawa],
                ["total", breakdown.total]]
        rows += [[f"logDelta[{k}]", v] for k, v in elements.items()]
        ctx.emit(io.csv_text(["quantity", "value"], rows))
        return
    ctx.emit(io.dumps(io.with_schema({
        "grid": phi.grid.to_dict(),
        "m": phi.m,
        "R": radius,
        "center": list(c) if c else [0.0] * phi.grid.d,
        "quadraticForm": breakdown,
        "betaGeneratorForm": ms.beta_generator_form(phi, radius, c),
        "matrixElementsLogDelta": elements,
    })))


@modham.command()
@wave_options
@click.option("--s", "flow_time", type=float, required=True, help="Modular flow parameter.")
@common()
def flow(wave, mass, grid_N, grid_L, flow_time, fmt, out, tols, jobs):
    """Massless geometric modular flow of ball-supported data (radial grids)."""
    ctx = _context(fmt, out, tols, jobs)
    phi = _load_wave(wave, mass, grid_N, grid_L)
    res = cf.flow_geometric_report(phi, flow_time, ctx.tolerances)
    if fmt == "csv":
        ctx.emit(io.field_csv(res.data))
        return
    ctx.emit(io.dumps(io.with_schema({
        "grid": phi.grid.to_dict(),
        "s": res.s,
        "leakage": res.leakage,
        "r": fld.coordinates(phi.grid),
        "f": res.data.f,
        "g": res.data.g,
    })))


@modham.command()
@click.option("--seed", type=int, default=7, show_default=True)
@click.option("--module", "modules", multiple=True,
              type=click.Choice(["modular_core", "field", "conformal", "massive", "entropy", "oracle"]),
              help="Restrict to some modules; repeatable.")
@click.option("--format", "fmt", type=click.Choice(["table", "json", "csv"]), default="table", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def verify(seed, modules, fmt, out):
    """Run the invariant battery; exit 1 if any check fails."""
    from .verify import run_battery

    ctx = Context(fmt, out, DEFAULT_TOLERANCES, 1)
    results = run_battery(seed, modules or None)
    if fmt == "json":
        ctx.emit(io.dumps(io.with_schema({"seed": seed, "checks": results})))
    elif fmt == "csv":
        ctx.emit(io.csv_text(["module", "check", "residual", "threshold", "passed"],
                             [[r.module, r.name, r.residual, r.threshold, r.passed] for r in results]))
    else:
        ctx.emit(_table(results))
    if not all(r.passed for r in results):
        raise click.exceptions.Exit(1)


def _table(results):
    width = max(len(r.name) for r in results)
    lines = [f"{'':4}  {'module':12}  {'check':{width}}  {'residual':>9}  {'threshold':>9}"]
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        lines.append(f"{mark:4}  {r.module:12}  {r.name:{width}}  {r.residual:9.2e}  {r.threshold:9.1e}")
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"


@modham.command()
@click.option("--n-basis", "n_basis", default="12,24,48", show_default=True, help="Comma-separated truncations.")
@click.option("--masses", default="0,1", show_default=True)
@click.option("--fixtures", "count", type=int, default=8, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--rmax", type=float, default=orc.ORACLE_GRID.L, show_default=True)
@click.option("--grid-size", type=int, default=orc.ORACLE_GRID.N, show_default=True)
@common()
def oracle(n_basis, masses, count, seed, rmax, grid_size, fmt, out, tols, jobs):
    """Galerkin refinement report: truncated log Delta against the closed form."""
    ctx = _context(fmt, out, tols, jobs)
    ns = _ints(n_basis, "--n-basis")
    ms_ = _floats(masses, "--masses")
    if count < 1:
        raise ConfigError("--fixtures must be positive")
    if any(m < 0 for m in ms_):
        raise ConfigError("masses must be nonnegative")
    if any(not 1 <= n <= orc.MAX_BASIS for n in ns):
        raise ConfigError(f"--n-basis values must lie in [1, {orc.MAX_BASIS}]")
    grid = fld.GridSpec.radial(rmax, grid_size)
    parts = ctx.map(lambda m: orc.refinement_report(ns, [m], count, seed, grid, ctx.tolerances), ms_)
    report = {"grid": grid.to_dict(), "fixtures": count, "seed": seed, "cells": [], "trend": []}
    for p in parts:
        report["cells"] += p["cells"]
        report["trend"] += p["trend"]
    if fmt == "csv":
        rows = [[c["m"], c["nBasis"], c["medianDeviation"], c["medianSignedDeviation"], c["gramCondition"],
                 c["saturatedModes"], c["generatorMismatch"]] for c in report["cells"]]
        ctx.emit(io.csv_text(["m", "nBasis", "medianDeviation", "medianSignedDeviation", "gramCondition",
                              "saturatedModes", "generatorMismatch"], rows))
        return
    ctx.emit(io.dumps(io.with_schema(report)))


def main(argv=None):
    try:
        rc = modham.main(args=argv, prog_name="modham", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 2
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        return 2
    except ModhamError as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        return 1
    return rc if isinstance(rc, int) else 0


if __name__ == "__main__":
    sys.exit(main())
