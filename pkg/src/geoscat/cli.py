"""Configuration-driven command line front end.

Subcommands: `modes` (build and cache a mode table), `transmission`
(|t|^2 over an energy grid), `current` (Landauer-Buttiker sweeps over V,
mu1, beta or Vg), and `reproduce` (canned figure datasets).  All results
are CSV with deterministic formatting: identical configuration and cache
produce byte-identical output regardless of the worker-thread count.
"""

from __future__ import annotations

import argparse
import configparser
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import presets
from .errors import ConfigError, GeoscatError, PoleProximityError, QuadratureError
from .greens import GreensConfig, pole_guard_width, resonator_quantities
from .scattering import CouplingParams, amplitudes, momenta, transfer_matrix
from .spectral import (
    Junction,
    ModeTable,
    Rectangle,
    ResonatorGeometry,
    Shifted,
    Triangle,
    cache_load,
    cache_store,
    enumerate_modes,
    weyl_counterterm_rate,
)
from .transport import BathPair, QuadratureConfig, QuadratureReport, current

CACHE_ENV_VAR = "GEOSCAT_CACHE_DIR"
DEFAULT_CACHE_DIR = "geoscat-cache"

_SWEEP_VARIABLES = ("lambda", "V", "mu1", "beta", "Vg")
_FIXED_KEYS = ("mu1", "mu2", "V", "beta", "Vg")


def _fmt(x: float) -> str:
    """Nine significant digits, scientific notation."""
    return f"{x:.8e}"


@dataclass(frozen=True)
class SweepSpec:
    """One-dimensional sweep axis."""

    variable: str
    start: float
    stop: float
    count: int
    scale: str = "linear"

    def __post_init__(self):
        if self.variable not in _SWEEP_VARIABLES:
            raise ConfigError(
                f"sweep variable {self.variable!r} not in {_SWEEP_VARIABLES}")
        if self.count < 1:
            raise ConfigError("sweep count must be >= 1")
        if self.scale not in ("linear", "log"):
            raise ConfigError("sweep scale must be 'linear' or 'log'")

    def grid(self) -> np.ndarray:
        if self.scale == "log":
            if self.start <= 0.0 or self.stop <= 0.0:
                raise ConfigError("log sweeps need positive endpoints")
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


@dataclass
class RunConfig:
    """Everything one CLI invocation needs."""

    geometry: ResonatorGeometry
    x1: Junction
    x2: Junction
    coupling: CouplingParams
    greens: GreensConfig = field(default_factory=GreensConfig)
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)
    table_lambda_max: float = presets.PRESET_LAMBDA_MAX
    sweep: SweepSpec | None = None
    fixed: dict = field(default_factory=dict)
    with_conductance: bool = False
    dv: float | None = None
    coupling_preset: str | None = None
    rho: float | None = None
    output: str | None = None
    threads: int = 1


# ---------------------------------------------------------------------------
# config file parsing / serialization


def _parse_point(text: str) -> Junction:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ConfigError(f"expected 'x, y', got {text!r}")
    return Junction(float(parts[0]), float(parts[1]))


def _parse_geometry(sec) -> ResonatorGeometry:
    kind = sec.get("kind", "").strip().lower()
    if kind == "rectangle":
        base: ResonatorGeometry = Rectangle(sec.getfloat("c1"), sec.getfloat("c2"))
    elif kind == "triangle":
        base = Triangle()
    else:
        raise ConfigError(f"unknown geometry kind {kind!r}")
    shift = sec.getfloat("shift", fallback=0.0)
    return Shifted(base, shift) if shift != 0.0 else base


def _parse_coupling(sec) -> tuple[CouplingParams, str | None, float | None]:
    preset = sec.get("preset", fallback=None)
    if preset is not None:
        preset = preset.strip().lower()
        if preset != "natural":
            raise ConfigError(f"unknown coupling preset {preset!r}")
        rho = sec.getfloat("rho", fallback=presets.NATURAL_RHO)
        return CouplingParams.natural(rho), "natural", rho
    if "a" in sec:
        coupling = CouplingParams.make_symmetric(
            sec.getfloat("a"), sec.getfloat("c"), sec.getfloat("d"))
        return coupling, None, None
    try:
        coupling = CouplingParams(
            sec.getfloat("a1"), complex(sec.get("c1")), sec.getfloat("d1"),
            sec.getfloat("a2"), complex(sec.get("c2")), sec.getfloat("d2"))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid [coupling] section: {exc}") from exc
    return coupling, None, None


def parse_config(source) -> RunConfig:
    """Parse a run configuration from an INI file path or text."""
    parser = configparser.ConfigParser()
    if isinstance(source, (str, Path)) and "\n" not in str(source):
        if not Path(source).exists():
            raise ConfigError(f"config file {source} does not exist")
        parser.read(source)
    else:
        parser.read_string(str(source))
    try:
        geometry = _parse_geometry(parser["geometry"])
        jsec = parser["junctions"]
        x1 = _parse_point(jsec.get("x1"))
        x2 = _parse_point(jsec.get("x2"))
        coupling, preset, rho = _parse_coupling(parser["coupling"])
    except KeyError as exc:
        raise ConfigError(f"missing config section {exc}") from exc

    gsec = parser["greens"] if parser.has_section("greens") else {}
    table_lambda_max = float(gsec.get("lambda_max", presets.PRESET_LAMBDA_MAX))
    greens = GreensConfig(
        lambda_max=table_lambda_max,
        c_g=float(gsec.get("c_g", 0.0)),
        tail_tolerance=float(gsec.get("tail_tolerance", 1e-4)),
        tail_correction=str(gsec.get("tail_correction", "true")).lower()
        in ("1", "true", "yes", "on"))

    qsec = parser["quadrature"] if parser.has_section("quadrature") else {}
    quad = QuadratureConfig(
        abs_tol=float(qsec.get("abs_tol", 1e-8)),
        rel_tol=float(qsec.get("rel_tol", 1e-6)),
        window_tolerance=float(qsec.get("window_tolerance", 1e-12)),
        panel_limit=int(qsec.get("panel_limit", 200)))

    sweep = None
    fixed: dict = {}
    with_conductance = False
    dv = None
    if parser.has_section("sweep"):
        ssec = parser["sweep"]
        sweep = SweepSpec(
            variable=ssec.get("variable"),
            start=ssec.getfloat("start"),
            stop=ssec.getfloat("stop"),
            count=ssec.getint("count"),
            scale=ssec.get("scale", fallback="linear"))
        for key in _FIXED_KEYS:
            if key in ssec:
                fixed[key] = ssec.getfloat(key)
        with_conductance = ssec.getboolean("conductance", fallback=False)
        if "dv" in ssec:
            dv = ssec.getfloat("dv")

    output = None
    threads = 1
    if parser.has_section("output"):
        osec = parser["output"]
        output = osec.get("path", fallback=None)
        threads = osec.getint("threads", fallback=1)

    return RunConfig(geometry=geometry, x1=x1, x2=x2, coupling=coupling,
                     greens=greens, quad=quad,
                     table_lambda_max=table_lambda_max, sweep=sweep,
                     fixed=fixed, with_conductance=with_conductance, dv=dv,
                     coupling_preset=preset, rho=rho, output=output,
                     threads=threads)


def serialize_config(cfg: RunConfig) -> str:
    """Render a RunConfig back to INI text; parse(serialize(x)) == x."""
    parser = configparser.ConfigParser()
    base = cfg.geometry
    shift = 0.0
    if isinstance(base, Shifted):
        shift = base.shift
        base = base.inner
    if isinstance(base, Rectangle):
        parser["geometry"] = {"kind": "rectangle", "c1": repr(base.c1),
                              "c2": repr(base.c2)}
    else:
        parser["geometry"] = {"kind": "triangle"}
    if shift != 0.0:
        parser["geometry"]["shift"] = repr(shift)

    parser["junctions"] = {"x1": f"{cfg.x1.x!r}, {cfg.x1.y!r}",
                           "x2": f"{cfg.x2.x!r}, {cfg.x2.y!r}"}

    coup = cfg.coupling
    if cfg.coupling_preset == "natural":
        parser["coupling"] = {"preset": "natural", "rho": repr(cfg.rho)}
    elif coup.symmetric:
        parser["coupling"] = {"a": repr(coup.a1), "c": repr(coup.c1.real),
                              "d": repr(coup.d1)}
    else:
        parser["coupling"] = {
            "a1": repr(coup.a1), "c1": repr(coup.c1), "d1": repr(coup.d1),
            "a2": repr(coup.a2), "c2": repr(coup.c2), "d2": repr(coup.d2)}

    parser["greens"] = {
        "lambda_max": repr(cfg.table_lambda_max),
        "c_g": repr(cfg.greens.c_g),
        "tail_tolerance": repr(cfg.greens.tail_tolerance),
        "tail_correction": "true" if cfg.greens.tail_correction else "false"}
    parser["quadrature"] = {
        "abs_tol": repr(cfg.quad.abs_tol), "rel_tol": repr(cfg.quad.rel_tol),
        "window_tolerance": repr(cfg.quad.window_tolerance),
        "panel_limit": str(cfg.quad.panel_limit)}
    if cfg.sweep is not None:
        sweep = {"variable": cfg.sweep.variable, "start": repr(cfg.sweep.start),
                 "stop": repr(cfg.sweep.stop), "count": str(cfg.sweep.count),
                 "scale": cfg.sweep.scale}
        for key in _FIXED_KEYS:
            if key in cfg.fixed:
                sweep[key] = repr(cfg.fixed[key])
        if cfg.with_conductance:
            sweep["conductance"] = "true"
        if cfg.dv is not None:
            sweep["dv"] = repr(cfg.dv)
        parser["sweep"] = sweep
    out = {}
    if cfg.output is not None:
        out["path"] = cfg.output
    out["threads"] = str(cfg.threads)
    parser["output"] = out

    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# mode-table cache handling


def resolve_cache_dir(flag_value: str | None) -> Path:
    if flag_value:
        return Path(flag_value)
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        return Path(env)
    return Path(DEFAULT_CACHE_DIR)


def _cache_name(geometry: ResonatorGeometry, lambda_max: float) -> str:
    base = geometry
    shift = None
    if isinstance(base, Shifted):
        shift = base.shift
        base = base.inner
    if isinstance(base, Rectangle):
        stem = f"rect-{base.c1!r}-{base.c2!r}"
    else:
        stem = "tri"
    if shift is not None:
        stem += f"-shift-{shift!r}"
    return f"gsmt-{stem}-{lambda_max!r}.gsmt"


def acquire_table(geometry: ResonatorGeometry, lambda_max: float,
                  cache_dir: Path, verbose: bool = False
                  ) -> tuple[ModeTable, bool]:
    """Load the mode table from cache, or build and store it.

    Returns (table, cache_hit).
    """
    path = cache_dir / _cache_name(geometry, lambda_max)
    if path.exists():
        table = cache_load(path, geometry, lambda_max)
        if verbose:
            print(f"cache hit: {path} ({len(table)} modes)", file=sys.stderr)
        return table, True
    table = enumerate_modes(geometry, lambda_max)
    cache_store(table, path)
    if verbose:
        print(f"cache store: {path} ({len(table)} modes)", file=sys.stderr)
    return table, False


# ---------------------------------------------------------------------------
# sweep engines


def _parallel_map(fn, items, threads: int):
    """Order-preserving map, optionally on a thread pool."""
    if threads <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _write_csv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def run_transmission_sweep(cfg: RunConfig, table: ModeTable,
                           threads: int) -> tuple[list[str], list[list[str]]]:
    """|t|^2 over the configured energy grid; pole-guard hits are flagged
    rows, never missing rows."""
    if cfg.sweep is None or cfg.sweep.variable != "lambda":
        raise ConfigError("transmission sweeps require a 'lambda' sweep axis")
    v_g = float(cfg.fixed.get("Vg", 0.0))
    grid = cfg.sweep.grid()
    guard_hits = sum(
        1 for lam in grid
        if abs(table.nearest_eigenvalue(float(lam)) - float(lam))
        < pole_guard_width(float(lam)))
    if guard_hits > 0.1 * len(grid):
        raise ConfigError(
            f"{guard_hits} of {len(grid)} grid points fall inside pole guard "
            "bands; shift the grid endpoints or change the point count")

    coupling, greens_cfg = cfg.coupling, cfg.greens

    def one(lam: float) -> list[str]:
        lam = float(lam)
        try:
            k1, k2 = momenta(lam, v_g)
            q = resonator_quantities(table, cfg.x1, cfg.x2, lam,
                                     d1=coupling.d1, d2=coupling.d2,
                                     config=greens_cfg)
            amp = amplitudes(transfer_matrix(q, coupling), k1, k2)
            return [_fmt(lam), _fmt(amp.transmission), "ok",
                    str(q.n_modes), _fmt(q.tail_estimate)]
        except PoleProximityError:
            return [_fmt(lam), _fmt(math.nan), "pole_guard", "0", _fmt(0.0)]
        except GeoscatError as exc:
            return [_fmt(lam), _fmt(math.nan), type(exc).__name__, "0", _fmt(0.0)]

    rows = _parallel_map(one, grid, threads)
    header = ["lambda", "t2", "diag_status", "diag_n_modes", "diag_tail_estimate"]
    return header, rows


def _baths_for(fixed: dict, axis: str, value: float) -> BathPair:
    params = dict(fixed)
    if axis != "lambda":
        params[axis] = value
    beta = float(params.get("beta", 25.0))
    v_g = float(params.get("Vg", 0.0))
    mu1 = float(params.get("mu1", 0.0))
    if "mu2" in params:
        mu2 = float(params["mu2"])
    elif "V" in params:
        mu2 = mu1 + float(params["V"])
    else:
        raise ConfigError("current sweeps need either 'V' or 'mu2'")
    return BathPair(beta=beta, mu1=mu1, mu2=mu2, v_g=v_g)


def run_current_sweep(cfg: RunConfig, table: ModeTable,
                      threads: int) -> tuple[list[str], list[list[str]]]:
    """Current (and optional conductance) over the configured axis."""
    if cfg.sweep is None or cfg.sweep.variable == "lambda":
        raise ConfigError("current sweeps need an axis in V, mu1, beta or Vg")
    axis = cfg.sweep.variable
    grid = cfg.sweep.grid()
    coupling = cfg.coupling

    def one(value: float) -> list[str]:
        value = float(value)
        out = [_fmt(value)]
        try:
            baths = _baths_for(cfg.fixed, axis, value)
            report = current(table, cfg.x1, cfg.x2, coupling, baths,
                             quad_config=cfg.quad, greens_config=cfg.greens)
            status = "ok" if report.converged else "quad_warning"
        except QuadratureError as exc:
            report = exc.report or QuadratureReport(
                math.nan, math.inf, 0, 0, (), False)
            status = "quad_error"
        except GeoscatError as exc:
            report = QuadratureReport(math.nan, math.inf, 0, 0, (), False)
            status = type(exc).__name__
        out.append(_fmt(report.value))
        if cfg.with_conductance:
            out.append(_fmt(_sigma_for_row(cfg, table, axis, value)))
        out += [_fmt(report.error_estimate), str(report.evaluations),
                str(report.subintervals), str(len(report.poles)), status]
        return out

    rows = _parallel_map(one, grid, threads)
    header = [axis, "current"]
    if cfg.with_conductance:
        header.append("sigma")
    header += ["diag_error_estimate", "diag_evaluations",
               "diag_subintervals", "diag_n_poles", "diag_status"]
    return header, rows


def _sigma_for_row(cfg: RunConfig, table: ModeTable, axis: str,
                   value: float) -> float:
    from .transport import conductance

    baths = _baths_for(cfg.fixed, axis, value)
    dv = cfg.dv if cfg.dv is not None else 0.1 / baths.beta
    try:
        return conductance(table, cfg.x1, cfg.x2, cfg.coupling, baths, dv,
                           quad_config=cfg.quad, greens_config=cfg.greens)
    except GeoscatError:
        return math.nan


# ---------------------------------------------------------------------------
# subcommands


def cmd_modes(cfg: RunConfig, cache_dir: Path, out_path: str | None,
              verbose: bool) -> dict:
    """Build (or reuse) the mode table; report count and Weyl deviation."""
    lambda_max = cfg.table_lambda_max
    if out_path:
        path = Path(out_path)
        if path.exists():
            try:
                table = cache_load(path, cfg.geometry, lambda_max)
                hit = True
            except GeoscatError:
                table, hit = enumerate_modes(cfg.geometry, lambda_max), False
                cache_store(table, path)
        else:
            table, hit = enumerate_modes(cfg.geometry, lambda_max), False
            cache_store(table, path)
    else:
        table, hit = acquire_table(cfg.geometry, lambda_max, cache_dir, verbose)
        path = cache_dir / _cache_name(cfg.geometry, lambda_max)
    weyl = cfg.geometry.area * lambda_max / (4.0 * np.pi)
    deviation = (len(table) - weyl) / weyl if weyl > 0 else math.nan
    lam_lo = float(table.eigenvalues[0]) if len(table) else math.nan
    lam_hi = float(table.eigenvalues[-1]) if len(table) else math.nan
    summary = {
        "path": str(path), "cache_hit": hit, "n_modes": len(table),
        "lambda_min": lam_lo, "lambda_max_seen": lam_hi,
        "lambda_cutoff": lambda_max, "weyl_estimate": weyl,
        "weyl_deviation": deviation,
        "weyl_rate": weyl_counterterm_rate(cfg.geometry),
    }
    print(f"modes: {'cache hit' if hit else 'built'} {path} | "
          f"N={len(table)} lambda=[{_fmt(lam_lo)}, {_fmt(lam_hi)}] | "
          f"Weyl {weyl:.1f} ({100 * deviation:+.3f}%)")
    return summary


def _sweep_output(cfg: RunConfig, out_flag: str | None, default: str) -> Path:
    if out_flag:
        return Path(out_flag)
    if cfg.output:
        return Path(cfg.output)
    return Path(default)


def cmd_transmission(cfg: RunConfig, cache_dir: Path, out_path: str | None,
                     threads: int, verbose: bool) -> Path:
    table, _ = acquire_table(cfg.geometry, cfg.table_lambda_max, cache_dir,
                             verbose)
    header, rows = run_transmission_sweep(cfg, table, threads)
    path = _sweep_output(cfg, out_path, "transmission.csv")
    _write_csv(path, header, rows)
    print(f"transmission: {len(rows)} rows -> {path}")
    return path


def cmd_current(cfg: RunConfig, cache_dir: Path, out_path: str | None,
                threads: int, verbose: bool) -> Path:
    table, _ = acquire_table(cfg.geometry, cfg.table_lambda_max, cache_dir,
                             verbose)
    header, rows = run_current_sweep(cfg, table, threads)
    path = _sweep_output(cfg, out_path, "current.csv")
    _write_csv(path, header, rows)
    print(f"current: {len(rows)} rows -> {path}")
    return path


def _preset_run_config(curve: presets.CurvePreset) -> RunConfig:
    return RunConfig(
        geometry=curve.geometry, x1=curve.x1, x2=curve.x2,
        coupling=CouplingParams.natural(presets.NATURAL_RHO),
        greens=GreensConfig(lambda_max=presets.PRESET_LAMBDA_MAX),
        table_lambda_max=presets.PRESET_LAMBDA_MAX,
        sweep=SweepSpec(curve.axis, curve.start, curve.stop, curve.count),
        fixed=dict(curve.fixed),
        coupling_preset="natural", rho=presets.NATURAL_RHO)


def cmd_reproduce(figure: str, cache_dir: Path, out_dir: str | None,
                  threads: int, verbose: bool) -> Path:
    """Regenerate one bundled figure dataset: one CSV per curve plus a
    manifest listing every parameter used."""
    if figure not in presets.FIGURES:
        raise ConfigError(
            f"unknown figure {figure!r}; choose from {sorted(presets.FIGURES)}")
    target = Path(out_dir) if out_dir else Path(f"reproduce-{figure}")
    target.mkdir(parents=True, exist_ok=True)
    manifest: dict = {
        "figure": figure,
        "coupling": {"preset": "natural", "rho": presets.NATURAL_RHO},
        "greens": {"lambda_max": presets.PRESET_LAMBDA_MAX, "c_g": 0.0,
                   "tail_correction": True},
        "note": ("coupling constants behind the published curves are not "
                 "stated; reproduction is qualitative"),
        "curves": [],
    }
    for curve in presets.FIGURES[figure]:
        cfg = _preset_run_config(curve)
        table, _ = acquire_table(cfg.geometry, cfg.table_lambda_max,
                                 cache_dir, verbose)
        if curve.kind == "transmission":
            header, rows = run_transmission_sweep(cfg, table, threads)
        else:
            header, rows = run_current_sweep(cfg, table, threads)
        path = target / f"{curve.name}.csv"
        _write_csv(path, header, rows)
        geom = curve.geometry
        manifest["curves"].append({
            "file": path.name, "kind": curve.kind,
            "geometry": ("rectangle" if isinstance(geom, Rectangle)
                         else "triangle"),
            "x1": [curve.x1.x, curve.x1.y], "x2": [curve.x2.x, curve.x2.y],
            "axis": curve.axis, "start": curve.start, "stop": curve.stop,
            "count": curve.count, "fixed": curve.fixed,
        })
        if verbose:
            print(f"reproduce {figure}: wrote {path}", file=sys.stderr)
    manifest_path = target / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True)
                             + "\n")
    print(f"reproduce {figure}: {len(presets.FIGURES[figure])} curves -> {target}")
    return target


# ---------------------------------------------------------------------------
# entry point


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="run configuration file (INI)")
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads for sweep grids")
    common.add_argument("--out", help="output CSV file (or directory for "
                        "reproduce)")
    common.add_argument("--cache", help=f"mode-table cache directory "
                        f"(default ${CACHE_ENV_VAR} or ./{DEFAULT_CACHE_DIR})")
    common.add_argument("--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="geoscat",
        description="Fermion transport through geometric scatterers")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("modes", parents=[common],
                   help="enumerate and cache a mode table")
    sub.add_parser("transmission", parents=[common],
                   help="sweep |t|^2 over an energy grid")
    sub.add_parser("current", parents=[common],
                   help="sweep the stationary current over a parameter grid")
    rep = sub.add_parser("reproduce", parents=[common],
                         help="regenerate a bundled figure dataset")
    rep.add_argument("figure", choices=sorted(presets.FIGURES))
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    cache_dir = resolve_cache_dir(args.cache)
    try:
        if args.command == "reproduce":
            threads = args.threads if args.threads is not None else 1
            cmd_reproduce(args.figure, cache_dir, args.out, threads,
                          args.verbose)
            return 0
        if not args.config:
            raise ConfigError(f"'{args.command}' requires --config")
        cfg = parse_config(args.config)
        threads = args.threads if args.threads is not None else cfg.threads
        if args.command == "modes":
            cmd_modes(cfg, cache_dir, args.out, args.verbose)
        elif args.command == "transmission":
            cmd_transmission(cfg, cache_dir, args.out, threads, args.verbose)
        elif args.command == "current":
            cmd_current(cfg, cache_dir, args.out, threads, args.verbose)
        return 0
    except GeoscatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
