"""Command-line front end: spectra, phase shifts, observables and figure data.

Every subcommand builds a table (columns + rows + diagnostics) and writes it
as CSV or JSON. Floats are written with ``repr`` (shortest round-trip form),
so the same configuration always produces byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from . import __version__
from .bound import aux_spectrum, delta_e, phys_spectrum
from .errors import ConfigError, MorseError
from .oracle import oracle_phase_shift
from .potential import (
    LI6_PRESET,
    DimensionlessParams,
    MorseParams,
    energy_unit,
    eval_potential,
    reduce,
    scaled_potential,
)
from .precision import DEFAULT, Precision
from .scatter import (
    PhaseShiftSample,
    aux_phase_shift_gamma,
    aux_phase_shift_series,
    aux_scattering_params,
    phys_phase_shift,
    phys_scattering_params,
    scattering_length_zeros,
    track_branches,
    unitarity_poles,
)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3

FIGURE_DEFAULTS = {
    1: {"command": "observables", "sweep": "d:0.05:8:2000", "condition": "aux", "beta_r0": 4.15},
    2: {"command": "bound", "sweep": "d:0.05:4:400", "condition": "both", "beta_r0_list": (1.0, 2.0, 4.0)},
    3: {"command": "observables", "sweep": "d:0.01:8:200", "condition": "both", "beta_r0": 4.15},
}
PHASE_COLUMNS = ("series", "gamma", "phys", "oracle_aux", "oracle_phys")
# flag a row when d lies this close to a unitarity pole
POLE_FLAG_WIDTH = 1e-6


@dataclass(frozen=True)
class Sweep:
    var: str
    start: float
    stop: float
    n: int
    log: bool = False

    @classmethod
    def parse(cls, text: str, allowed: Sequence[str]) -> "Sweep":
        parts = text.split(":")
        if len(parts) not in (4, 5):
            raise ConfigError(f"sweep must be VAR:START:STOP:N[:log], got {text!r}")
        var = parts[0]
        if var not in allowed:
            raise ConfigError(f"cannot sweep {var!r} here; choose from {', '.join(allowed)}")
        try:
            start, stop, n = float(parts[1]), float(parts[2]), int(parts[3])
        except ValueError as exc:
            raise ConfigError(f"bad sweep numbers in {text!r}") from exc
        log = len(parts) == 5
        if log and parts[4] != "log":
            raise ConfigError(f"unknown sweep spacing {parts[4]!r}")
        if not (math.isfinite(start) and math.isfinite(stop)) or not start < stop:
            raise ConfigError("sweep range must satisfy START < STOP")
        if n < 2:
            raise ConfigError("sweep needs at least 2 points")
        if log and start <= 0:
            raise ConfigError("log sweep needs START > 0")
        return cls(var, start, stop, n, log)

    def values(self) -> list[float]:
        if self.log:
            return [float(v) for v in np.geomspace(self.start, self.stop, self.n)]
        return [float(v) for v in np.linspace(self.start, self.stop, self.n)]


@dataclass
class RunConfig:
    command: str
    mode: str  # "dimensionless" or "physical"
    d: Optional[float]
    beta_r0: float
    physical: Optional[dict] = None
    sweep: Optional[Sweep] = None
    condition: str = "both"
    fmt: str = "csv"
    out: Optional[str] = None
    precision: Precision = DEFAULT
    jobs: int = 1
    figure: Optional[int] = None
    beta_r0_list: Optional[tuple] = None
    extra: dict = field(default_factory=dict)

    def echo(self) -> dict:
        out = {
            "command": self.command,
            "mode": self.mode,
            "d": self.d,
            "beta_r0": self.beta_r0,
            "condition": self.condition,
            "figure": self.figure,
            "sweep": asdict(self.sweep) if self.sweep else None,
            "precision": {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(self.precision).items()},
        }
        if self.physical:
            out["physical"] = self.physical
        if self.beta_r0_list:
            out["beta_r0_list"] = list(self.beta_r0_list)
        out.update(self.extra)
        return out


@dataclass
class Table:
    columns: list[str]
    rows: list[list[Any]]
    diagnostics: dict = field(default_factory=dict)


# --------------------------------------------------------------------------
# formatting
# --------------------------------------------------------------------------


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _json_value(v: Any) -> Any:
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return v


def render_csv(table: Table, config: RunConfig) -> str:
    buf = io.StringIO()
    buf.write(f"# morsescat {__version__}\n")
    buf.write("# config: " + json.dumps(_json_value(config.echo()), sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def render_json(table: Table, config: RunConfig) -> str:
    doc = {
        "config": _json_value(config.echo()),
        "columns": table.columns,
        "rows": [_json_value(r) for r in table.rows],
        "diagnostics": _json_value(table.diagnostics),
    }
    return json.dumps(doc, indent=2, sort_keys=False, allow_nan=False) + "\n"


# --------------------------------------------------------------------------
# per-point workers (top level so a process pool can pickle them)
# --------------------------------------------------------------------------


def _near_pole(d: float) -> bool:
    m = round(d - 0.5)
    return m >= 0 and abs(d - 0.5 - m) < POLE_FLAG_WIDTH


def _bound_rows(d: float, beta_r0: float, condition: str, precision: Precision) -> list[list]:
    dp = DimensionlessParams(d, beta_r0)
    aux = aux_spectrum(dp) if condition in ("aux", "both") else []
    phys = phys_spectrum(dp, precision) if condition in ("phys", "both") else []
    de = {x.n: x for x in delta_e(dp, precision, phys)} if condition == "both" else {}
    rows = []
    for tag, states in (("auxiliary", aux), ("physical", phys)):
        if tag == "auxiliary" and condition == "phys":
            continue
        if tag == "physical" and condition == "aux":
            continue
        if not states:
            rows.append([d, beta_r0, tag, 0, None, None, None, None, None])
            continue
        for s in states:
            entry = de.get(s.n)
            dE = entry.value if entry else None
            missing = entry.missing_physical if entry else None
            rows.append([d, beta_r0, tag, len(states), s.n, s.b, s.energy_scaled, dE, missing])
    return rows


def _phase_row(d: float, beta_r0: float, k: float, columns: tuple, precision: Precision) -> dict:
    dp = DimensionlessParams(d, beta_r0)
    out: dict[str, PhaseShiftSample] = {}
    if "series" in columns:
        out["series"] = aux_phase_shift_series(dp, k, precision)
    if "gamma" in columns:
        out["gamma"] = aux_phase_shift_gamma(dp, k)
    if "phys" in columns:
        out["phys"] = phys_phase_shift(dp, k, precision)
    if "oracle_aux" in columns:
        out["oracle_aux"] = oracle_phase_shift(dp, "auxiliary", k)
    if "oracle_phys" in columns:
        out["oracle_phys"] = oracle_phase_shift(dp, "physical", k)
    return out


def _observables_row(d: float, beta_r0: float, condition: str, precision: Precision) -> list:
    dp = DimensionlessParams(d, beta_r0)
    a_aux = re_aux = res_aux = a_ph = re_ph = res_ph = rel = None
    if condition in ("aux", "both"):
        o = aux_scattering_params(dp, precision)
        a_aux, re_aux, res_aux = o.a_beta, o.re_beta, o.resonant
    if condition in ("phys", "both"):
        o = phys_scattering_params(dp, precision)
        a_ph, re_ph, res_ph = o.a_beta, o.re_beta, o.resonant
    if re_aux is not None and re_ph is not None and re_aux != 0:
        rel = abs(re_ph - re_aux) / abs(re_aux)
    return [d, beta_r0, a_aux, re_aux, res_aux, a_ph, re_ph, res_ph, rel, _near_pole(d)]


def _run_task(task: tuple):
    kind, args = task
    if kind == "bound":
        return _bound_rows(*args)
    if kind == "phase":
        return _phase_row(*args)
    if kind == "observables":
        return _observables_row(*args)
    raise ValueError(kind)


class PointFailure(Exception):
    def __init__(self, index: int, point: dict, cause: MorseError):
        super().__init__(str(cause))
        self.index, self.point, self.cause = index, point, cause


def _map_points(tasks: list[tuple], points: list[dict], jobs: int) -> list:
    """Evaluate tasks in input order, serially or on a process pool."""
    if jobs <= 1 or len(tasks) < 2:
        results = []
        for i, t in enumerate(tasks):
            try:
                results.append(_run_task(t))
            except ConfigError:
                raise
            except MorseError as exc:
                raise PointFailure(i, points[i], exc) from exc
        return results
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_run_task, t) for t in tasks]
        results = []
        for i, fut in enumerate(futures):
            try:
                results.append(fut.result())
            except ConfigError:
                raise
            except MorseError as exc:
                for f in futures[i + 1 :]:
                    f.cancel()
                raise PointFailure(i, points[i], exc) from exc
        return results


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def _points(config: RunConfig) -> list[dict]:
    base = {"d": config.d, "beta_r0": config.beta_r0}
    if config.sweep is None or config.sweep.var not in ("d", "beta_r0"):
        pts = [base]
    else:
        pts = [{**base, config.sweep.var: v} for v in config.sweep.values()]
    if config.beta_r0_list:
        pts = [{**p, "beta_r0": b} for b in config.beta_r0_list for p in pts]
    for p in pts:
        if p["d"] is None:
            raise ConfigError("no depth given: use --d, --preset, physical-unit flags, or a d sweep")
        DimensionlessParams(p["d"], p["beta_r0"])
    return pts


def _energy_scale(config: RunConfig) -> Optional[tuple[str, float]]:
    if config.mode != "physical":
        return None
    phys = config.physical
    p = MorseParams.from_units(phys["D"], phys["D_unit"], phys["beta_per_angstrom"], phys["r0_angstrom"], phys["mu_amu"])
    # joules per D_unit is p.D / phys["D"]
    return phys["D_unit"], energy_unit(p) * phys["D"] / p.D


def cmd_potential(config: RunConfig) -> Table:
    d = config.d
    if d is None:
        raise ConfigError("potential needs a depth")
    dp = DimensionlessParams(d, config.beta_r0)
    x_min = config.extra.get("x_min", 0.0)
    x_max = config.extra.get("x_max", dp.beta_r0 + 10.0)
    n = config.extra.get("points", 201)
    if not x_max > x_min or n < 2:
        raise ConfigError("potential grid needs x_max > x_min and at least 2 points")
    if config.sweep is not None:
        if config.sweep.var != "x":
            raise ConfigError("potential sweeps only over x (= beta r)")
        xs = config.sweep.values()
    else:
        xs = [float(v) for v in np.linspace(x_min, x_max, n)]
    if xs[0] <= dp.beta_r0 <= xs[-1] and dp.beta_r0 not in xs:
        xs = sorted(xs + [dp.beta_r0])
    v = scaled_potential(dp, np.asarray(xs))
    columns = ["beta_r", "v_scaled"]
    rows = [[x, float(vi)] for x, vi in zip(xs, v)]
    if config.mode == "physical":
        phys = config.physical
        p = MorseParams.from_units(phys["D"], phys["D_unit"], phys["beta_per_angstrom"], phys["r0_angstrom"], phys["mu_amu"])
        columns += ["r_angstrom", f"V_{phys['D_unit']}"]
        for row, x in zip(rows, xs):
            r = p.r0 if x == dp.beta_r0 else x / p.beta
            row += [r / 1e-10, eval_potential(p, r) / (p.D / phys["D"])]
    return Table(columns, rows, {"minimum": {"beta_r": dp.beta_r0, "v_scaled": -d * d}})


def cmd_bound(config: RunConfig) -> Table:
    pts = _points(config)
    tasks = [("bound", (p["d"], p["beta_r0"], config.condition, config.precision)) for p in pts]
    results = _map_points(tasks, pts, config.jobs)
    columns = ["d", "beta_r0", "condition", "count", "n", "b", "E_scaled", "delta_E", "missing_physical"]
    rows = [r for block in results for r in block]
    scale = _energy_scale(config)
    if scale:
        unit, factor = scale
        columns.append(f"E_{unit}")
        for r in rows:
            r.append(None if r[6] is None else r[6] * factor)
    diagnostics = {"energy_unit": "hbar^2 beta^2 / (2 mu)", "delta_E": "E_aux - E_phys"}
    return Table(columns, rows, diagnostics)


def cmd_phase(config: RunConfig) -> Table:
    cols = config.extra.get("columns", PHASE_COLUMNS)
    sweep = config.sweep
    if sweep is None or sweep.var == "k":
        if config.d is None:
            raise ConfigError("phase needs --d (or a preset)")
        ks = sweep.values() if sweep else [float(v) for v in np.linspace(0.01, 1.0, 50)]
        pts = [{"d": config.d, "beta_r0": config.beta_r0, "k": k} for k in ks]
    else:
        k = config.extra.get("k")
        if k is None:
            raise ConfigError("a d or beta_r0 phase sweep needs --k")
        pts = [{**p, "k": k} for p in _points(config)]
    for p in pts:
        if not p["k"] > 0:
            raise ConfigError("k must be positive")
    tasks = [("phase", (p["d"], p["beta_r0"], p["k"], tuple(cols), config.precision)) for p in pts]
    results = _map_points(tasks, pts, config.jobs)
    # continuity along the sweep for the analytic columns; oracle values are
    # only defined mod pi, so they take the branch nearest their analytic twin
    tracked = {c: track_branches([r[c] for r in results]) for c in cols if c in ("series", "gamma", "phys")}
    twin = {"oracle_aux": "gamma" if "gamma" in tracked else "series", "oracle_phys": "phys"}
    for c in cols:
        if c.startswith("oracle"):
            ref = tracked.get(twin[c])
            if ref is None:
                tracked[c] = track_branches([r[c] for r in results])
            else:
                tracked[c] = [
                    s.with_branch(int(round((t.unwrapped - s.delta0) / math.pi)))
                    for s, t in zip((r[c] for r in results), ref)
                ]
    columns = ["d", "beta_r0", "k_over_beta"] + [f"delta_{c}" for c in cols]
    rows = [[p["d"], p["beta_r0"], p["k"]] + [tracked[c][i].unwrapped for c in cols] for i, p in enumerate(pts)]
    return Table(columns, rows, {"branch": "analytic columns continuity-tracked; oracle columns aligned mod pi"})


def cmd_observables(config: RunConfig) -> Table:
    pts = _points(config)
    tasks = [("observables", (p["d"], p["beta_r0"], config.condition, config.precision)) for p in pts]
    results = _map_points(tasks, pts, config.jobs)
    columns = ["d", "beta_r0", "a_beta_aux", "re_beta_aux", "resonant_aux", "a_beta_phys", "re_beta_phys", "resonant_phys", "re_rel_diff", "near_pole"]
    rows = list(results)
    if config.mode == "physical":
        beta = config.physical["beta_per_angstrom"]
        columns += ["a_aux_angstrom", "a_phys_angstrom"]
        for r in rows:
            r += [None if r[2] is None else r[2] / beta, None if r[5] is None else r[5] / beta]
    ds = [p["d"] for p in pts]
    diagnostics: dict[str, Any] = {}
    if config.condition in ("aux", "both"):
        lo, hi = min(ds), max(ds)
        by_beta = {}
        for b in sorted({p["beta_r0"] for p in pts}):
            by_beta[repr(b)] = {
                "a_poles": unitarity_poles(lo, hi),
                "a_zeros": scattering_length_zeros(b, lo, hi),
            }
        diagnostics["loci"] = by_beta
        diagnostics["note"] = "a diverges at a_poles (r_e finite); r_e diverges at a_zeros"
    return Table(columns, rows, diagnostics)


COMMANDS = {
    "potential": cmd_potential,
    "bound": cmd_bound,
    "phase": cmd_phase,
    "observables": cmd_observables,
}


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


def _float_list(text: str) -> tuple:
    try:
        vals = tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from exc
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("parameters")
    g.add_argument("--d", type=float, help="reduced depth sqrt(2 mu D) / (hbar beta)")
    g.add_argument("--beta-r0", type=float, help="beta * r0 (default 4.15)")
    g.add_argument("--preset", choices=["li6"], help="Li-6 triplet: D = 40 meV, beta r0 = 4.15")
    g.add_argument("--D", dest="D", type=float, help="well depth in --D-unit")
    g.add_argument("--D-unit", choices=["J", "eV", "meV"], default=None, help="unit of --D (default meV)")
    g.add_argument("--beta", type=float, help="beta in 1/angstrom")
    g.add_argument("--r0", type=float, help="equilibrium distance in angstrom")
    g.add_argument("--mu", type=float, help="reduced mass in atomic mass units")
    g.add_argument("--sweep", help="VAR:START:STOP:N[:log]")
    g.add_argument("--condition", choices=["aux", "phys", "both"], default=None)
    o = p.add_argument_group("output")
    o.add_argument("--format", dest="fmt", choices=["csv", "json"], default="csv")
    o.add_argument("--out", help="output path (default stdout)")
    o.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    t = p.add_argument_group("tolerances")
    t.add_argument("--tol-kummer", type=float, help="relative accuracy certified for M(p, q, z)")
    t.add_argument("--tol-root", type=float, help="bisection tolerance on b")
    t.add_argument("--tol-series", type=float, help="truncation bound for series and products")
    t.add_argument("--tol-fit", type=float, help="ladder consistency on -1/a")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="morsescat",
        description="Morse-potential bound states and s-wave scattering observables.",
    )
    parser.add_argument("--version", action="version", version=f"morsescat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("potential", help="tabulate V(r)")
    _common(p)
    p.add_argument("--x-min", type=float, default=0.0, help="first beta*r sample")
    p.add_argument("--x-max", type=float, help="last beta*r sample (default beta r0 + 10)")
    p.add_argument("--points", type=int, default=201)

    p = sub.add_parser("bound", help="bound spectra and E_aux - E_phys")
    _common(p)
    p.add_argument("--figure", type=int, choices=[2], help="figure-2 sweep")
    p.add_argument("--beta-r0-list", type=_float_list, help="comma-separated beta r0 values")

    p = sub.add_parser("phase", help="phase shifts along k (or d)")
    _common(p)
    p.add_argument("--k", type=float, help="fixed k/beta for d or beta_r0 sweeps")
    p.add_argument("--columns", help=f"comma-separated subset of {','.join(PHASE_COLUMNS)}")

    p = sub.add_parser("observables", help="scattering length and effective range")
    _common(p)
    p.add_argument("--figure", type=int, choices=[1, 3], help="figure-1 or figure-3 sweep")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    figure = getattr(args, "figure", None)
    fig = FIGURE_DEFAULTS.get(figure, {}) if figure else {}

    phys_given = [x is not None for x in (args.D, args.beta, args.r0, args.mu)]
    physical = None
    if args.preset == "li6":
        physical = {
            "D": LI6_PRESET["D_meV"],
            "D_unit": "meV",
            "beta_per_angstrom": LI6_PRESET["beta_r0"] / LI6_PRESET["r0_angstrom"],
            "r0_angstrom": LI6_PRESET["r0_angstrom"],
            "mu_amu": LI6_PRESET["mu_amu"],
            "preset": "li6",
        }
    if any(phys_given):
        if physical is None and not all(phys_given):
            raise ConfigError("physical input needs all of --D, --beta, --r0, --mu")
        physical = dict(physical or {})
        for key, val in (("D", args.D), ("beta_per_angstrom", args.beta), ("r0_angstrom", args.r0), ("mu_amu", args.mu)):
            if val is not None:
                physical[key] = val
    if args.D_unit is not None:
        if physical is None:
            raise ConfigError("--D-unit needs --D")
        physical["D_unit"] = args.D_unit
    elif physical is not None:
        physical.setdefault("D_unit", "meV")

    if physical is not None:
        if args.d is not None or args.beta_r0 is not None:
            raise ConfigError("give either dimensionless (--d, --beta-r0) or physical parameters, not both")
        p = MorseParams.from_units(physical["D"], physical["D_unit"], physical["beta_per_angstrom"], physical["r0_angstrom"], physical["mu_amu"])
        dp = reduce(p)
        mode, d, beta_r0 = "physical", dp.d, dp.beta_r0
        physical["beta_r0"] = dp.beta_r0
    else:
        mode, d = "dimensionless", args.d
        beta_r0 = args.beta_r0 if args.beta_r0 is not None else fig.get("beta_r0", 4.15)

    command = args.command
    allowed = {"potential": ("x",), "bound": ("d", "beta_r0"), "phase": ("k", "d", "beta_r0"), "observables": ("d", "beta_r0")}[command]
    sweep_text = args.sweep or fig.get("sweep")
    sweep = Sweep.parse(sweep_text, allowed) if sweep_text else None

    precision = DEFAULT.with_overrides(
        kummer_rtol=args.tol_kummer,
        root_xtol=args.tol_root,
        series_tail=args.tol_series,
        fit_rtol=args.tol_fit,
    )
    for name in ("kummer_rtol", "root_xtol", "series_tail", "fit_rtol"):
        if not getattr(precision, name) > 0:
            raise ConfigError(f"tolerance {name} must be positive")
    if args.jobs < 1:
        raise ConfigError("--jobs must be at least 1")

    extra: dict[str, Any] = {}
    if command == "potential":
        extra = {"x_min": args.x_min, "points": args.points}
        if args.x_max is not None:
            extra["x_max"] = args.x_max
    elif command == "phase":
        if args.k is not None:
            extra["k"] = args.k
        if args.columns:
            cols = tuple(c.strip() for c in args.columns.split(",") if c.strip())
            bad = [c for c in cols if c not in PHASE_COLUMNS]
            if bad or not cols:
                raise ConfigError(f"unknown phase columns {bad}; choose from {','.join(PHASE_COLUMNS)}")
            extra["columns"] = cols

    beta_list = getattr(args, "beta_r0_list", None) or fig.get("beta_r0_list")
    if beta_list and command == "bound" and physical is not None:
        raise ConfigError("--beta-r0-list works with dimensionless input only")
    condition = args.condition or fig.get("condition", "both")

    return RunConfig(
        command=command,
        mode=mode,
        d=d,
        beta_r0=beta_r0,
        physical=physical,
        sweep=sweep,
        condition=condition,
        fmt=args.fmt,
        out=args.out,
        precision=precision,
        jobs=args.jobs,
        figure=figure,
        beta_r0_list=tuple(beta_list) if beta_list else None,
        extra=extra,
    )


def run(config: RunConfig) -> str:
    table = COMMANDS[config.command](config)
    return render_csv(table, config) if config.fmt == "csv" else render_json(table, config)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        config = config_from_args(args)
        text = run(config)
    except ConfigError as exc:
        print(f"morsescat: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PointFailure as exc:
        point = ", ".join(f"{k}={v!r}" for k, v in exc.point.items())
        print(f"morsescat: numerical failure at row {exc.index} ({point}): {exc.cause}", file=sys.stderr)
        return EXIT_NUMERICAL
    except MorseError as exc:
        print(f"morsescat: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
