"""Command-line front end.

Every subcommand emits one table as CSV (with a ``#`` comment header) or
JSON (``meta`` object plus ``columns``/``rows``).  Times appear twice: in
units of ``2 m a^2`` (``*_tilde``) and in physical units.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from zenolab import __version__, tolerances
from zenolab.continuum import spectral_weight, weight_prefactor
from zenolab.errors import ConfigError, NumericalError, RegimeError, ZenolabError
from zenolab.model import ModelParams, PhysicalConfig, to_dimensionless, validate
from zenolab.poles import LevelAnalysis, analyze_level
from zenolab.quasibound import QuasiLevel, find_levels
from zenolab.survival import QuadratureOptions, p2, p4, p4_approx, p_oracle
from zenolab.zeno import crossover, sweep_tau2_vs_gap, sweep_tau2_vs_w

log = logging.getLogger("zenolab")

EXIT_OK, EXIT_CONFIG, EXIT_NO_LEVELS, EXIT_NUMERICAL = 0, 2, 3, 4
CONFIG_KEYS = {"m": "m", "a": "a", "b": "b", "V0": "V0", "v0": "V0"}


class NoLevelsError(ZenolabError):
    pass


@dataclass
class Table:
    columns: list[str]
    rows: list[list[Any]] = field(default_factory=list)
    meta: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)


def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        x = float(value)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, ".17g")
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        x = float(value)
        return x if math.isfinite(x) else None
    if isinstance(value, dict):
        return {k: _json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    return value


def render(table: Table, fmt: str) -> str:
    if fmt == "json":
        doc = {
            "meta": _json_value(table.meta),
            "columns": table.columns,
            "rows": [dict(zip(table.columns, _json_value(list(r)))) for r in table.rows],
        }
        if table.notes:
            doc["notes"] = table.notes
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    buf.write(f"# zenolab {__version__}\n")
    for note in table.notes:
        buf.write(f"# {note}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


# -- configuration ---------------------------------------------------------


def load_config(args: argparse.Namespace) -> PhysicalConfig:
    values: dict[str, float] = {}
    if args.config:
        try:
            raw = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config file must hold a flat JSON object")
        for key, val in raw.items():
            if key not in CONFIG_KEYS:
                raise ConfigError(f"unknown config key {key!r}")
            values[CONFIG_KEYS[key]] = val
    for flag, key in (("m", "m"), ("a", "a"), ("b", "b"), ("v0", "V0")):
        val = getattr(args, flag)
        if val is not None:
            values[key] = val
    missing = [k for k in ("m", "a", "b", "V0") if k not in values]
    if missing:
        raise ConfigError(f"missing configuration values: {', '.join(missing)}")
    try:
        cfg = PhysicalConfig(**{k: float(v) for k, v in values.items()})
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"non-numeric configuration value: {exc}") from exc
    report = validate(cfg)
    if not report.ok:
        raise ConfigError("; ".join(report.violations))
    return cfg


def _base_meta(args: argparse.Namespace, cfg: PhysicalConfig, params: ModelParams) -> dict[str, Any]:
    return {
        "version": __version__,
        "subcommand": args.command,
        "config": dataclasses.asdict(cfg),
        "dimensionless": {"u": params.u, "w": params.w, "time_scale": params.time_scale},
        "tolerance_profile": tolerances.profile_name(),
        "tolerances": tolerances.current(),
    }


def _levels(params: ModelParams, include_shallow: bool = True) -> list[QuasiLevel]:
    levels = find_levels(params, include_shallow=include_shallow)
    if not levels:
        raise NoLevelsError(f"no quasi-levels for u = {params.u:.6g}")
    return levels


def _select(levels: list[QuasiLevel], index: int | None) -> list[QuasiLevel]:
    if index is None:
        return levels
    chosen = [lv for lv in levels if lv.index == index]
    if not chosen:
        raise ConfigError(f"level {index} does not exist (available: 1..{len(levels)})")
    return chosen


def _analyses(params: ModelParams, args: argparse.Namespace, notes: list[str]) -> list[LevelAnalysis]:
    """Analyses for the requested level, or for every validated level."""
    levels = _select(_levels(params, include_shallow=True), args.level)
    if args.level is not None:
        return [analyze_level(params, levels[0])]
    out = []
    for lv in levels:
        if lv.shallow and not args.include_shallow:
            notes.append(f"level {lv.index} skipped: shallow")
            continue
        try:
            out.append(analyze_level(params, lv))
        except RegimeError as exc:
            notes.append(f"level {lv.index} skipped: {exc}")
    return out


# -- subcommands -----------------------------------------------------------


def cmd_levels(args, cfg, params) -> Table:
    t = Table(["index", "sigma0", "arho0", "E0_over_V0", "E0", "shallow"])
    for lv in _levels(params, include_shallow=True):
        t.rows.append([lv.index, lv.sigma0, lv.arho0, lv.E0_over_V0, lv.E0_over_V0 * cfg.V0, lv.shallow])
    return t


def cmd_spectrum(args, cfg, params) -> Table:
    (lv,) = _select(_levels(params), args.level or 1)
    an = analyze_level(params, lv)
    shape, taylor = an.shape, an.taylor
    half = args.span * shape.gamma
    root_u = math.sqrt(params.u)
    lo, hi = max(lv.sigma0 - half, 1e-6 * root_u), min(lv.sigma0 + half, root_u * (1 - 1e-9))
    sigma = np.linspace(lo, hi, args.samples)
    delta = sigma - lv.sigma0
    pref = weight_prefactor(lv)
    weight = spectral_weight(params, lv, sigma)
    bw = pref * np.exp(-shape.log_K) / (delta * delta - shape.epsilon * delta + shape.gamma**2)
    quartic = pref * np.exp(-taylor.log_c2) / taylor.evaluate(delta)
    t = Table(["sigma", "delta", "E_over_V0", "weight", "weight_breit_wigner", "weight_quartic"])
    for row in zip(sigma, delta, sigma * sigma / params.u, weight, bw, quartic):
        t.rows.append(list(row))
    t.meta["level"] = lv.index
    t.meta["span_gamma"] = args.span
    return t


def cmd_poles(args, cfg, params) -> Table:
    notes: list[str] = []
    ts = params.time_scale
    t = Table(
        [
            "level", "sigma0", "x0", "y0", "x1", "y1", "x2", "y2", "residual1", "residual2",
            "alpha", "beta", "N", "tau0_tilde", "tau0", "tau1_tilde", "tau1", "tau2_tilde", "tau2",
        ],
        notes=notes,
    )
    for an in _analyses(params, args, notes):
        sp, ps = an.survival, an.poles
        t.rows.append(
            [
                an.level.index, an.level.sigma0, an.z0.x, an.z0.y, sp.x1, sp.y1, sp.x2, sp.y2,
                ps.residual1, ps.residual2, sp.alpha, sp.beta, sp.N,
                sp.tau0_exact, sp.tau0_exact * ts, sp.tau1_tilde, sp.tau1_tilde * ts,
                sp.tau2_tilde, sp.tau2_tilde * ts,
            ]
        )
    return t


def cmd_survival(args, cfg, params) -> Table:
    (lv,) = _select(_levels(params), args.level or 1)
    an = analyze_level(params, lv)
    sp = an.survival
    t_max = args.t_max if args.t_max is not None else 3.0 * sp.tau2_tilde
    if not t_max > 0:
        raise ConfigError("--t-max must be positive")
    tt = np.linspace(0.0, t_max, args.samples)
    methods = ["p2", "p4", "p4_approx", "oracle"] if args.method == "all" else [args.method]
    cols: list[tuple[str, np.ndarray]] = []
    for method in methods:
        if method == "p2":
            cols.append(("p2", p2(tt, an.z0)))
        elif method == "p4":
            cols.append(("p4", p4(tt, sp)))
        elif method == "p4_approx":
            cols.append(("p4_approx", p4_approx(tt, sp)))
        else:
            opts = QuadratureOptions(abs_tol=tolerances.current()["quadrature_abs"])
            res = p_oracle(tt, params, lv, opts)
            cols.append(("p_oracle_renormalized", res.renormalized))
    t = Table(["t_tilde", "t"] + [name for name, _ in cols])
    for i, ti in enumerate(tt):
        t.rows.append([ti, ti * params.time_scale] + [vals[i] for _, vals in cols])
    t.meta["level"] = lv.index
    t.meta["t_max_tilde"] = t_max
    return t


def cmd_crossover(args, cfg, params) -> Table:
    notes: list[str] = []
    ts = params.time_scale
    t = Table(
        ["level", "exists", "lhs", "rhs", "t_star_tilde", "t_star", "phi_residual", "t_star_exact_tilde", "t_star_exact"],
        notes=notes,
    )
    for an in _analyses(params, args, notes):
        cr = crossover(an.survival)
        scale = (lambda v: None if v is None else v * ts)
        t.rows.append(
            [
                an.level.index, cr.exists, cr.lhs, cr.rhs, cr.t_star_tilde, scale(cr.t_star_tilde),
                cr.phi_residual, cr.t_star_exact_tilde, scale(cr.t_star_exact_tilde),
            ]
        )
    return t


def cmd_sweep(args, cfg, params) -> Table:
    if args.sweep_from is None or args.sweep_to is None:
        raise ConfigError("sweep needs --sweep-from and --sweep-to")
    if args.sweep_steps < 2:
        raise ConfigError("--sweep-steps must be at least 2")
    values = np.linspace(args.sweep_from, args.sweep_to, args.sweep_steps)
    if args.sweep_param == "w":
        if np.any(values <= 0):
            raise ConfigError("barrier widths must be positive")
        res = sweep_tau2_vs_w(cfg, args.level or 1, values)
    else:
        if np.any(values <= 0):
            raise ConfigError("V0 values must be positive")
        configs = [dataclasses.replace(cfg, V0=float(v)) for v in values]
        res = sweep_tau2_vs_gap(configs, params.w, include_shallow=args.include_shallow)
    t = Table(
        [
            args.sweep_param, "level", "sigma0", "arho0", "x1", "y1", "x2", "y2",
            "tau1_tilde", "tau1", "tau2_tilde", "tau2", "tau2_phenomenological", "inv_sqrt_gap",
        ],
        notes=list(res.warnings),
    )
    for r in res.rows:
        t.rows.append(
            [
                r.param, r.level_index, r.sigma0, r.arho0, r.x1, r.y1, r.x2, r.y2,
                r.tau1_tilde, r.tau1, r.tau2_tilde, r.tau2, r.tau2_phen, r.inv_sqrt_gap,
            ]
        )
    if res.fit is not None:
        t.meta["fit"] = dataclasses.asdict(res.fit)
        against = "w" if args.sweep_param == "w" else "inv_sqrt_gap"
        t.notes.insert(
            0,
            f"fit tau2 vs {against}: slope={_fmt(res.fit.slope)} "
            f"intercept={_fmt(res.fit.intercept)} r2={_fmt(res.fit.r2)} n={res.fit.n}",
        )
    if not res.rows:
        raise RegimeError("no sweep point lies in the validated regime")
    return t


def cmd_report(args, cfg, params) -> Table:
    ts = params.time_scale
    t = Table(
        [
            "level", "sigma0", "arho0", "E0_over_V0", "x1", "y1", "x2", "y2",
            "tau1_tilde", "tau1", "tau2_tilde", "tau2", "tau0_tilde", "tau0",
            "t_star_tilde", "t_star", "status",
        ]
    )
    levels = _select(_levels(params, include_shallow=True), args.level)
    for lv in levels:
        head = [lv.index, lv.sigma0, lv.arho0, lv.E0_over_V0]
        if lv.shallow and not args.include_shallow:
            t.rows.append(head + [None] * 12 + ["shallow"])
            continue
        try:
            sp = analyze_level(params, lv).survival
        except RegimeError as exc:
            t.rows.append(head + [None] * 12 + [f"outside validated regime: {exc}"])
            continue
        cr = crossover(sp)
        tstar = cr.t_star_tilde
        t.rows.append(
            head
            + [
                sp.x1, sp.y1, sp.x2, sp.y2,
                sp.tau1_tilde, sp.tau1_tilde * ts, sp.tau2_tilde, sp.tau2_tilde * ts,
                sp.tau0_exact, sp.tau0_exact * ts,
                tstar, None if tstar is None else tstar * ts, "ok",
            ]
        )
    return t


COMMANDS = {
    "levels": cmd_levels,
    "spectrum": cmd_spectrum,
    "poles": cmd_poles,
    "survival": cmd_survival,
    "crossover": cmd_crossover,
    "sweep": cmd_sweep,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("configuration (natural units, hbar = 1)")
    g.add_argument("--config", help="flat JSON file with m, a, b, V0; flags override it")
    g.add_argument("--m", type=float, help="particle mass")
    g.add_argument("--a", type=float, help="well radius")
    g.add_argument("--b", type=float, help="outer barrier radius")
    g.add_argument("--v0", type=float, help="barrier height V0")
    o = common.add_argument_group("output")
    o.add_argument("--format", choices=("csv", "json"), default="csv")
    o.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--level", type=int, help="level index (1 = deepest)")
    common.add_argument("--include-shallow", action="store_true", help="keep levels with a*rho0 < 0.5")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="zenolab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"zenolab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("levels", parents=[common], help="quasi-stationary levels")
    sp = sub.add_parser("spectrum", parents=[common], help="spectral weight around a level")
    sp.add_argument("--samples", type=int, default=401)
    sp.add_argument("--span", type=float, default=20.0, help="half-range in units of gamma")
    sub.add_parser("poles", parents=[common], help="Breit-Wigner and two-pole parameters")
    sv = sub.add_parser("survival", parents=[common], help="survival probability curves")
    sv.add_argument("--t-max", type=float, help="end of the grid in t_tilde (default 3 tau2)")
    sv.add_argument("--samples", type=int, default=201)
    sv.add_argument("--method", choices=("p2", "p4", "p4_approx", "oracle", "all"), default="all")
    sub.add_parser("crossover", parents=[common], help="inverse-Zeno crossover times")
    sw = sub.add_parser("sweep", parents=[common], help="tau2 along a parameter sweep")
    sw.add_argument("--sweep-param", choices=("w", "V0"), default="w")
    sw.add_argument("--sweep-from", type=float)
    sw.add_argument("--sweep-to", type=float)
    sw.add_argument("--sweep-steps", type=int, default=11)
    sub.add_parser("report", parents=[common], help="per-level summary table")
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    if getattr(args, "samples", 2) < 2:
        parser.error("--samples must be at least 2")
    try:
        cfg = load_config(args)
        params = to_dimensionless(cfg)
        table = COMMANDS[args.command](args, cfg, params)
    except ConfigError as exc:
        print(f"zenolab: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NoLevelsError as exc:
        print(f"zenolab: {exc}", file=sys.stderr)
        return EXIT_NO_LEVELS
    except NumericalError as exc:
        print(f"zenolab: numerical failure in {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except RegimeError as exc:
        print(f"zenolab: outside the validated regime: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    table.meta = {**_base_meta(args, cfg, params), **table.meta}
    text = render(table, args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
