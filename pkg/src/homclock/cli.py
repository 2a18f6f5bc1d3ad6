"""Command-line front end.

Subcommands: interferogram, heatmap, collapse-time, first-zero, verify,
state-dump.  Parameters come from an optional TOML config file plus flag
overrides (flags win).  All diagnostics go to stderr; outputs are CSV/JSON
on stdout or a file.  Exit codes: 0 success, 2 configuration error,
3 verification failure, 4 photon-number capability exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import engine, fock, render
from .errors import CapabilityError, ConfigError, HomclockError
from .gravity import (
    ClockConfig,
    GravityConfig,
    collapse_time,
    wavelength_to_angular,
)

DEFAULT_MODELS = (
    engine.ANALYTIC_PARITY,
    engine.ANALYTIC_ALL_SAME_PORT,
    engine.ANALYTIC_MZ,
)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _load_config(path):
    if path is None:
        return {}
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config: file not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config: invalid TOML: {exc}")


def _pick(args, flag_name, table, key, default=None):
    value = getattr(args, flag_name, None)
    if value is not None:
        return value
    if key in table:
        return table[key]
    return default


def _build_gravity(args, cfg, errors):
    table = cfg.get("gravity", {})
    g = _pick(args, "gravity", table, "g", 9.80665)
    height = _pick(args, "height", table, "height")
    h_upper = _pick(args, "height_upper", table, "height_upper")
    h_lower = _pick(args, "height_lower", table, "height_lower")
    if height is not None and (h_upper is not None or h_lower is not None):
        errors.append("gravity.height: give either height or height_upper/height_lower, not both")
        return None
    if height is not None:
        h_upper, h_lower = height, 0.0
    try:
        return GravityConfig(g=float(g), h_upper=float(h_upper or 0.0), h_lower=float(h_lower or 0.0))
    except (HomclockError, TypeError, ValueError) as exc:
        errors.append(f"gravity: {exc}")
        return None


def _resolve_bin(args, table, bin_index, errors):
    forms = {
        f"omega{bin_index}": getattr(args, f"omega{bin_index}", None)
        if getattr(args, f"omega{bin_index}", None) is not None
        else table.get(f"omega{bin_index}"),
        f"frequency{bin_index}": getattr(args, f"frequency{bin_index}", None)
        if getattr(args, f"frequency{bin_index}", None) is not None
        else table.get(f"frequency{bin_index}"),
        f"wavelength{bin_index}": getattr(args, f"wavelength{bin_index}", None)
        if getattr(args, f"wavelength{bin_index}", None) is not None
        else table.get(f"wavelength{bin_index}"),
    }
    given = {k: v for k, v in forms.items() if v is not None}
    paths = " / ".join(f"clock.{k}" for k in forms)
    if len(given) == 0:
        errors.append(f"{paths}: exactly one frequency form per bin is required, got none")
        return None
    if len(given) > 1:
        errors.append(f"{paths}: exactly one frequency form per bin is required, got {sorted(given)}")
        return None
    (key, value), = given.items()
    try:
        value = float(value)
        if key.startswith("omega"):
            return value
        if key.startswith("frequency"):
            return 2.0 * math.pi * value
        return wavelength_to_angular(value)
    except (HomclockError, TypeError, ValueError) as exc:
        errors.append(f"clock.{key}: {exc}")
        return None


def _build_clock(args, cfg, errors):
    table = cfg.get("clock", {})
    omega1 = _resolve_bin(args, table, 1, errors)
    omega2 = _resolve_bin(args, table, 2, errors)
    n = _pick(args, "photons", table, "photons", 2)
    phi = _pick(args, "phi", table, "phi", 0.0)
    tau = _pick(args, "tau", table, "tau", 0.0)
    eta_upper = _pick(args, "eta_upper", table, "eta_upper", 1.0)
    eta_lower = _pick(args, "eta_lower", table, "eta_lower", 1.0)
    if omega1 is None or omega2 is None:
        return None
    try:
        return ClockConfig(
            omega1=omega1, omega2=omega2, n_photons=int(n), phi=float(phi),
            tau_upper=float(tau), tau_lower=float(tau),
            eta_upper=float(eta_upper), eta_lower=float(eta_lower),
        )
    except (HomclockError, TypeError, ValueError) as exc:
        errors.append(f"clock: {exc}")
        return None


def _physics_from_args(args):
    cfg = _load_config(getattr(args, "config", None))
    errors = []
    gravity = _build_gravity(args, cfg, errors)
    clock = _build_clock(args, cfg, errors)
    if errors:
        raise ConfigError("; ".join(errors))
    return cfg, gravity, clock


def _write_text(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _interferogram_csv(records):
    lines = ["tau_s,model,value,phi_hom"]
    for r in records:
        lines.append(f"{_fmt(r.tau)},{r.model},{_fmt(r.value)},{_fmt(r.phi_hom)}")
    return "\n".join(lines) + "\n"


def _heatmap_csv(cells):
    lines = ["delta_f_hz,height_m,tau_ent_s,marker"]
    for c in cells:
        lines.append(f"{_fmt(c.delta_f_hz)},{_fmt(c.height_m)},{_fmt(c.tau_ent_s)},{c.marker}")
    return "\n".join(lines) + "\n"


def _cmd_interferogram(args):
    cfg, gravity, clock = _physics_from_args(args)
    sweep_cfg = cfg.get("sweep", {})
    start = float(_pick(args, "tau_start", sweep_cfg, "tau_start", 0.0))
    stop = _pick(args, "tau_stop", sweep_cfg, "tau_stop")
    count = int(_pick(args, "tau_count", sweep_cfg, "tau_count", 2048))
    if stop is None:
        try:
            stop = 4.0 * collapse_time(gravity, replace(clock, n_photons=1))
        except HomclockError:
            raise ConfigError(
                "sweep.tau_stop: required explicitly when the geometry is flat "
                "(no collapse time to set a default scale)"
            )
    models_arg = _pick(args, "models", sweep_cfg, "models", None)
    if models_arg is None:
        model_names = DEFAULT_MODELS
    elif isinstance(models_arg, str):
        model_names = tuple(m.strip() for m in models_arg.split(",") if m.strip())
    else:
        model_names = tuple(models_arg)
    loss = bool(_pick(args, "loss", sweep_cfg, "loss", False))
    spec = engine.SweepSpec(
        gravity=gravity, clock=clock,
        tau_grid=engine.linspace_grid(start, float(stop), count),
        model_names=model_names, loss_enabled=loss,
    )
    records = engine.interferogram(spec, workers=args.workers)
    _write_text(args.output, _interferogram_csv(records))
    if args.svg:
        _write_text(args.svg, render.interferogram_svg(records))
    return 0


def _cmd_heatmap(args):
    cfg = _load_config(getattr(args, "config", None))
    errors = []
    gravity = _build_gravity(args, cfg, errors)
    if errors:
        raise ConfigError("; ".join(errors))
    table = cfg.get("heatmap", {})
    markers = () if args.no_markers else engine.default_markers()
    spec = engine.HeatmapSpec(
        delta_f_min=float(_pick(args, "delta_f_min", table, "delta_f_min", 1e9)),
        delta_f_max=float(_pick(args, "delta_f_max", table, "delta_f_max", 1e15)),
        delta_f_count=int(_pick(args, "delta_f_count", table, "delta_f_count", 200)),
        h_min=float(_pick(args, "h_min", table, "h_min", 1.0)),
        h_max=float(_pick(args, "h_max", table, "h_max", 1e4)),
        h_count=int(_pick(args, "h_count", table, "h_count", 200)),
        n_photons=int(_pick(args, "photons", table, "photons", 2)),
        gravity_g=gravity.g,
        markers=markers,
    )
    cells = engine.collapse_heatmap(spec)
    _write_text(args.output, _heatmap_csv(cells))
    if args.svg:
        _write_text(args.svg, render.heatmap_svg(cells))
    return 0


def _cmd_collapse_time(args):
    _, gravity, clock = _physics_from_args(args)
    print(_fmt(collapse_time(gravity, clock)))
    return 0


def _cmd_first_zero(args):
    _, gravity, clock = _physics_from_args(args)
    print(_fmt(engine.first_zero(gravity, clock, args.model)))
    return 0


def _cmd_verify(args):
    report = engine.verify(args.suite)
    _write_text(args.output, json.dumps(report.to_dict(), indent=2) + "\n")
    print(
        f"suite={report.suite} cases={len(report.cases)} "
        f"max_delta={report.max_delta:.3e} verdict={report.verdict}",
        file=sys.stderr,
    )
    return 0 if report.passed else 3


def _cmd_state_dump(args):
    _, gravity, clock = _physics_from_args(args)
    state = engine.pipeline_stage_state(
        gravity, clock, stage=args.stage, loss_enabled=args.loss, pipeline=args.pipeline
    )
    _write_text(args.output, json.dumps(fock.state_to_dict(state), indent=2) + "\n")
    return 0


def _add_physics_flags(parser):
    parser.add_argument("--config", help="TOML config file")
    parser.add_argument("--gravity", type=float, help="gravitational acceleration m/s^2")
    parser.add_argument("--height", type=float, help="upper arm height m (lower at 0)")
    parser.add_argument("--height-upper", dest="height_upper", type=float)
    parser.add_argument("--height-lower", dest="height_lower", type=float)
    parser.add_argument("--photons", type=int, help="photon number per branch")
    parser.add_argument("--phi", type=float, help="source phase rad")
    for b in (1, 2):
        parser.add_argument(f"--omega{b}", type=float, help=f"bin {b} angular frequency rad/s")
        parser.add_argument(f"--frequency{b}", type=float, help=f"bin {b} frequency Hz")
        parser.add_argument(f"--wavelength{b}", type=float, help=f"bin {b} vacuum wavelength m")
    parser.add_argument("--tau", type=float, help="storage time s (both arms)")
    parser.add_argument("--eta-upper", dest="eta_upper", type=float)
    parser.add_argument("--eta-lower", dest="eta_lower", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homclock",
        description="Storage interferometry of frequency-bin photonic clocks "
        "under gravitational time dilation: exact Fock-space pipelines, "
        "closed-form models, and their cross-verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("interferogram", help="signal vs storage time, CSV")
    _add_physics_flags(p)
    p.add_argument("--tau-start", dest="tau_start", type=float)
    p.add_argument("--tau-stop", dest="tau_stop", type=float)
    p.add_argument("--tau-count", dest="tau_count", type=int)
    p.add_argument("--models", help="comma-separated model list")
    p.add_argument("--loss", action="store_const", const=True, default=None,
                   help="enable memory loss + post-selection for oracle models")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--output", "-o", default=None)
    p.add_argument("--svg", default=None)
    p.set_defaults(func=_cmd_interferogram)

    p = sub.add_parser("heatmap", help="collapse time over (delta_f, height), CSV")
    p.add_argument("--config", help="TOML config file")
    p.add_argument("--gravity", type=float)
    p.add_argument("--delta-f-min", dest="delta_f_min", type=float)
    p.add_argument("--delta-f-max", dest="delta_f_max", type=float)
    p.add_argument("--delta-f-count", dest="delta_f_count", type=int)
    p.add_argument("--h-min", dest="h_min", type=float)
    p.add_argument("--h-max", dest="h_max", type=float)
    p.add_argument("--h-count", dest="h_count", type=int)
    p.add_argument("--photons", type=int)
    p.add_argument("--no-markers", dest="no_markers", action="store_true")
    p.add_argument("--output", "-o", default=None)
    p.add_argument("--svg", default=None)
    p.set_defaults(func=_cmd_heatmap)

    p = sub.add_parser("collapse-time", help="print the first-zero storage time")
    _add_physics_flags(p)
    p.set_defaults(func=_cmd_collapse_time)

    p = sub.add_parser("first-zero", help="bisect the parity signal to its first zero")
    _add_physics_flags(p)
    p.add_argument("--model", default=engine.ANALYTIC_PARITY,
                   choices=(engine.ANALYTIC_PARITY, engine.ORACLE_PARITY))
    p.set_defaults(func=_cmd_first_zero)

    p = sub.add_parser("verify", help="closed forms vs exact engine, JSON report")
    p.add_argument("--suite", default="quick", choices=("quick", "full"))
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("state-dump", help="serialize a pipeline state as JSON")
    _add_physics_flags(p)
    p.add_argument("--stage", default="output", choices=engine.PIPELINE_STAGES)
    p.add_argument("--pipeline", default="hom", choices=("hom", "mz"))
    p.add_argument("--loss", action="store_true")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=_cmd_state_dump)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except HomclockError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
