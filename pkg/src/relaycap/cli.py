"""Command-line front end.

Subcommands: capacity (rates at one relay position), sweep (CSV over a
trajectory plus shape report), optimize-power (two-hop allocation) and
verify (closed-form vs oracle cross-checks).

Configuration is a flat key-value document (one ``key = value`` per line,
``#`` comments); command-line flags override file values, and a ``--preset``
seeds the whole configuration before the file is applied.  Power values
accept W / mW / uW suffixes and are stored in watts.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .capacity_bounds import af_beta_max
from .errors import ConfigParseError, RelayCapError, UsageError
from .link_model import PathLossParams, PowerBudget, NodeGeometry, gains_from_geometry
from .power_alloc import two_hop_allocate
from .sweep import (
    SweepSpec,
    analyze_sweep,
    emit_csv,
    evaluate_position,
    format_csv_row,
    preset_scenarios,
    run_sweep,
)
from .verification import format_check, run_all

__all__ = ["RunConfig", "parse_config", "config_from_preset", "execute", "main"]

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_USAGE = 2
EXIT_IO = 3

_UNSET = object()


@dataclass(frozen=True)
class RunConfig:
    """Validated run parameters; None marks values a command may still require."""

    p_s_max: float | None = None
    p_r_max: float | None = None
    noise: float | None = None
    d_sd: float | None = None
    d_r: float = 0.0
    d_sr: float | None = None
    sweep_start: float | None = None
    sweep_end: float | None = None
    sweep_step: float | None = None
    lambda0: float = 0.12
    alpha: float = 2.0
    base_gain: float = 1.0
    beta: float | None = None     # None selects the maximum admissible factor
    out_path: str | None = None
    samples: int = 1000
    seed: int = 0

    def budget(self) -> PowerBudget:
        if self.p_s_max is None or self.p_r_max is None or self.noise is None:
            raise UsageError("power budget is not fully configured "
                             "(budget.p_s_max, budget.p_r_max, budget.noise)")
        return PowerBudget(p_s_max=self.p_s_max, p_r_max=self.p_r_max, noise=self.noise)

    def path_params(self) -> PathLossParams:
        return PathLossParams(wavelength=self.lambda0, exponent=self.alpha,
                              base_gain=self.base_gain)


def _parse_float(text: str) -> float:
    value = float(text)
    if math.isnan(value):
        raise ValueError("not a number")
    return value


def _parse_power(text: str) -> float:
    t = text.strip()
    for suffix, scale in (("mW", 1e-3), ("uW", 1e-6), ("W", 1.0)):
        if t.endswith(suffix):
            return _parse_float(t[: -len(suffix)].strip()) * scale
    return _parse_float(t)


def _parse_int(text: str) -> int:
    return int(text.strip(), 10)


def _finite(v: float) -> bool:
    return math.isfinite(v)


def _positive(v: float) -> bool:
    return math.isfinite(v) and v > 0.0


def _nonnegative(v: float) -> bool:
    return math.isfinite(v) and v >= 0.0


# key -> (config field, value parser, domain predicate, domain description)
_KEY_TABLE: dict[str, tuple[str, Callable, Callable, str]] = {
    "budget.p_s_max": ("p_s_max", _parse_power, _nonnegative, "a power >= 0"),
    "budget.p_r_max": ("p_r_max", _parse_power, _nonnegative, "a power >= 0"),
    "budget.noise": ("noise", _parse_power, _positive, "a power > 0"),
    "geom.d_sd": ("d_sd", _parse_float, _positive, "a distance > 0"),
    "geom.d_r": ("d_r", _parse_float, _nonnegative, "a distance >= 0"),
    "geom.d_sr": ("d_sr", _parse_float, _finite, "a finite coordinate"),
    "sweep.start": ("sweep_start", _parse_float, _finite, "a finite coordinate"),
    "sweep.end": ("sweep_end", _parse_float, _finite, "a finite coordinate"),
    "sweep.step": ("sweep_step", _parse_float, _positive, "a step > 0"),
    "pathloss.lambda0": ("lambda0", _parse_float, _positive, "a length > 0"),
    "pathloss.alpha": ("alpha", _parse_float, _positive, "an exponent > 0"),
    "pathloss.base_gain": ("base_gain", _parse_float, _positive, "a gain > 0"),
    "verify.samples": ("samples", _parse_int, lambda v: v >= 1, "an integer >= 1"),
    "verify.seed": ("seed", _parse_int, lambda v: True, "an integer"),
}

_REQUIRED_KEYS = ("geom.d_sd", "budget.p_s_max", "budget.p_r_max", "budget.noise")
_FIELD_OF_KEY = {key: spec[0] for key, spec in _KEY_TABLE.items()}
_FIELD_OF_KEY["af.beta"] = "beta"
_FIELD_OF_KEY["out.path"] = "out_path"


def parse_config(text: str, base: RunConfig | None = None) -> RunConfig:
    """Parse a configuration document into a RunConfig.

    Without a base, the geometry (geom.d_sd) and the full power budget are
    required.  Unknown keys, duplicates, malformed values and out-of-domain
    values are parse errors naming the key and line.
    """
    values: dict[str, object] = {}
    seen: dict[str, int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParseError("expected `key = value`", line=lineno)
        key, _, value_text = line.partition("=")
        key = key.strip()
        value_text = value_text.strip()
        if key in seen:
            raise ConfigParseError(f"duplicate key (first set on line {seen[key]})",
                                   key=key, line=lineno)
        seen[key] = lineno

        if key == "af.beta":
            if value_text.lower() == "max":
                values["beta"] = None
            else:
                try:
                    beta = _parse_float(value_text)
                except ValueError:
                    raise ConfigParseError(f"expected a number or `max`, got {value_text!r}",
                                           key=key, line=lineno) from None
                if not _nonnegative(beta):
                    raise ConfigParseError(f"must be >= 0 or `max`, got {value_text!r}",
                                           key=key, line=lineno)
                values["beta"] = beta
            continue
        if key == "out.path":
            if not value_text:
                raise ConfigParseError("expected a path", key=key, line=lineno)
            values["out_path"] = value_text
            continue
        if key not in _KEY_TABLE:
            raise ConfigParseError("unknown key", key=key, line=lineno)

        field, parser, predicate, description = _KEY_TABLE[key]
        try:
            value = parser(value_text)
        except ValueError:
            raise ConfigParseError(f"expected {description}, got {value_text!r}",
                                   key=key, line=lineno) from None
        if not predicate(value):
            raise ConfigParseError(f"must be {description}, got {value_text!r}",
                                   key=key, line=lineno)
        values[field] = value

    merged = dataclasses.replace(base if base is not None else RunConfig(), **values)

    for key in _REQUIRED_KEYS:
        if getattr(merged, _FIELD_OF_KEY[key]) is None:
            raise ConfigParseError("missing required key", key=key)
    if (merged.sweep_start is not None and merged.sweep_end is not None
            and merged.sweep_start > merged.sweep_end):
        raise ConfigParseError(
            f"sweep.start ({merged.sweep_start!r}) must not exceed sweep.end "
            f"({merged.sweep_end!r})", key="sweep.start")
    return merged


def config_from_preset(name: str) -> RunConfig:
    presets = preset_scenarios()
    if name not in presets:
        raise UsageError(f"unknown preset {name!r}; have {sorted(presets)}")
    spec = presets[name]
    return RunConfig(
        p_s_max=spec.budget.p_s_max,
        p_r_max=spec.budget.p_r_max,
        noise=spec.budget.noise,
        d_sd=spec.d_sd,
        d_r=spec.d_r,
        sweep_start=spec.axis_start,
        sweep_end=spec.axis_end,
        sweep_step=spec.axis_step,
        lambda0=spec.path.wavelength,
        alpha=spec.path.exponent,
        base_gain=spec.path.base_gain,
        beta=spec.beta,
    )


def _require(config: RunConfig, field: str, hint: str) -> float:
    value = getattr(config, field)
    if value is None:
        raise UsageError(f"{hint} is required for this command")
    return value


def _run_capacity(config: RunConfig) -> int:
    budget = config.budget()
    d_sd = _require(config, "d_sd", "geom.d_sd")
    d_sr = _require(config, "d_sr", "geom.d_sr (or --d-sr)")
    row = evaluate_position(d_sr, d_sd, config.d_r, budget,
                            config.path_params(), config.beta)
    unreachable = row.gains.gamma_sr == 0.0
    if unreachable:
        # The relay hears nothing; relay-assisted rates degenerate to the
        # direct link, so report that value instead of amplified noise.
        row = dataclasses.replace(row, rate_af=row.rate_direct)

    print(f"relay position  d_sr = {d_sr:.9e} m  (d_sd = {d_sd:.9e} m, d_r = {config.d_r:.9e} m)")
    print(f"link gains      gamma_sr = {row.gains.gamma_sr:.9e}  "
          f"gamma_rd = {row.gains.gamma_rd:.9e}  gamma_sd = {row.gains.gamma_sd:.9e}")
    print("rates [bits per channel use]")
    print(f"  direct  {row.rate_direct:.9f}")
    print(f"  mrc     {row.rate_mrc:.9f}")
    print(f"  af      {row.rate_af:.9f}")
    print(f"  cutset  {row.rate_cutset:.9f}  (rho* = {row.rho_star:.9f}, "
          f"binding {row.binding.value})")
    if unreachable:
        print("note: relay unreachable (gamma_sr = 0); AF/MRC shown at the direct-link value")
    print(format_csv_row(row))
    return EXIT_OK


def _run_sweep(config: RunConfig) -> int:
    budget = config.budget()
    d_sd = _require(config, "d_sd", "geom.d_sd")
    start = _require(config, "sweep_start", "sweep.start")
    end = _require(config, "sweep_end", "sweep.end")
    step = _require(config, "sweep_step", "sweep.step")
    spec = SweepSpec(d_sd=d_sd, d_r=config.d_r, axis_start=start, axis_end=end,
                     axis_step=step, budget=budget, path=config.path_params(),
                     beta=config.beta)
    result = run_sweep(spec)
    out_path = config.out_path or "sweep.csv"
    written = emit_csv(result.rows, out_path)
    print(f"wrote {len(result.rows)} rows ({written} bytes) to {out_path}")
    if result.skipped:
        skipped = ", ".join(f"{p:.9e}" for p in result.skipped)
        print(f"skipped co-located positions: {skipped}")
    if len(result.rows) < 3:
        print("shape analysis skipped (needs at least 3 rows)")
        return EXIT_OK

    report = analyze_sweep(result.rows)
    print(f"af argmax position: {report.af_argmax_position:.9e} m")
    print(f"ordering violations: {len(report.ordering_violations)}")
    for position, what in report.ordering_violations:
        print(f"  at d_sr = {position:.9e} m: {what}")
    runs = "  ".join(f"{tag}[{lo:.9e} .. {hi:.9e}]" for tag, lo, hi in report.binding_runs)
    print(f"binding runs: {runs}")
    for position, old, new in report.collapsed_switches:
        print(f"binding switch {old} -> {new} at d_sr = {position:.9e} m")
    print(f"max cutset gain over direct: {report.max_cutset_gain:.9f} bits")
    return EXIT_OK


def _run_optimize_power(config: RunConfig) -> int:
    budget = config.budget()
    d_sd = _require(config, "d_sd", "geom.d_sd")
    d_sr = _require(config, "d_sr", "geom.d_sr (or --d-sr)")
    geom = NodeGeometry(d_sd=d_sd, d_sr_axis=d_sr, d_r=config.d_r)
    gains = gains_from_geometry(geom, config.path_params())
    alloc = two_hop_allocate(gains, budget)
    print(f"two-hop allocation  gamma_sr = {gains.gamma_sr:.9e}  gamma_rd = {gains.gamma_rd:.9e}")
    print(f"  p_s  = {alloc.p_s:.9e} W")
    print(f"  p_r  = {alloc.p_r:.9e} W")
    print(f"  flow = {alloc.flow:.9e} W")
    print(f"  rate = {alloc.rate:.9f} bits per channel use")
    return EXIT_OK


def _run_verify(config: RunConfig) -> int:
    results = run_all(samples=config.samples, seed=config.seed)
    for result in results:
        print(format_check(result))
    hard = [r for r in results if r.passed is not None]
    failures = [r for r in hard if not r.passed]
    print(f"verify: {len(hard) - len(failures)}/{len(hard)} hard checks passed "
          f"(samples={config.samples}, seed={config.seed})")
    return EXIT_INVARIANT if failures else EXIT_OK


_COMMANDS = {
    "capacity": _run_capacity,
    "sweep": _run_sweep,
    "optimize-power": _run_optimize_power,
    "verify": _run_verify,
}


def execute(command: str, config: RunConfig) -> int:
    """Dispatch one subcommand; returns the process exit status."""
    if command not in _COMMANDS:
        raise UsageError(f"unknown command {command!r}; have {sorted(_COMMANDS)}")
    return _COMMANDS[command](config)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="configuration file")
    common.add_argument("--preset", choices=sorted(preset_scenarios()),
                        help="start from a bundled scenario")
    common.add_argument("--out", metavar="PATH", help="output CSV path (sweep)")
    common.add_argument("--samples", type=int, metavar="N",
                        help="sample count for verify")
    common.add_argument("--seed", type=int, metavar="S", help="random seed for verify")
    common.add_argument("--d-sr", type=float, metavar="X", dest="d_sr",
                        help="relay horizontal position in meters")

    parser = argparse.ArgumentParser(
        prog="relaycap",
        description="Upper-bound rates for the single-relay Gaussian channel.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("capacity", parents=[common],
                   help="rates at one relay position")
    sub.add_parser("sweep", parents=[common],
                   help="rates along the relay trajectory, written as CSV")
    sub.add_parser("optimize-power", parents=[common],
                   help="two-hop power allocation for the configured position")
    sub.add_parser("verify", parents=[common],
                   help="run the closed-form vs oracle cross-checks")
    return parser


def _build_config(args: argparse.Namespace) -> RunConfig:
    base = config_from_preset(args.preset) if args.preset else None
    if args.config:
        text = Path(args.config).read_text(encoding="utf-8")
        config = parse_config(text, base=base)
    else:
        config = base if base is not None else RunConfig()
    overrides: dict[str, object] = {}
    if args.out is not None:
        overrides["out_path"] = args.out
    if args.samples is not None:
        if args.samples < 1:
            raise UsageError(f"--samples must be >= 1, got {args.samples}")
        overrides["samples"] = args.samples
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.d_sr is not None:
        overrides["d_sr"] = args.d_sr
    return dataclasses.replace(config, **overrides) if overrides else config


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _build_config(args)
        return execute(args.command, config)
    except ConfigParseError as exc:
        print(f"relaycap: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RelayCapError as exc:
        print(f"relaycap: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"relaycap: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
