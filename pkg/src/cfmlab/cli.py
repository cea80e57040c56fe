"""Command-line front end: simulate | sweep | verify.

Configs are flat ``key = value`` text files; grid keys accept list syntax
``gamma = [0.96, 0.98, 1.0]``.  Every CSV written is accompanied by a manifest
that echoes the fully-resolved configuration; the manifest itself parses as a
config file, so re-running with ``--config manifest.txt`` reproduces the CSV
byte for byte.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 I/O failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Sequence, Union

from . import __version__
from .engine import AggregateCell, ConfigError, SimConfig, StepRecord, run_path, run_sweep
from .verification import run_all_checks

ConfigValue = Union[float, int, list[float], str]

FLOAT_KEYS = ("s0", "x1_0", "x2_0", "theta", "p", "r", "size_std", "horizon")
INT_KEYS = ("n_steps", "n_paths", "master_seed")
GRID_KEYS = ("gamma", "sigma", "lambda")
# Manifest bookkeeping; accepted and ignored when a manifest is re-read as a config.
META_KEYS = ("command", "tool_version", "created_utc", "output", "hat_f_note")

REQUIRED_KEYS = GRID_KEYS

STEPS_HEADER = "t,S,pool_price,x1,x2,fee_income,hat_f,arb_profit,noise_venue,noise_side,noise_size"
SWEEP_HEADER = "gamma,sigma,lambda,mean_diff,std_diff,n_paths"

HAT_F_NOTE = ("bound evaluated on post-arbitrage reserves marked at the external "
              "price, applied for every gamma")


def _fmt(x: float) -> str:
    """Locale-independent, round-trip-safe float formatting for CSV cells."""
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------
# Config parsing
# ---------------------------------------------------------------------------

def _parse_number(key: str, text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"invalid config value for {key}: expected a number, got {text!r}") from None


def _parse_value(key: str, text: str) -> ConfigValue:
    text = text.strip()
    if key in META_KEYS:
        return text
    if text.startswith("["):
        if key not in GRID_KEYS:
            raise ConfigError(f"invalid config value for {key}: lists are only allowed for {', '.join(GRID_KEYS)}")
        if not text.endswith("]"):
            raise ConfigError(f"invalid config value for {key}: unterminated list {text!r}")
        inner = text[1:-1].strip()
        if not inner:
            raise ConfigError(f"invalid config value for {key}: list cannot be empty")
        return [_parse_number(key, item) for item in inner.split(",")]
    if key in INT_KEYS:
        number = _parse_number(key, text)
        if number != int(number):
            raise ConfigError(f"invalid config value for {key}: expected an integer, got {text!r}")
        return int(number)
    return _parse_number(key, text)


def parse_config_text(text: str) -> dict[str, ConfigValue]:
    """Parse flat ``key = value`` lines; '#' lines are comments."""
    mapping: dict[str, ConfigValue] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"invalid config line {lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in FLOAT_KEYS + INT_KEYS + GRID_KEYS + META_KEYS:
            raise ConfigError(f"unknown config key: {key}")
        mapping[key] = _parse_value(key, value)
    return mapping


def load_config_file(path: Path) -> dict[str, ConfigValue]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read config file {path}: {exc}") from exc
    return parse_config_text(text)


def apply_overrides(
    mapping: dict[str, ConfigValue],
    sets: Sequence[str],
    seed: Optional[int],
    paths: Optional[int],
) -> None:
    for item in sets:
        if "=" not in item:
            raise ConfigError(f"invalid --set argument {item!r}: expected KEY=VALUE")
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in FLOAT_KEYS + INT_KEYS + GRID_KEYS:
            raise ConfigError(f"unknown config key: {key}")
        mapping[key] = _parse_value(key, value)
    if seed is not None:
        mapping["master_seed"] = seed
    if paths is not None:
        mapping["n_paths"] = paths


def _build_base_config(mapping: dict[str, ConfigValue]) -> SimConfig:
    kwargs = {}
    for key in FLOAT_KEYS:
        if key in mapping:
            kwargs[key] = float(mapping[key])
    for key in INT_KEYS:
        if key in mapping:
            kwargs[key] = int(mapping[key])
    config = SimConfig(gamma=1.0, sigma=0.0, lam=0.0, **kwargs)
    return config


def resolve_scalar_config(mapping: dict[str, ConfigValue]) -> SimConfig:
    """Config for a single scenario: grid keys must be scalars."""
    for key in REQUIRED_KEYS:
        if key not in mapping:
            raise ConfigError(f"missing required config key: {key}")
        if isinstance(mapping[key], list):
            raise ConfigError(f"invalid config value for {key}: simulate needs a scalar, got a list")
    config = replace(
        _build_base_config(mapping),
        gamma=float(mapping["gamma"]),
        sigma=float(mapping["sigma"]),
        lam=float(mapping["lambda"]),
    )
    config.validate()
    return config


def resolve_grid_config(mapping: dict[str, ConfigValue]) -> tuple[SimConfig, list[float], list[float], list[float]]:
    """Base config plus grid lists for a sweep (scalars become singletons)."""
    grids = {}
    for key in REQUIRED_KEYS:
        if key not in mapping:
            raise ConfigError(f"missing required config key: {key}")
        value = mapping[key]
        grids[key] = [float(v) for v in value] if isinstance(value, list) else [float(value)]
    base = replace(
        _build_base_config(mapping),
        gamma=grids["gamma"][0],
        sigma=grids["sigma"][0],
        lam=grids["lambda"][0],
    )
    base.validate()
    return base, grids["gamma"], grids["sigma"], grids["lambda"]


# ---------------------------------------------------------------------------
# Output files
# ---------------------------------------------------------------------------

def _echo_value(value: ConfigValue) -> str:
    if isinstance(value, list):
        return "[" + ", ".join(repr(float(v)) for v in value) + "]"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def manifest_text(
    command: str,
    config: SimConfig,
    output_name: str,
    grids: Optional[dict[str, list[float]]] = None,
) -> str:
    """Manifest contents: metadata plus the fully-resolved configuration."""
    lines = [
        "# cfmlab run manifest; re-runnable via --config",
        f"command = {command}",
        f"tool_version = {__version__}",
        f"created_utc = {datetime.now(timezone.utc).isoformat(timespec='seconds')}",
        f"output = {output_name}",
        f"hat_f_note = {HAT_F_NOTE}",
    ]
    values: dict[str, ConfigValue] = {
        "gamma": config.gamma, "sigma": config.sigma, "lambda": config.lam,
    }
    if grids is not None:
        values = {key: list(grid) for key, grid in grids.items()}
    for key in FLOAT_KEYS:
        values[key] = getattr(config, key)
    for key in INT_KEYS:
        values[key] = getattr(config, key)
    for key in GRID_KEYS + FLOAT_KEYS + INT_KEYS:
        lines.append(f"{key} = {_echo_value(values[key])}")
    return "\n".join(lines) + "\n"


def steps_csv_text(records: Sequence[StepRecord]) -> str:
    lines = [STEPS_HEADER]
    for r in records:
        lines.append(",".join((
            _fmt(r.t), _fmt(r.s), _fmt(r.pool_price), _fmt(r.x1), _fmt(r.x2),
            _fmt(r.fee_income), _fmt(r.bound_income), _fmt(r.arb_profit),
            r.noise_venue, r.noise_side, _fmt(r.noise_size),
        )))
    return "\n".join(lines) + "\n"


def sweep_csv_text(cells: Sequence[AggregateCell]) -> str:
    lines = [SWEEP_HEADER]
    for c in cells:
        lines.append(",".join((
            _fmt(c.gamma), _fmt(c.sigma), _fmt(c.lam),
            _fmt(c.mean_diff), _fmt(c.std_diff), str(c.n_paths),
        )))
    return "\n".join(lines) + "\n"


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_simulate(args: argparse.Namespace) -> int:
    mapping = load_config_file(Path(args.config))
    apply_overrides(mapping, args.set, args.seed, args.paths)
    config = resolve_scalar_config(mapping)

    result = run_path(config, path_index=0, record_steps=True)
    out_dir = Path(args.out)
    _write_text(out_dir / "steps.csv", steps_csv_text(result.steps))
    _write_text(out_dir / "manifest.txt", manifest_text("simulate", config, "steps.csv"))
    print(f"wrote {out_dir / 'steps.csv'} ({len(result.steps)} steps, "
          f"D = {result.diff:.6g})")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    mapping = load_config_file(Path(args.config))
    apply_overrides(mapping, args.set, args.seed, args.paths)
    base, gammas, sigmas, lambdas = resolve_grid_config(mapping)

    cells = run_sweep(gammas, sigmas, lambdas, base)
    out_dir = Path(args.out)
    _write_text(out_dir / "sweep.csv", sweep_csv_text(cells))
    grids = {"gamma": gammas, "sigma": sigmas, "lambda": lambdas}
    _write_text(out_dir / "manifest.txt", manifest_text("sweep", base, "sweep.csv", grids))
    print(f"wrote {out_dir / 'sweep.csv'} ({len(cells)} cells, "
          f"{base.n_paths} paths each)")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    results = run_all_checks()
    lines = [result.line() for result in results]
    report = "\n".join(lines) + "\n"
    print(report, end="")
    if args.out is not None:
        _write_text(Path(args.out) / "verify_report.txt", report)
    return 0 if all(result.passed for result in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cfmlab",
        description="Constant function market simulation lab",
    )
    parser.add_argument("--version", action="version", version=f"cfmlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", required=True, help="flat key = value config file")
        p.add_argument("--out", default=".", help="output directory (default: current)")
        p.add_argument("--seed", type=int, default=None, help="override master_seed")
        p.add_argument("--paths", type=int, default=None, help="override n_paths")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override any config key (repeatable)")

    p_sim = sub.add_parser("simulate", help="single scenario, per-step CSV")
    add_common(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="grid Monte Carlo, aggregate CSV")
    add_common(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_verify = sub.add_parser("verify", help="run the property suites")
    p_verify.add_argument("--out", default=None, help="also write verify_report.txt here")
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
