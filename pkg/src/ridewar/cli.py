"""Command-line front end: single runs, replications, sweeps and CSV artifacts.

Exit codes: 0 success, 2 missing/invalid configuration, 3 I/O failure.
Errors print one machine-parsable line to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path
from typing import Sequence

from . import __version__
from .config_io import ConfigFileError, config_hash, load_config
from .domain import ConfigError, ScenarioConfig, validate_config
from .engine import run, run_replications
from .metrics import (
    CorrelationSweepResult,
    DayMetrics,
    aggregate_share_trajectories,
    correlation_sweep,
)
from .scenarios import SCENARIO_DESCRIPTIONS, get_scenario

CSV_SCHEMA = "ridewar-csv-v1"

_PLATFORM_FIELDS = (
    ("travelers_aware", "count"),
    ("travelers_chose", "count"),
    ("trips_served", "count"),
    ("trips_unserved", "count"),
    ("traveler_share", "share"),
    ("drivers_aware", "count"),
    ("drivers_chose", "count"),
    ("driver_share", "share"),
    ("mean_wait_min", "minutes"),
    ("mean_driver_net_hourly", "money"),
    ("gross_revenue", "money"),
    ("commission_income", "money"),
    ("subsidy_spend", "money"),
)


def _format(value, kind: str) -> str:
    if value is None:
        return ""
    if kind == "count":
        return str(int(value))
    if kind == "share":
        return f"{value:.6f}"
    if kind == "money":
        return f"{value:.2f}"
    return f"{value:.3f}"  # minutes


def write_daily_csv(history: Sequence[DayMetrics], path: str | Path) -> Path:
    """One row per day; column names are the metric fields suffixed _p1, _p2, ..."""
    if not history:
        raise ValueError("refusing to write an empty metrics history")
    n_p = len(history[0].traveler_share)
    header = ["day"]
    for p in range(n_p):
        header.extend(f"{name}_p{p + 1}" for name, _ in _PLATFORM_FIELDS)
    header.extend(["pt_share", "rw_share"])

    lines = [",".join(header)]
    for m in history:
        row = [str(m.day)]
        for p in range(n_p):
            row.extend(_format(getattr(m, name)[p], kind) for name, kind in _PLATFORM_FIELDS)
        row.append(_format(m.pt_share, "share"))
        row.append(_format(m.rw_share, "share"))
        lines.append(",".join(row))

    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def write_aggregate_csv(histories, path: str | Path) -> Path:
    agg = aggregate_share_trajectories(histories)
    n_p = agg.traveler_share_mean.shape[1]
    header = ["day"]
    for p in range(n_p):
        header.extend([f"traveler_share_p{p + 1}_mean", f"traveler_share_p{p + 1}_ci"])
    header.extend(["total_rs_share_mean", "total_rs_share_ci"])
    for p in range(n_p):
        header.extend([f"driver_share_p{p + 1}_mean", f"driver_share_p{p + 1}_ci"])
    lines = [",".join(header)]
    for d in range(len(agg.days)):
        row = [str(d)]
        for p in range(n_p):
            row.extend([f"{agg.traveler_share_mean[d, p]:.6f}", f"{agg.traveler_share_half[d, p]:.6f}"])
        row.extend([f"{agg.total_rs_mean[d]:.6f}", f"{agg.total_rs_half[d]:.6f}"])
        for p in range(n_p):
            row.extend([f"{agg.driver_share_mean[d, p]:.6f}", f"{agg.driver_share_half[d, p]:.6f}"])
        lines.append(",".join(row))
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def write_sweep_csv(result: CorrelationSweepResult, path: str | Path) -> Path:
    header = "rho,total_rs_share,ci_half_width,monopoly_rs_share,monopoly_ci_half_width"
    lines = [header]
    for s in result.summaries:
        lines.append(
            f"{s.param_value:.6f},{s.total_rs_share:.6f},{s.ci_half_width:.6f},"
            f"{result.monopoly.total_rs_share:.6f},{result.monopoly.ci_half_width:.6f}"
        )
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def write_manifest(out_dir: Path, cfg: ScenarioConfig, seeds, artifacts,
                   started: float) -> Path:
    manifest = {
        "config_hash": config_hash(cfg),
        "seeds": [int(s) for s in seeds],
        "artifacts": [Path(a).name for a in artifacts],
        "engine_version": __version__,
        "csv_schema": CSV_SCHEMA,
        "wall_clock_seconds": round(time.perf_counter() - started, 3),
    }
    path = out_dir / "manifest.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    return path


def _workers() -> int:
    raw = os.environ.get("RIDEWAR_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError([f"RIDEWAR_THREADS must be an integer >= 1, got {raw!r}"]) from None
    if n < 1:
        raise ConfigError([f"RIDEWAR_THREADS must be >= 1, got {n}"])
    return n


def _resolve_config(args) -> ScenarioConfig:
    if args.config is not None:
        cfg = load_config(args.config)
    else:
        cfg = get_scenario(args.scenario, scale=args.scale)
    if getattr(args, "seed", None) is not None:
        cfg = validate_config(cfg.with_seed(args.seed))
    return cfg


def _parse_seeds(raw: str) -> list[int]:
    try:
        return [int(tok) for tok in raw.split(",") if tok.strip() != ""]
    except ValueError:
        raise ConfigError([f"--seeds must be comma-separated integers, got {raw!r}"]) from None


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_run(args) -> int:
    started = time.perf_counter()
    cfg = _resolve_config(args)
    result = run(cfg)
    out = _out_dir(args)
    daily = write_daily_csv(result.history, out / "daily.csv")
    write_manifest(out, cfg, [cfg.seed], [daily], started)
    print(f"wrote {daily} ({len(result.history)} days)")
    return 0


def cmd_replicate(args) -> int:
    started = time.perf_counter()
    cfg = _resolve_config(args)
    seeds = _parse_seeds(args.seeds)
    if not seeds:
        raise ConfigError(["--seeds must list at least one seed"])
    result = run_replications(cfg, seeds, workers=_workers())
    out = _out_dir(args)
    artifacts = []
    for seed, history in zip(result.seeds, result.histories):
        artifacts.append(write_daily_csv(history, out / f"daily_seed{seed}.csv"))
    artifacts.append(write_aggregate_csv(result.histories, out / "aggregate.csv"))
    write_manifest(out, cfg, result.seeds, artifacts, started)
    print(f"wrote {len(artifacts)} files to {out}")
    return 0


def cmd_sweep(args) -> int:
    started = time.perf_counter()
    if args.param != "rho":
        raise ConfigError([f"unsupported sweep parameter {args.param!r}; only 'rho' is available"])
    cfg = _resolve_config(args)
    try:
        values = [float(tok) for tok in args.values.split(",") if tok.strip() != ""]
    except ValueError:
        raise ConfigError([f"--values must be comma-separated numbers, got {args.values!r}"]) from None
    if not values:
        raise ConfigError(["--values must list at least one value"])
    seeds = _parse_seeds(args.seeds)
    result = correlation_sweep(cfg, values, seeds, workers=_workers())
    out = _out_dir(args)
    sweep_csv = write_sweep_csv(result, out / "sweep.csv")
    write_manifest(out, cfg, seeds, [sweep_csv], started)
    print(f"wrote {sweep_csv}")
    return 0


def cmd_scenarios(args) -> int:
    for name in sorted(SCENARIO_DESCRIPTIONS):
        print(f"{name}: {SCENARIO_DESCRIPTIONS[name]}")
    return 0


def _add_config_args(sub: argparse.ArgumentParser, with_seed: bool = True) -> None:
    sub.add_argument("--scenario", default="monopoly-baseline",
                     help="built-in scenario preset (see the 'scenarios' command)")
    sub.add_argument("--config", default=None, help="scenario config file (overrides --scenario)")
    sub.add_argument("--scale", default="paper", choices=("desk", "paper"),
                     help="population scale for presets")
    if with_seed:
        sub.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    sub.add_argument("--out", default=".", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ridewar",
        description="Day-to-day simulator of competing two-sided ride-sourcing platforms",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    p_run = subparsers.add_parser("run", help="single run, writes daily.csv")
    _add_config_args(p_run)
    p_run.set_defaults(func=cmd_run)

    p_rep = subparsers.add_parser("replicate", help="multi-seed runs plus aggregate CSV")
    _add_config_args(p_rep, with_seed=False)
    p_rep.add_argument("--seeds", required=True, help="comma-separated seed list")
    p_rep.set_defaults(func=cmd_replicate)

    p_sweep = subparsers.add_parser("sweep", help="parameter sweep summary CSV")
    p_sweep.add_argument("--param", default="rho")
    p_sweep.add_argument("--values", required=True, help="comma-separated parameter values")
    p_sweep.add_argument("--seeds", default="0,1,2,3,4,5,6,7,8,9")
    p_sweep.set_defaults(scenario="symmetric-duopoly")
    p_sweep.add_argument("--config", default=None)
    p_sweep.add_argument("--scale", default="paper", choices=("desk", "paper"))
    p_sweep.add_argument("--out", default=".")
    p_sweep.set_defaults(func=cmd_sweep)

    p_list = subparsers.add_parser("scenarios", help="list built-in scenario presets")
    p_list.set_defaults(func=cmd_scenarios)
    return parser


def _one_line(exc: Exception) -> str:
    return str(exc).replace("\n", "; ")


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ConfigFileError, FileNotFoundError, ValueError) as exc:
        print(f"error: config: {_one_line(exc)}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: io: {_one_line(exc)}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
