"""Per-day aggregates, stabilization detection and experiment summaries."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .domain import ScenarioConfig
from .marketday import DayOutcome


@dataclass(frozen=True)
class DayMetrics:
    """One day's aggregates; per-platform fields are tuples in schedule order."""

    day: int
    travelers_aware: tuple[int, ...]
    travelers_chose: tuple[int, ...]
    trips_served: tuple[int, ...]
    trips_unserved: tuple[int, ...]
    traveler_share: tuple[float, ...]
    drivers_aware: tuple[int, ...]
    drivers_chose: tuple[int, ...]
    driver_share: tuple[float, ...]
    mean_wait_min: tuple[float | None, ...]
    mean_driver_net_hourly: tuple[float | None, ...]
    gross_revenue: tuple[float, ...]       # euros, exact from integer cents
    commission_income: tuple[float, ...]
    subsidy_spend: tuple[float, ...]
    pt_share: float
    rw_share: float

    @property
    def total_rs_traveler_share(self) -> float:
        return sum(self.traveler_share)


def summarize_day(outcome: DayOutcome, state, cfg: ScenarioConfig) -> DayMetrics:
    """Exact aggregation of one day's outcome; empty means are reported absent."""
    n_p = cfg.n_platforms
    req = outcome.requests
    chose_t = np.bincount(req.platform, minlength=n_p)
    served = np.bincount(req.platform[outcome.served], minlength=n_p)
    shifts = outcome.shifts
    chose_d = np.bincount(shifts.platform, minlength=n_p)

    mean_wait: list[float | None] = []
    mean_net: list[float | None] = []
    gross = np.bincount(req.platform, weights=outcome.base_cents, minlength=n_p)
    commission = np.bincount(req.platform, weights=outcome.commission_cents, minlength=n_p)
    subsidy = np.bincount(req.platform, weights=outcome.subsidy_cents, minlength=n_p)
    for p in range(n_p):
        sel = outcome.served & (req.platform == p)
        mean_wait.append(float(outcome.wait_min[sel].mean()) if sel.any() else None)
        on_p = shifts.platform == p
        mean_net.append(float(outcome.net_hourly[on_p].mean()) if on_p.any() else None)

    return DayMetrics(
        day=state.day,
        travelers_aware=tuple(int(c) for c in state.travelers.aware.sum(axis=0)),
        travelers_chose=tuple(int(c) for c in chose_t),
        trips_served=tuple(int(c) for c in served),
        trips_unserved=tuple(int(c) for c in chose_t - served),
        traveler_share=tuple(float(c) / cfg.n_travelers for c in chose_t),
        drivers_aware=tuple(int(c) for c in state.drivers.aware.sum(axis=0)),
        drivers_chose=tuple(int(c) for c in chose_d),
        driver_share=tuple(float(c) / cfg.n_drivers for c in chose_d),
        mean_wait_min=tuple(mean_wait),
        mean_driver_net_hourly=tuple(mean_net),
        gross_revenue=tuple(float(g) / 100.0 for g in gross),
        commission_income=tuple(float(c) / 100.0 for c in commission),
        subsidy_spend=tuple(float(s) / 100.0 for s in subsidy),
        pt_share=float(cfg.n_travelers - int(chose_t.sum())) / cfg.n_travelers,
        rw_share=float(cfg.n_drivers - int(chose_d.sum())) / cfg.n_drivers,
    )


def detect_stabilization(series: Sequence[float], window: int, tol: float) -> int | None:
    """Earliest day d whose preceding ``window`` days vary less than ``tol``.

    The test statistic is the population standard deviation of
    series[d - window : d]; returns None if no such day exists.
    """
    s = np.asarray(series, dtype=float)
    if window <= 0:
        raise ValueError(f"window must be positive, got {window}")
    if window > len(s):
        raise ValueError(f"window {window} exceeds series length {len(s)}")
    for d in range(window, len(s) + 1):
        if s[d - window:d].std() < tol:
            return d
    return None


def trailing_mean_total_rs_share(history: Sequence[DayMetrics], window: int) -> float:
    """Mean total platform share of travelers over the final ``window`` days."""
    if window > len(history):
        raise ValueError(f"window {window} exceeds history length {len(history)}")
    tail = history[len(history) - window:]
    return float(np.mean([m.total_rs_traveler_share for m in tail]))


def trailing_mean_platform_share(history: Sequence[DayMetrics], platform: int, window: int) -> float:
    if window > len(history):
        raise ValueError(f"window {window} exceeds history length {len(history)}")
    tail = history[len(history) - window:]
    return float(np.mean([m.traveler_share[platform] for m in tail]))


def _mean_half_width(values: np.ndarray, axis: int = 0) -> tuple[np.ndarray, np.ndarray]:
    mean = values.mean(axis=axis)
    n = values.shape[axis]
    if n < 2:
        return mean, np.zeros_like(mean)
    half = 1.96 * values.std(axis=axis, ddof=1) / math.sqrt(n)
    return mean, half


@dataclass(frozen=True)
class AggregateShares:
    """Across-seed mean and 95% CI half-width of daily share trajectories."""

    days: np.ndarray
    traveler_share_mean: np.ndarray   # (days, platforms)
    traveler_share_half: np.ndarray
    total_rs_mean: np.ndarray         # (days,)
    total_rs_half: np.ndarray
    driver_share_mean: np.ndarray
    driver_share_half: np.ndarray


def aggregate_share_trajectories(histories: Sequence[Sequence[DayMetrics]]) -> AggregateShares:
    shares = np.array([[m.traveler_share for m in h] for h in histories])  # (seeds, days, P)
    dshares = np.array([[m.driver_share for m in h] for h in histories])
    t_mean, t_half = _mean_half_width(shares)
    d_mean, d_half = _mean_half_width(dshares)
    tot_mean, tot_half = _mean_half_width(shares.sum(axis=2))
    return AggregateShares(
        days=np.arange(shares.shape[1]),
        traveler_share_mean=t_mean,
        traveler_share_half=t_half,
        total_rs_mean=tot_mean,
        total_rs_half=tot_half,
        driver_share_mean=d_mean,
        driver_share_half=d_half,
    )


@dataclass(frozen=True)
class SweepSummary:
    """Equilibrium total platform share at one swept parameter value."""

    param_value: float
    total_rs_share: float
    ci_half_width: float


@dataclass(frozen=True)
class CorrelationSweepResult:
    summaries: tuple[SweepSummary, ...]
    monopoly: SweepSummary  # single-platform reference at the same scale


def correlation_sweep(
    base_cfg: ScenarioConfig,
    rho_values: Sequence[float],
    seeds: Sequence[int],
    window: int = 50,
    workers: int | None = None,
) -> CorrelationSweepResult:
    """Equilibrium total platform share per correlation value, plus the
    monopoly reference obtained by running the first platform alone."""
    from .engine import run_replications  # deferred: engine imports this module

    for rho in rho_values:
        if not 0.0 <= rho < 1.0:
            raise ValueError(f"rho must be in [0, 1), got {rho}")

    def equilibrium(cfg: ScenarioConfig) -> SweepSummary:
        result = run_replications(cfg, seeds, workers=workers)
        tails = np.array(
            [trailing_mean_total_rs_share(h, window) for h in result.histories]
        )
        mean, half = _mean_half_width(tails)
        return SweepSummary(cfg.choice_params.rho, float(mean), float(half))

    summaries = []
    for rho in rho_values:
        cfg = replace(base_cfg, choice_params=replace(base_cfg.choice_params, rho=rho))
        summaries.append(equilibrium(cfg))

    mono_cfg = replace(base_cfg, schedules=base_cfg.schedules[:1])
    mono = equilibrium(mono_cfg)
    return CorrelationSweepResult(tuple(summaries), mono)
