"""Shared value types, scenario configuration and the deterministic RNG contract.

Everything here is an immutable value type: validated once, then safe to share
across runs, threads and worker processes.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterator

import numpy as np

DayRange = tuple[int, int]  # half-open [start, end)

STREAM_NAMES = ("demand", "matching", "choice", "social", "awareness")
_STREAM_IDS = {name: i for i, name in enumerate(STREAM_NAMES)}

MAX_SEED = 2**64 - 1


class ConfigError(ValueError):
    """A scenario configuration violated one or more invariants.

    Validation is all-or-nothing: ``problems`` lists every violation found.
    """

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__(
            "invalid configuration:\n" + "\n".join(f"  - {p}" for p in self.problems)
        )


class DayOutOfRangeError(IndexError):
    """A day index fell outside the schedule / simulation horizon."""


@dataclass(frozen=True)
class Strategy:
    """Daily control levers of one platform."""

    fare_per_km: float = 1.2
    min_fare: float = 2.0
    commission_rate: float = 0.10
    discount_rate: float = 0.0
    marketing_intensity: float = 0.0
    active: bool = True

    def problems(self, label: str = "strategy") -> list[str]:
        out = []
        if self.fare_per_km < 0:
            out.append(f"{label}: fare_per_km must be >= 0")
        if self.min_fare < 0:
            out.append(f"{label}: min_fare must be >= 0")
        for name in ("commission_rate", "discount_rate", "marketing_intensity"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                out.append(f"{label}: {name} must be in [0, 1], got {v}")
        return out


@dataclass(frozen=True)
class StrategySchedule:
    """Piecewise-constant strategy of one platform over the horizon.

    Entries carry half-open day ranges [start, end); together they must cover
    the full horizon without overlap (checked by validate_config).
    """

    platform_id: str
    entries: tuple[tuple[DayRange, Strategy], ...]

    def entry_day(self) -> int | None:
        """First day the platform is active, or None if never."""
        for (start, end), strat in self.entries:
            if strat.active and end > start:
                return start
        return None


def strategy_for_day(schedule: StrategySchedule, day: int) -> Strategy:
    """Return the strategy whose day range contains ``day``."""
    for (start, end), strat in schedule.entries:
        if start <= day < end:
            return strat
    raise DayOutOfRangeError(
        f"day {day} not covered by schedule of platform {schedule.platform_id!r}"
    )


@dataclass(frozen=True)
class ChoiceParams:
    """Nested-logit scales, component weights and alternative constants.

    ``rho`` is the within-nest correlation; the nest scale is derived as
    theta_n = theta * (1 - rho).
    """

    theta: float = 0.235
    rho: float = 0.4
    beta_experience: float = 0.7
    beta_marketing: float = 0.1
    beta_wom: float = 0.2
    asc: float = 0.0
    outside_option_utility: float = 0.5
    driver_outside_utility: float | None = None  # defaults to outside_option_utility

    @property
    def theta_n(self) -> float:
        return self.theta * (1.0 - self.rho)

    def outside_utility(self, agent_class: str) -> float:
        if agent_class == "driver" and self.driver_outside_utility is not None:
            return self.driver_outside_utility
        return self.outside_option_utility

    @property
    def weights(self) -> tuple[float, float, float]:
        return (self.beta_experience, self.beta_marketing, self.beta_wom)

    def problems(self) -> list[str]:
        out = []
        if not self.theta > 0:
            out.append(f"choice_params: theta must be > 0, got {self.theta}")
        if not 0.0 <= self.rho < 1.0:
            out.append(f"choice_params: rho must be in [0, 1), got {self.rho}")
        ws = self.weights
        if any(w <= 0 for w in ws):
            out.append(f"choice_params: component weights must be strictly positive, got {ws}")
        if abs(sum(ws) - 1.0) > 1e-9:
            out.append(f"choice_params: weights sum != 1 (got {sum(ws)!r})")
        for name in ("outside_option_utility", "driver_outside_utility"):
            v = getattr(self, name)
            if v is not None and not 0.0 < v < 1.0:
                out.append(f"choice_params: {name} must be in (0, 1), got {v}")
        return out


@dataclass(frozen=True)
class LearningParams:
    """Step size and sigmoid shape of the S-curve memory update."""

    alpha: float = 3.0
    shape_beta: float = 1.0
    u_init: float = 0.5

    def problems(self) -> list[str]:
        out = []
        if not self.alpha > 0:
            out.append(f"learning_params: alpha must be > 0, got {self.alpha}")
        if not self.shape_beta > 0:
            out.append(f"learning_params: shape_beta must be > 0, got {self.shape_beta}")
        if not 0.0 < self.u_init < 1.0:
            out.append(f"learning_params: u_init must be in (0, 1), got {self.u_init}")
        return out


@dataclass(frozen=True)
class SocialParams:
    """Word-of-mouth intensity and peer pairing policy."""

    wom_intensity: float = 0.1
    pairing: str = "random"

    def problems(self) -> list[str]:
        out = []
        if not 0.0 <= self.wom_intensity <= 1.0:
            out.append(f"social_params: wom_intensity must be in [0, 1], got {self.wom_intensity}")
        if self.pairing != "random":
            out.append(f"social_params: unknown pairing policy {self.pairing!r}")
        return out


@dataclass(frozen=True)
class ScenarioConfig:
    """Complete, immutable description of one simulation scenario."""

    horizon_days: int
    n_travelers: int
    n_drivers: int
    schedules: tuple[StrategySchedule, ...]
    city_side_km: float = 10.0
    vehicle_speed_kmh: float = 36.0
    pt_speed_kmh: float = 18.0
    pt_access_min: float = 10.0
    pt_fare: float = 4.15
    value_of_time: float = 10.63
    reservation_wage: float = 10.63
    operating_cost_per_km: float = 0.25
    shift_hours: float = 4.0
    max_wait_min: float = 20.0
    choice_params: ChoiceParams = field(default_factory=ChoiceParams)
    learning_params: LearningParams = field(default_factory=LearningParams)
    social_params: SocialParams = field(default_factory=SocialParams)
    awareness_daily_prob: float = 0.05
    seed: int = 0

    @property
    def n_platforms(self) -> int:
        return len(self.schedules)

    @property
    def platform_ids(self) -> tuple[str, ...]:
        return tuple(s.platform_id for s in self.schedules)

    @property
    def session_min(self) -> float:
        return self.shift_hours * 60.0

    def with_seed(self, seed: int) -> "ScenarioConfig":
        return replace(self, seed=seed)


def _schedule_problems(schedule: StrategySchedule, horizon: int) -> list[str]:
    pid = schedule.platform_id
    out = []
    for (start, end), strat in schedule.entries:
        if not (isinstance(start, int) and isinstance(end, int)) or start < 0 or end <= start:
            out.append(f"schedule {pid!r}: bad day range [{start}, {end})")
        out.extend(strat.problems(f"schedule {pid!r} days [{start}, {end})"))
    # coverage of [0, horizon) without overlap
    spans = sorted(r for r, _ in schedule.entries)
    cursor = 0
    for start, end in spans:
        if start < cursor:
            out.append(f"schedule {pid!r}: overlapping day ranges at day {start}")
            return out
        if start > cursor:
            out.append(f"schedule {pid!r}: days [{cursor}, {start}) not covered")
            return out
        cursor = end
    if cursor < horizon:
        out.append(f"schedule {pid!r}: days [{cursor}, {horizon}) not covered")
    elif cursor > horizon:
        out.append(f"schedule {pid!r}: entries extend past horizon ({cursor} > {horizon})")
    return out


def validate_config(cfg: ScenarioConfig) -> ScenarioConfig:
    """Check every invariant; raise ConfigError listing all violations.

    Returns the config unchanged on success (value types are immutable and
    derived quantities such as theta_n are exposed as properties).
    """
    problems: list[str] = []
    if cfg.horizon_days < 0:
        problems.append(f"horizon_days must be >= 0, got {cfg.horizon_days}")
    if cfg.n_travelers <= 0:
        problems.append(f"n_travelers must be > 0, got {cfg.n_travelers}")
    if cfg.n_drivers <= 0:
        problems.append(f"n_drivers must be > 0, got {cfg.n_drivers}")
    if len(cfg.schedules) < 1:
        problems.append("at least one platform schedule is required")
    ids = [s.platform_id for s in cfg.schedules]
    if len(set(ids)) != len(ids):
        problems.append(f"duplicate platform ids: {ids}")
    for sched in cfg.schedules:
        problems.extend(_schedule_problems(sched, cfg.horizon_days))

    for name in ("city_side_km", "vehicle_speed_kmh", "pt_speed_kmh", "shift_hours"):
        if not getattr(cfg, name) > 0:
            problems.append(f"{name} must be > 0, got {getattr(cfg, name)}")
    for name in ("pt_access_min", "pt_fare", "value_of_time", "operating_cost_per_km",
                 "max_wait_min"):
        if getattr(cfg, name) < 0:
            problems.append(f"{name} must be >= 0, got {getattr(cfg, name)}")
    if not cfg.reservation_wage > 0:
        problems.append(f"reservation_wage must be > 0, got {cfg.reservation_wage}")
    # the traveler benchmark divides by the PT generalized cost; keep it positive
    if cfg.pt_fare + cfg.value_of_time * cfg.pt_access_min / 60.0 <= 0:
        problems.append("PT benchmark (pt_fare + VOT * access time) must be positive")
    if not 0.0 <= cfg.awareness_daily_prob <= 1.0:
        problems.append(f"awareness_daily_prob must be in [0, 1], got {cfg.awareness_daily_prob}")
    if not (isinstance(cfg.seed, int) and 0 <= cfg.seed <= MAX_SEED):
        problems.append(f"seed must be an integer in [0, 2^64), got {cfg.seed!r}")

    problems.extend(cfg.choice_params.problems())
    problems.extend(cfg.learning_params.problems())
    problems.extend(cfg.social_params.problems())

    if problems:
        raise ConfigError(problems)
    return cfg


class RngStreams:
    """Named deterministic sub-streams derived from (seed, stream, day).

    Each (stream name, day) pair yields a fresh, independent generator, so
    draws in one stream can never perturb another and the whole simulation is
    reproducible from the single scenario seed.
    """

    def __init__(self, seed: int):
        if not (isinstance(seed, int) and 0 <= seed <= MAX_SEED):
            raise ValueError(f"seed must be an integer in [0, 2^64), got {seed!r}")
        self.seed = seed

    def stream(self, name: str, day: int) -> np.random.Generator:
        try:
            stream_id = _STREAM_IDS[name]
        except KeyError:
            raise KeyError(f"unknown stream {name!r}; expected one of {STREAM_NAMES}") from None
        return np.random.default_rng(np.random.SeedSequence(entropy=(self.seed, stream_id, day)))
