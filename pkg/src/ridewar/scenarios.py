"""Built-in scenario presets for the competition experiments.

All presets share the same market constants (fare 1.2 EUR/km with a 2 EUR
minimum, 10% commission, reservation wage and value of time 10.63 EUR/h,
operating cost 0.25 EUR/km, 4-hour sessions at a flat 36 km/h) and differ only
in the platform line-up and their strategy schedules.  ``paper`` scale runs
2000 travelers / 200 drivers; ``desk`` scale runs 400 / 40 for fast suites.
"""

from __future__ import annotations

from .domain import ScenarioConfig, Strategy, StrategySchedule, validate_config

SCALES = {
    "desk": (400, 40),
    "paper": (2000, 200),
}

DEFAULT_HORIZON = 365
CAMPAIGN_DAYS = 100
BASELINE_DISCOUNT = 0.40
SUBSIDY_DISCOUNT = 0.80
SUBSIDY_DAYS = 200
LATE_ENTRY_DAY = 25
MARKETING_INTENSITY = 0.10


def _inactive() -> Strategy:
    return Strategy(discount_rate=0.0, marketing_intensity=0.0, active=False)


def baseline_schedule(
    platform_id: str,
    horizon: int = DEFAULT_HORIZON,
    entry_day: int = 0,
    campaign_days: int = CAMPAIGN_DAYS,
    discount: float = BASELINE_DISCOUNT,
    discount_days: int | None = None,
) -> StrategySchedule:
    """Launch with a marketing campaign and fare discount, then run plain.

    The campaign (marketing exposure) covers the first ``campaign_days`` after
    entry; the discount covers ``discount_days`` (defaults to the campaign
    length).  Before ``entry_day`` the platform is inactive.
    """
    if discount_days is None:
        discount_days = campaign_days
    marks = sorted({entry_day, min(entry_day + campaign_days, horizon),
                    min(entry_day + discount_days, horizon), horizon})
    entries: list[tuple[tuple[int, int], Strategy]] = []
    if entry_day > 0:
        entries.append(((0, entry_day), _inactive()))
    for start, end in zip(marks, marks[1:]):
        if end <= start:
            continue
        entries.append(((start, end), Strategy(
            discount_rate=discount if start < entry_day + discount_days else 0.0,
            marketing_intensity=MARKETING_INTENSITY if start < entry_day + campaign_days else 0.0,
            active=True,
        )))
    return StrategySchedule(platform_id=platform_id, entries=tuple(entries))


def _config(schedules, scale: str, seed: int, horizon: int) -> ScenarioConfig:
    try:
        n_travelers, n_drivers = SCALES[scale]
    except KeyError:
        raise ValueError(f"unknown scale {scale!r}; expected one of {sorted(SCALES)}") from None
    return validate_config(ScenarioConfig(
        horizon_days=horizon,
        n_travelers=n_travelers,
        n_drivers=n_drivers,
        schedules=tuple(schedules),
        seed=seed,
    ))


def monopoly_baseline(scale: str = "paper", seed: int = 0,
                      horizon: int = DEFAULT_HORIZON) -> ScenarioConfig:
    """Single platform growing against public transport."""
    return _config([baseline_schedule("p1", horizon)], scale, seed, horizon)


def symmetric_duopoly(scale: str = "paper", seed: int = 0,
                      horizon: int = DEFAULT_HORIZON) -> ScenarioConfig:
    """Two platforms launching the identical baseline strategy on day 0."""
    return _config(
        [baseline_schedule("p1", horizon), baseline_schedule("p2", horizon)],
        scale, seed, horizon)


def late_entry(scale: str = "paper", seed: int = 0,
               horizon: int = DEFAULT_HORIZON) -> ScenarioConfig:
    """Second platform enters 25 days later with the unchanged baseline strategy."""
    return _config(
        [baseline_schedule("p1", horizon),
         baseline_schedule("p2", horizon, entry_day=LATE_ENTRY_DAY)],
        scale, seed, horizon)


def late_entry_subsidy(scale: str = "paper", seed: int = 0,
                       horizon: int = DEFAULT_HORIZON) -> ScenarioConfig:
    """Late entrant compensating with an 80% discount held for 200 days.

    The entrant's marketing campaign spans the whole subsidy window, so both
    levers switch off together on day 225.
    """
    return _config(
        [baseline_schedule("p1", horizon),
         baseline_schedule("p2", horizon, entry_day=LATE_ENTRY_DAY,
                           campaign_days=SUBSIDY_DAYS,
                           discount=SUBSIDY_DISCOUNT, discount_days=SUBSIDY_DAYS)],
        scale, seed, horizon)


SCENARIOS = {
    "monopoly-baseline": monopoly_baseline,
    "symmetric-duopoly": symmetric_duopoly,
    "late-entry": late_entry,
    "late-entry-subsidy": late_entry_subsidy,
}

SCENARIO_DESCRIPTIONS = {
    "monopoly-baseline": "single platform, marketing + 40% discount for days 0-100",
    "symmetric-duopoly": "two platforms, identical baseline strategies from day 0",
    "late-entry": "p2 joins at day 25 with the same baseline strategy",
    "late-entry-subsidy": "p2 joins at day 25 with an 80% discount for 200 days",
}


def get_scenario(name: str, scale: str = "paper", seed: int = 0,
                 horizon: int = DEFAULT_HORIZON) -> ScenarioConfig:
    try:
        builder = SCENARIOS[name]
    except KeyError:
        raise ValueError(
            f"unknown scenario {name!r}; available: {', '.join(sorted(SCENARIOS))}") from None
    return builder(scale=scale, seed=seed, horizon=horizon)
