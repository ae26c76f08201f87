"""ridewar: day-to-day simulator of competing two-sided ride-sourcing platforms."""

__version__ = "0.1.0"

from .domain import (
    ChoiceParams,
    ConfigError,
    LearningParams,
    RngStreams,
    ScenarioConfig,
    SocialParams,
    Strategy,
    StrategySchedule,
    strategy_for_day,
    validate_config,
)
from .engine import init_state, run, run_replications, step_day
from .metrics import (
    DayMetrics,
    SweepSummary,
    correlation_sweep,
    detect_stabilization,
    summarize_day,
)
from .scenarios import SCENARIOS, get_scenario

__all__ = [
    "ChoiceParams",
    "ConfigError",
    "DayMetrics",
    "LearningParams",
    "RngStreams",
    "SCENARIOS",
    "ScenarioConfig",
    "SocialParams",
    "Strategy",
    "StrategySchedule",
    "SweepSummary",
    "correlation_sweep",
    "detect_stabilization",
    "get_scenario",
    "init_state",
    "run",
    "run_replications",
    "step_day",
    "strategy_for_day",
    "summarize_day",
    "validate_config",
    "__version__",
]
