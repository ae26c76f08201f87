"""Scenario config files: parsing, canonical rendering and hashing.

The format is flat key/value sections.  Scalar sections mirror the config
dataclasses field-for-field; each strategy entry is its own section whose
header names the platform and a half-open day range:

    [scenario]
    horizon_days = 365
    ...

    [schedule p1 0..100]
    fare_per_km = 1.2
    discount_rate = 0.4
    active = true

Parsing errors carry the offending line number.  The canonical rendering is
deterministic, so its SHA-256 is a stable configuration hash.
"""

from __future__ import annotations

import hashlib
import re
from pathlib import Path

from .domain import (
    ChoiceParams,
    LearningParams,
    ScenarioConfig,
    SocialParams,
    Strategy,
    StrategySchedule,
    validate_config,
)


class ConfigFileError(ValueError):
    def __init__(self, path: str, line: int, message: str):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


_SCALAR_SECTIONS = {
    "scenario": {
        "horizon_days": int, "n_travelers": int, "n_drivers": int,
        "city_side_km": float, "vehicle_speed_kmh": float, "pt_speed_kmh": float,
        "pt_access_min": float, "pt_fare": float, "value_of_time": float,
        "reservation_wage": float, "operating_cost_per_km": float,
        "shift_hours": float, "max_wait_min": float,
        "awareness_daily_prob": float, "seed": int,
    },
    "choice_params": {
        "theta": float, "rho": float, "beta_experience": float,
        "beta_marketing": float, "beta_wom": float, "asc": float,
        "outside_option_utility": float, "driver_outside_utility": float,
    },
    "learning_params": {"alpha": float, "shape_beta": float, "u_init": float},
    "social_params": {"wom_intensity": float, "pairing": str},
}

_STRATEGY_KEYS = {
    "fare_per_km": float, "min_fare": float, "commission_rate": float,
    "discount_rate": float, "marketing_intensity": float, "active": bool,
}

_SCHEDULE_HEADER = re.compile(r"^schedule\s+(\S+)\s+(\d+)\.\.(\d+)$")


def _parse_bool(raw: str) -> bool:
    low = raw.lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ValueError(f"expected a boolean, got {raw!r}")


def parse_config_text(text: str, path: str = "<config>") -> ScenarioConfig:
    """Parse and validate a scenario config; errors are line-anchored."""
    sections: dict[str, dict] = {name: {} for name in _SCALAR_SECTIONS}
    # platform -> list of ((start, end), field dict), in file order
    schedules: dict[str, list] = {}
    current: dict | None = None
    current_keys: dict | None = None
    current_name = ""

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigFileError(path, lineno, f"unterminated section header {raw.strip()!r}")
            header = line[1:-1].strip()
            m = _SCHEDULE_HEADER.match(header)
            if m:
                pid, start, end = m.group(1), int(m.group(2)), int(m.group(3))
                fields: dict = {}
                schedules.setdefault(pid, []).append(((start, end), fields, lineno))
                current, current_keys, current_name = fields, _STRATEGY_KEYS, header
            elif header in _SCALAR_SECTIONS:
                current, current_keys, current_name = sections[header], _SCALAR_SECTIONS[header], header
            else:
                raise ConfigFileError(path, lineno, f"unknown section [{header}]")
            continue
        if current is None:
            raise ConfigFileError(path, lineno, f"key/value outside any section: {line!r}")
        if "=" not in line:
            raise ConfigFileError(path, lineno, f"expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in current_keys:
            raise ConfigFileError(path, lineno, f"unknown key {key!r} in section [{current_name}]")
        if key in current:
            raise ConfigFileError(path, lineno, f"duplicate key {key!r} in section [{current_name}]")
        caster = current_keys[key]
        try:
            current[key] = _parse_bool(value) if caster is bool else caster(value)
        except ValueError as exc:
            raise ConfigFileError(path, lineno, f"bad value for {key!r}: {exc}") from None

    for required in ("horizon_days", "n_travelers", "n_drivers"):
        if required not in sections["scenario"]:
            raise ConfigFileError(path, 1, f"[scenario] is missing required key {required!r}")
    if not schedules:
        raise ConfigFileError(path, 1, "at least one [schedule <platform> <a>..<b>] section is required")

    built = []
    for pid, entries in schedules.items():
        strategy_entries = []
        for (start, end), fields, lineno in entries:
            try:
                strategy_entries.append(((start, end), Strategy(**fields)))
            except TypeError as exc:
                raise ConfigFileError(path, lineno, str(exc)) from None
        built.append(StrategySchedule(platform_id=pid, entries=tuple(strategy_entries)))

    cfg = ScenarioConfig(
        schedules=tuple(built),
        choice_params=ChoiceParams(**sections["choice_params"]),
        learning_params=LearningParams(**sections["learning_params"]),
        social_params=SocialParams(**sections["social_params"]),
        **sections["scenario"],
    )
    return validate_config(cfg)


def load_config(path: str | Path) -> ScenarioConfig:
    p = Path(path)
    return parse_config_text(p.read_text(encoding="utf-8"), str(p))


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return repr(value) if isinstance(value, float) else str(value)


def canonical_text(cfg: ScenarioConfig) -> str:
    """Deterministic rendering; re-parsing it yields an identical config."""
    out = ["[scenario]"]
    for key in _SCALAR_SECTIONS["scenario"]:
        out.append(f"{key} = {_fmt(getattr(cfg, key))}")
    for section, obj in (("choice_params", cfg.choice_params),
                         ("learning_params", cfg.learning_params),
                         ("social_params", cfg.social_params)):
        out.append("")
        out.append(f"[{section}]")
        for key in _SCALAR_SECTIONS[section]:
            value = getattr(obj, key)
            if value is None:
                continue
            out.append(f"{key} = {_fmt(value)}")
    for schedule in cfg.schedules:
        for (start, end), strategy in schedule.entries:
            out.append("")
            out.append(f"[schedule {schedule.platform_id} {start}..{end}]")
            for key in _STRATEGY_KEYS:
                out.append(f"{key} = {_fmt(getattr(strategy, key))}")
    return "\n".join(out) + "\n"


def config_hash(cfg: ScenarioConfig) -> str:
    return hashlib.sha256(canonical_text(cfg).encode("utf-8")).hexdigest()
