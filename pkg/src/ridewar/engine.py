"""The day-to-day coevolution loop.

Each day runs in a fixed order: awareness diffusion, participation choices
(from yesterday's perceived utilities), the within-day market, then the
experience / marketing / word-of-mouth updates that produce tomorrow's
utilities.  All randomness flows through the named streams of RngStreams, so
identical (config, seed) pairs give byte-identical outputs regardless of the
worker count used for replications.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .choice import batch_choice_probabilities, batch_choose, compose_value
from .domain import (
    DayOutOfRangeError,
    RngStreams,
    ScenarioConfig,
    strategy_for_day,
    validate_config,
)
from .learning import (
    UNSERVED_DELTA_U,
    ComponentState,
    apply_update,
    driver_experience_signal,
    marketing_signal,
    traveler_experience_signal,
    wom_signal,
)
from .marketday import (
    ShiftBatch,
    generate_demand,
    match_day,
    pt_benchmark_cost,
    traveler_generalized_cost,
)
from .metrics import DayMetrics, summarize_day
from .social import draw_marketing_exposures, draw_wom_pairs


@dataclass(frozen=True)
class AgentState:
    """Snapshot of one agent's learning state (per-platform tuples)."""

    agent_id: int
    agent_class: str
    aware: tuple[bool, ...]
    components: tuple[tuple[ComponentState, ComponentState, ComponentState], ...]
    composed: tuple[float, ...]
    outside_utility: float


class PopulationState:
    """Learning state of one agent class, stored column-wise per platform."""

    def __init__(self, n: int, cfg: ScenarioConfig):
        shape = (n, cfg.n_platforms)
        u0 = cfg.learning_params.u_init
        self.aware = np.zeros(shape, dtype=bool)
        self.u_exp = np.full(shape, u0, dtype=float)
        self.u_mkt = np.full(shape, u0, dtype=float)
        self.u_wom = np.full(shape, u0, dtype=float)
        self.composed = np.empty(shape, dtype=float)
        self.recompose(cfg)

    def __len__(self) -> int:
        return self.aware.shape[0]

    def recompose(self, cfg: ScenarioConfig) -> None:
        cp = cfg.choice_params
        self.composed[:] = compose_value(self.u_exp, self.u_mkt, self.u_wom, cp.weights, cp.asc)


@dataclass
class SimulationState:
    day: int
    travelers: PopulationState
    drivers: PopulationState
    rng: RngStreams

    def agent_state(self, agent_class: str, agent_id: int, cfg: ScenarioConfig) -> AgentState:
        pop = self.travelers if agent_class == "traveler" else self.drivers
        comps = tuple(
            (
                ComponentState(float(pop.u_exp[agent_id, p]), "experience"),
                ComponentState(float(pop.u_mkt[agent_id, p]), "marketing"),
                ComponentState(float(pop.u_wom[agent_id, p]), "wom"),
            )
            for p in range(cfg.n_platforms)
        )
        return AgentState(
            agent_id=agent_id,
            agent_class=agent_class,
            aware=tuple(bool(a) for a in pop.aware[agent_id]),
            components=comps,
            composed=tuple(float(c) for c in pop.composed[agent_id]),
            outside_utility=cfg.choice_params.outside_utility(agent_class),
        )


def init_state(cfg: ScenarioConfig) -> SimulationState:
    """Day-zero state: nobody aware of anything, all components neutral."""
    return SimulationState(
        day=0,
        travelers=PopulationState(cfg.n_travelers, cfg),
        drivers=PopulationState(cfg.n_drivers, cfg),
        rng=RngStreams(cfg.seed),
    )


def _apply_component_updates(u: np.ndarray, delta: np.ndarray, cfg: ScenarioConfig) -> None:
    # zero-signal entries are skipped so they stay bit-identical (exact fixed point)
    mask = delta != 0.0
    if mask.any():
        u[mask] = apply_update(u[mask], delta[mask], cfg.learning_params)


def step_day(state: SimulationState, cfg: ScenarioConfig) -> tuple[SimulationState, DayMetrics]:
    """Advance one day; mutates ``state`` in place and returns it with the metrics."""
    day = state.day
    if day >= cfg.horizon_days:
        raise DayOutOfRangeError(f"day {day} is past the horizon {cfg.horizon_days}")
    n_p = cfg.n_platforms
    cp = cfg.choice_params
    strategies = tuple(strategy_for_day(s, day) for s in cfg.schedules)
    active = np.array([s.active for s in strategies], dtype=bool)

    # (1) awareness: baseline diffusion, then campaign exposures (which notify too)
    gen_aware = state.rng.stream("awareness", day)
    for pop in (state.travelers, state.drivers):
        u = gen_aware.random(pop.aware.shape)
        pop.aware |= active[None, :] & (u < cfg.awareness_daily_prob)
    gen_social = state.rng.stream("social", day)
    exposures = {}
    for name, pop in (("traveler", state.travelers), ("driver", state.drivers)):
        exposed = draw_marketing_exposures(len(pop), strategies, gen_social)
        pop.aware |= exposed
        exposures[name] = exposed

    # (2) participation choices from yesterday's composed utilities
    gen_choice = state.rng.stream("choice", day)
    choosable_t = state.travelers.aware & active[None, :]
    probs_t = batch_choice_probabilities(
        state.travelers.composed, choosable_t, cp.outside_utility("traveler"), cp)
    choice_t = batch_choose(probs_t, gen_choice)
    choosable_d = state.drivers.aware & active[None, :]
    probs_d = batch_choice_probabilities(
        state.drivers.composed, choosable_d, cp.outside_utility("driver"), cp)
    choice_d = batch_choose(probs_d, gen_choice)

    # (3) within-day market for today's participants
    gen_demand = state.rng.stream("demand", day)
    part_t = np.nonzero(choice_t < n_p)[0]
    requests = generate_demand(part_t, choice_t[part_t], cfg, gen_demand)
    gen_match = state.rng.stream("matching", day)
    positions = gen_match.random((cfg.n_drivers, 2)) * cfg.city_side_km
    part_d = np.nonzero(choice_d < n_p)[0]
    shifts = ShiftBatch(part_d, choice_d[part_d], positions[part_d, 0], positions[part_d, 1])
    outcome = match_day(requests, shifts, strategies, cfg)

    # (4) experience signals for participants (outside-option days learn nothing)
    du_exp_t = np.zeros(state.travelers.aware.shape)
    req = outcome.requests
    if len(req):
        served = outcome.served
        cost = traveler_generalized_cost(
            outcome.fare_paid_cents[served] / 100.0,
            outcome.wait_min[served],
            outcome.in_vehicle_min[served],
            cfg,
        )
        bench = pt_benchmark_cost(req.dist[served], cfg)
        du_exp_t[req.traveler[served], req.platform[served]] = (
            traveler_experience_signal(bench, cost).delta_u)
        du_exp_t[req.traveler[~served], req.platform[~served]] = UNSERVED_DELTA_U
    du_exp_d = np.zeros(state.drivers.aware.shape)
    if len(outcome.shifts):
        du_exp_d[outcome.shifts.driver, outcome.shifts.platform] = (
            driver_experience_signal(cfg.reservation_wage, outcome.net_hourly).delta_u)

    # (5) marketing signals for today's exposures
    intensity = np.array([s.marketing_intensity for s in strategies], dtype=float)
    du_mkt_t = marketing_signal(state.travelers.u_mkt, exposures["traveler"], intensity[None, :]).delta_u
    du_mkt_d = marketing_signal(state.drivers.u_mkt, exposures["driver"], intensity[None, :]).delta_u

    # (6) word of mouth: initiators move toward the partner's best-perceived platform
    du_wom_t = _wom_deltas(state.travelers, active, cfg, gen_social, day)
    du_wom_d = _wom_deltas(state.drivers, active, cfg, gen_social, day)

    # (7) move every touched component along the S-curve, then recompose
    for pop, du_exp, du_mkt, du_wom in (
        (state.travelers, du_exp_t, du_mkt_t, du_wom_t),
        (state.drivers, du_exp_d, du_mkt_d, du_wom_d),
    ):
        _apply_component_updates(pop.u_exp, du_exp, cfg)
        _apply_component_updates(pop.u_mkt, du_mkt, cfg)
        _apply_component_updates(pop.u_wom, du_wom, cfg)
        pop.recompose(cfg)

    metrics = summarize_day(outcome, state, cfg)
    state.day += 1
    return state, metrics


def _wom_deltas(
    pop: PopulationState,
    active: np.ndarray,
    cfg: ScenarioConfig,
    rng: np.random.Generator,
    day: int,
) -> np.ndarray:
    delta = np.zeros(pop.aware.shape)
    eligible = (pop.aware & active[None, :]).any(axis=1)
    pairs = draw_wom_pairs(eligible, cfg.social_params.wom_intensity, rng, day)
    if len(pairs) == 0:
        return delta
    i, j = pairs.initiators, pairs.partners
    peer_composed = pop.composed[j]
    masked = np.where(pop.aware[j] & active[None, :], peer_composed, -np.inf)
    best = masked.argmax(axis=1)
    rows = np.arange(len(i))
    delta[i, best] = wom_signal(
        pop.u_wom[i, best], peer_composed[rows, best],
        cfg.social_params.wom_intensity, True,
    ).delta_u
    return delta


@dataclass(frozen=True)
class FinalStateSummary:
    day: int
    travelers_aware: tuple[int, ...]
    drivers_aware: tuple[int, ...]
    mean_traveler_composed: tuple[float, ...]
    mean_driver_composed: tuple[float, ...]


@dataclass(frozen=True)
class RunResult:
    config: ScenarioConfig
    history: tuple[DayMetrics, ...]
    final: FinalStateSummary


def run(cfg: ScenarioConfig) -> RunResult:
    """Validate, then simulate the full horizon."""
    cfg = validate_config(cfg)
    state = init_state(cfg)
    history = []
    for _ in range(cfg.horizon_days):
        state, day_metrics = step_day(state, cfg)
        history.append(day_metrics)
    final = FinalStateSummary(
        day=state.day,
        travelers_aware=tuple(int(c) for c in state.travelers.aware.sum(axis=0)),
        drivers_aware=tuple(int(c) for c in state.drivers.aware.sum(axis=0)),
        mean_traveler_composed=tuple(float(c) for c in state.travelers.composed.mean(axis=0)),
        mean_driver_composed=tuple(float(c) for c in state.drivers.composed.mean(axis=0)),
    )
    return RunResult(config=cfg, history=tuple(history), final=final)


@dataclass(frozen=True)
class ReplicationResult:
    seeds: tuple[int, ...]              # sorted; aggregation is order-independent
    histories: tuple[tuple[DayMetrics, ...], ...]


def _history_for_seed(args: tuple[ScenarioConfig, int]) -> tuple[DayMetrics, ...]:
    cfg, seed = args
    return run(cfg.with_seed(seed)).history


def run_replications(
    cfg: ScenarioConfig,
    seeds,
    workers: int | None = None,
) -> ReplicationResult:
    """Independent runs of ``cfg`` under each seed, reduced in sorted-seed order.

    ``workers`` > 1 fans runs out to a process pool; results are identical to
    the serial path because each run is fully determined by its seed.
    """
    seed_list = tuple(sorted(int(s) for s in seeds))
    if not seed_list:
        raise ValueError("seed list must be nonempty")
    jobs = [(cfg, s) for s in seed_list]
    if workers is None or workers <= 1 or len(jobs) == 1:
        histories = [_history_for_seed(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            histories = list(pool.map(_history_for_seed, jobs))
    return ReplicationResult(seeds=seed_list, histories=tuple(histories))
