"""One within-day market session: demand, dispatch, fares and experienced outcomes.

The city is an abstract square with Euclidean travel at a flat speed.  Demand
and supply for the day are fixed by the morning's participation choices;
requests are then dispatched first-come-first-served to the nearest driver of
the same platform that can complete pickup within the wait cutoff.

Money is handled in integer euro cents with half-up rounding at each fare
computation, so the daily conservation identities are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .domain import ScenarioConfig, Strategy

UNASSIGNED = -1


def round_half_up_cents(euros) -> np.ndarray | int:
    """Euros (non-negative) to integer cents, rounding .5 up."""
    cents = np.floor(np.asarray(euros, dtype=float) * 100.0 + 0.5).astype(np.int64)
    return int(cents) if np.ndim(euros) == 0 else cents


@dataclass(frozen=True)
class TripRequest:
    traveler_id: int
    platform: int
    request_time: float  # minutes from session start
    origin: tuple[float, float]
    destination: tuple[float, float]
    trip_distance: float


class TripBatch:
    """Column-wise store of one day's trip requests, sorted by request time."""

    def __init__(self, traveler, platform, time_min, ox, oy, dx, dy, dist):
        self.traveler = traveler
        self.platform = platform
        self.time_min = time_min
        self.ox, self.oy, self.dx, self.dy = ox, oy, dx, dy
        self.dist = dist

    @classmethod
    def empty(cls) -> "TripBatch":
        f = np.empty(0, dtype=float)
        i = np.empty(0, dtype=np.int64)
        return cls(i, i.copy(), f, f.copy(), f.copy(), f.copy(), f.copy(), f.copy())

    def __len__(self) -> int:
        return len(self.time_min)

    def __getitem__(self, i: int) -> TripRequest:
        return TripRequest(
            traveler_id=int(self.traveler[i]),
            platform=int(self.platform[i]),
            request_time=float(self.time_min[i]),
            origin=(float(self.ox[i]), float(self.oy[i])),
            destination=(float(self.dx[i]), float(self.dy[i])),
            trip_distance=float(self.dist[i]),
        )


@dataclass(frozen=True)
class DriverShift:
    driver_id: int
    platform: int
    position: tuple[float, float]
    busy_until: float
    accumulated_revenue_cents: int
    accumulated_distance_km: float
    trips: int


class ShiftBatch:
    """Column-wise store of the drivers working today, grouped by platform.

    Rows are contiguous per platform so the matching kernel can mutate
    positions and busy times through array views.
    """

    def __init__(self, driver, platform, x, y):
        order = np.lexsort((driver, platform))
        self.driver = np.asarray(driver, dtype=np.int64)[order]
        self.platform = np.asarray(platform, dtype=np.int64)[order]
        self.x = np.asarray(x, dtype=float)[order].copy()
        self.y = np.asarray(y, dtype=float)[order].copy()
        n = len(self.driver)
        self.busy_until = np.zeros(n, dtype=float)
        self.revenue_cents = np.zeros(n, dtype=np.int64)
        self.distance_km = np.zeros(n, dtype=float)
        self.trips = np.zeros(n, dtype=np.int64)

    @classmethod
    def empty(cls) -> "ShiftBatch":
        z = np.empty(0)
        return cls(z.astype(np.int64), z.astype(np.int64), z, z)

    def __len__(self) -> int:
        return len(self.driver)

    def __getitem__(self, i: int) -> DriverShift:
        return DriverShift(
            driver_id=int(self.driver[i]),
            platform=int(self.platform[i]),
            position=(float(self.x[i]), float(self.y[i])),
            busy_until=float(self.busy_until[i]),
            accumulated_revenue_cents=int(self.revenue_cents[i]),
            accumulated_distance_km=float(self.distance_km[i]),
            trips=int(self.trips[i]),
        )

    def platform_slice(self, p: int) -> slice:
        lo = int(np.searchsorted(self.platform, p, side="left"))
        hi = int(np.searchsorted(self.platform, p, side="right"))
        return slice(lo, hi)


@dataclass
class DayOutcome:
    """Everything experienced in one market session, per request and per driver."""

    requests: TripBatch
    served: np.ndarray          # bool per request
    wait_min: np.ndarray        # per request; 0 where unserved
    in_vehicle_min: np.ndarray
    assigned_row: np.ndarray    # row into shifts, UNASSIGNED where unserved
    base_cents: np.ndarray      # int64 per request; 0 where unserved
    fare_paid_cents: np.ndarray
    driver_revenue_cents: np.ndarray
    subsidy_cents: np.ndarray
    commission_cents: np.ndarray
    shifts: ShiftBatch
    net_hourly: np.ndarray      # euros/hour per shift row


def generate_demand(
    traveler_ids: np.ndarray,
    platforms: np.ndarray,
    cfg: ScenarioConfig,
    rng: np.random.Generator,
) -> TripBatch:
    """One uniform request per participating traveler, sorted by request time."""
    n = len(traveler_ids)
    if n == 0:
        return TripBatch.empty()
    side = cfg.city_side_km
    times = rng.random(n) * cfg.session_min
    origins = rng.random((n, 2)) * side
    dests = rng.random((n, 2)) * side
    dist = np.hypot(dests[:, 0] - origins[:, 0], dests[:, 1] - origins[:, 1])
    while np.any(dist == 0.0):  # zero-length trips are invalid; redraw destinations
        bad = dist == 0.0
        dests[bad] = rng.random((int(bad.sum()), 2)) * side
        dist = np.hypot(dests[:, 0] - origins[:, 0], dests[:, 1] - origins[:, 1])
    order = np.argsort(times, kind="stable")
    return TripBatch(
        traveler=np.asarray(traveler_ids, dtype=np.int64)[order],
        platform=np.asarray(platforms, dtype=np.int64)[order],
        time_min=times[order],
        ox=origins[order, 0],
        oy=origins[order, 1],
        dx=dests[order, 0],
        dy=dests[order, 1],
        dist=dist[order],
    )


@dataclass(frozen=True)
class FareComponents:
    """Integer-cent split of one trip's base fare."""

    base_cents: int
    fare_paid_cents: int
    driver_revenue_cents: int
    subsidy_cents: int
    commission_cents: int


def fare_components_cents(trip_distance, strategy: Strategy):
    """Vectorized fare split; each piece rounds half-up from the base fare."""
    dist = np.asarray(trip_distance, dtype=float)
    base = np.maximum(
        round_half_up_cents(strategy.fare_per_km * dist),
        round_half_up_cents(strategy.min_fare),
    )
    subsidy = np.floor(base * strategy.discount_rate + 0.5).astype(np.int64)
    commission = np.floor(base * strategy.commission_rate + 0.5).astype(np.int64)
    return base, base - subsidy, base - commission, subsidy, commission


def compute_fare(trip_distance: float, strategy: Strategy) -> FareComponents:
    """Fare split for one trip: paid amount, driver share, subsidy, commission."""
    if not trip_distance > 0:
        raise ValueError(f"trip_distance must be > 0, got {trip_distance}")
    base, paid, drv, sub, com = fare_components_cents(trip_distance, strategy)
    return FareComponents(int(base), int(paid), int(drv), int(sub), int(com))


@njit(cache=True)
def _match_platform(
    times, ox, oy, ddx, ddy, dist,
    drv_x, drv_y, busy, acc_dist, trips,
    speed_kmh, max_wait_min,
    assigned, wait_out, ivt_out,
):
    """FCFS nearest-feasible-driver dispatch for one platform's requests.

    Mutates the driver arrays in place; requests must already be sorted by
    time.  Ties in pickup distance resolve to the lowest driver row.
    """
    n_req = times.shape[0]
    n_drv = drv_x.shape[0]
    for i in range(n_req):
        t = times[i]
        best = -1
        best_d2 = np.inf
        best_wait = 0.0
        for j in range(n_drv):
            dxj = drv_x[j] - ox[i]
            dyj = drv_y[j] - oy[i]
            d2 = dxj * dxj + dyj * dyj
            if d2 >= best_d2:
                continue
            delay = busy[j] - t
            if delay < 0.0:
                delay = 0.0
            wait = delay + math.sqrt(d2) / speed_kmh * 60.0
            if wait <= max_wait_min:
                best = j
                best_d2 = d2
                best_wait = wait
        if best < 0:
            assigned[i] = -1
            continue
        ivt = dist[i] / speed_kmh * 60.0
        assigned[i] = best
        wait_out[i] = best_wait
        ivt_out[i] = ivt
        busy[best] = t + best_wait + ivt
        drv_x[best] = ddx[i]
        drv_y[best] = ddy[i]
        acc_dist[best] += math.sqrt(best_d2) + dist[i]
        trips[best] += 1


def match_day(
    requests: TripBatch,
    shifts: ShiftBatch,
    strategies: tuple[Strategy, ...],
    cfg: ScenarioConfig,
) -> DayOutcome:
    """Dispatch all requests, settle fares and compute driver incomes.

    Platforms are fully isolated: a request can only be served by a driver on
    the same platform.  An unserved request is an outcome, not an error.
    """
    n_req = len(requests)
    assigned = np.full(n_req, UNASSIGNED, dtype=np.int64)
    wait = np.zeros(n_req, dtype=float)
    ivt = np.zeros(n_req, dtype=float)

    for p in range(len(strategies)):
        rows = np.nonzero(requests.platform == p)[0]
        sl = shifts.platform_slice(p)
        if len(rows) == 0 or sl.stop == sl.start:
            continue
        sub_assigned = np.full(len(rows), UNASSIGNED, dtype=np.int64)
        sub_wait = np.zeros(len(rows), dtype=float)
        sub_ivt = np.zeros(len(rows), dtype=float)
        _match_platform(
            requests.time_min[rows], requests.ox[rows], requests.oy[rows],
            requests.dx[rows], requests.dy[rows], requests.dist[rows],
            shifts.x[sl], shifts.y[sl], shifts.busy_until[sl],
            shifts.distance_km[sl], shifts.trips[sl],
            cfg.vehicle_speed_kmh, cfg.max_wait_min,
            sub_assigned, sub_wait, sub_ivt,
        )
        served_sub = sub_assigned >= 0
        sub_assigned[served_sub] += sl.start  # platform-local row -> global row
        assigned[rows] = sub_assigned
        wait[rows] = sub_wait
        ivt[rows] = sub_ivt

    served = assigned >= 0
    base = np.zeros(n_req, dtype=np.int64)
    paid = np.zeros(n_req, dtype=np.int64)
    drv_rev = np.zeros(n_req, dtype=np.int64)
    subsidy = np.zeros(n_req, dtype=np.int64)
    commission = np.zeros(n_req, dtype=np.int64)
    for p, strat in enumerate(strategies):
        sel = served & (requests.platform == p)
        if not sel.any():
            continue
        b, f, d, s, c = fare_components_cents(requests.dist[sel], strat)
        base[sel], paid[sel], drv_rev[sel], subsidy[sel], commission[sel] = b, f, d, s, c
    if served.any():
        np.add.at(shifts.revenue_cents, assigned[served], drv_rev[served])

    net_hourly = net_hourly_income(shifts.revenue_cents, shifts.distance_km, cfg)
    return DayOutcome(
        requests=requests,
        served=served,
        wait_min=wait,
        in_vehicle_min=ivt,
        assigned_row=assigned,
        base_cents=base,
        fare_paid_cents=paid,
        driver_revenue_cents=drv_rev,
        subsidy_cents=subsidy,
        commission_cents=commission,
        shifts=shifts,
        net_hourly=net_hourly,
    )


def net_hourly_income(revenue_cents, distance_km, cfg: ScenarioConfig):
    """Net euros per hour over the shift: revenue minus distance-based costs."""
    cost_cents = np.floor(np.asarray(distance_km, dtype=float)
                          * cfg.operating_cost_per_km * 100.0 + 0.5).astype(np.int64)
    return (np.asarray(revenue_cents, dtype=np.int64) - cost_cents) / 100.0 / cfg.shift_hours


def driver_net_hourly_income(shift: DriverShift, cfg: ScenarioConfig) -> float:
    """Experienced hourly income of one driver after the session; may be negative."""
    return float(net_hourly_income(shift.accumulated_revenue_cents,
                                   shift.accumulated_distance_km, cfg))


def traveler_generalized_cost(fare_paid_eur, wait_min, in_vehicle_min, cfg: ScenarioConfig):
    """All-in euro cost of a served trip: fare plus value-of-time charges."""
    return fare_paid_eur + cfg.value_of_time * (wait_min + in_vehicle_min) / 60.0


def pt_benchmark_cost(trip_distance, cfg: ScenarioConfig):
    """Generalized cost of the same trip by public transport."""
    pt_minutes = cfg.pt_access_min + np.asarray(trip_distance, dtype=float) / cfg.pt_speed_kmh * 60.0
    out = cfg.pt_fare + cfg.value_of_time * pt_minutes / 60.0
    return float(out) if np.ndim(trip_distance) == 0 else out
