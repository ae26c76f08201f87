"""S-shaped memory engine and the daily signal formulas that drive it.

Each utility component lives in (0, 1) and moves along a logistic curve:
the current value is mapped back to cumulative-utility space, shifted by
today's weighted signal, and mapped forward again.  A positive signal pushes
utility DOWN (a larger cumulative value maps to a smaller sigmoid output), so
"bad day" signals are positive by convention throughout.

All functions accept scalars or numpy arrays; the engine calls them
vectorized over (agent, platform) matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import LearningParams

# Keeps utilities off the asymptotes so the inverse map stays finite, and
# bounds how far cumulative utility can drift from neutral: saturated agents
# stay responsive to a reversal within weeks rather than years.
EPS_CLAMP = 0.01

# signal applied to a traveler whose request could not be served: the same
# magnitude as a driver earning zero income
UNSERVED_DELTA_U = 1.0

COMPONENT_KINDS = ("experience", "marketing", "wom")


@dataclass(frozen=True)
class ComponentState:
    """One utility component of one agent for one platform."""

    utility: float
    component_kind: str = "experience"


@dataclass(frozen=True)
class Signal:
    """A daily increment in cumulative-utility space.

    Positive delta_u decreases the component utility.  ``delta_u`` may be a
    scalar or an ndarray when evaluated for a whole population at once.
    """

    delta_u: float | np.ndarray
    source: str


def sigmoid(cu, shape_beta):
    """Map cumulative utility to (0, 1); strictly decreasing in ``cu``."""
    out = 1.0 / (1.0 + np.exp(shape_beta * np.asarray(cu, dtype=float)))
    out = np.clip(out, EPS_CLAMP, 1.0 - EPS_CLAMP)
    return float(out) if np.ndim(cu) == 0 else out


def inverse_sigmoid(u, shape_beta):
    """Recover cumulative utility from a component value in (0, 1).

    Includes the 1/shape_beta factor so that
    sigmoid(inverse_sigmoid(u, b), b) == u exactly; without it a zero-signal
    day would mutate utilities whenever shape_beta != 1.
    """
    u_arr = np.asarray(u, dtype=float)
    if np.any(u_arr <= 0.0) or np.any(u_arr >= 1.0):
        raise ValueError(f"utility must lie strictly inside (0, 1), got {u!r}")
    out = np.log(1.0 / u_arr - 1.0) / shape_beta
    return float(out) if np.ndim(u) == 0 else out


def accumulate(cu, alpha, delta_u):
    """Shift cumulative utility by the step-size-weighted signal."""
    return cu + alpha * delta_u


def apply_update(utility, delta_u, params: LearningParams):
    """One S-curve step: utility -> sigmoid(inverse_sigmoid(utility) + alpha * delta_u).

    The step is largest near utility 0.5 and vanishes toward the extremes.
    """
    cu = inverse_sigmoid(utility, params.shape_beta)
    return sigmoid(accumulate(cu, params.alpha, delta_u), params.shape_beta)


def update_component(state: ComponentState, signal: Signal, params: LearningParams) -> ComponentState:
    return ComponentState(
        utility=apply_update(state.utility, signal.delta_u, params),
        component_kind=state.component_kind,
    )


def driver_experience_signal(reservation_wage, experienced_income) -> Signal:
    """Relative shortfall of the day's net hourly income vs. the reservation wage."""
    return Signal(
        delta_u=(reservation_wage - experienced_income) / reservation_wage,
        source="experience",
    )


def traveler_experience_signal(pt_benchmark, experienced_cost) -> Signal:
    """Relative excess of the trip's generalized cost over the PT benchmark.

    Evaluated in positive generalized-cost space: a trip cheaper (all-in) than
    public transport yields a negative signal, i.e. rising utility.
    """
    return Signal(
        delta_u=(experienced_cost - pt_benchmark) / pt_benchmark,
        source="experience",
    )


def unserved_signal() -> Signal:
    """Maximum-disappointment signal for a traveler left unserved."""
    return Signal(delta_u=UNSERVED_DELTA_U, source="experience")


def marketing_signal(current_um, exposure, intensity) -> Signal:
    """Campaign exposure nudges the marketing component up, saturating near 1."""
    delta = np.where(exposure, intensity * (np.asarray(current_um, dtype=float) - 1.0), 0.0)
    return Signal(delta_u=float(delta) if np.ndim(delta) == 0 else delta, source="marketing")


def wom_signal(own_uwom, peer_perceived, intensity, interact) -> Signal:
    """Pull the own word-of-mouth component toward the peer's perceived utility."""
    delta = np.where(
        interact,
        intensity * (np.asarray(own_uwom, dtype=float) - np.asarray(peer_perceived, dtype=float)),
        0.0,
    )
    return Signal(delta_u=float(delta) if np.ndim(delta) == 0 else delta, source="wom")
