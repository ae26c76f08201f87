"""Perceived-utility composition and nested-logit participation probabilities.

Platforms form one nest with scale theta_n = theta * (1 - rho); the outside
option (public transport for travelers, reservation wage for drivers) is a
degenerate single-member nest.  Agents unaware of a platform have probability
exactly zero of choosing it.  All softmax/logsum computations subtract the
running maximum before exponentiation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .domain import ChoiceParams


@dataclass(frozen=True)
class PerceivedUtility:
    value: float
    alternative: str = ""


@dataclass(frozen=True)
class ChoiceSet:
    """Alternatives of one agent: the platform nest plus the outside option.

    ``rs_nest`` holds (alternative id, perceived utility, aware) triples; the
    aware subset may be empty, in which case the outside option is certain.
    """

    rs_nest: tuple[tuple[str, float, bool], ...]
    outside: tuple[str, float]


@dataclass(frozen=True)
class ChoiceProbabilities:
    alternatives: tuple[str, ...]  # nest members in order, then the outside option
    probabilities: tuple[float, ...]


def compose_value(u_experience, u_marketing, u_wom, weights, asc=0.0):
    """Weighted combination of the three learned components plus the ASC."""
    w_e, w_m, w_w = weights
    return w_e * u_experience + w_m * u_marketing + w_w * u_wom + asc


def compose_perceived_utility(
    components: tuple[float, float, float],
    weights: tuple[float, float, float],
    asc: float = 0.0,
    alternative: str = "",
) -> PerceivedUtility:
    value = compose_value(components[0], components[1], components[2], weights, asc)
    return PerceivedUtility(value=float(value), alternative=alternative)


def within_nest_probability(nest_utilities: Sequence[float], theta_n: float) -> np.ndarray:
    """Softmax over the aware nest members, scaled by 1/theta_n."""
    u = np.asarray(nest_utilities, dtype=float)
    if u.size == 0:
        raise ValueError("within-nest probability requires at least one aware member")
    z = u / theta_n
    z -= z.max()
    e = np.exp(z)
    return e / e.sum()


def nest_logsum(nest_utilities: Sequence[float], theta_n: float) -> float:
    """Expected maximum utility of the nest: theta_n * log sum exp(u / theta_n)."""
    u = np.asarray(nest_utilities, dtype=float)
    if u.size == 0:
        raise ValueError("logsum of an empty nest is undefined")
    z = u / theta_n
    m = z.max()
    return float(theta_n * (m + np.log(np.exp(z - m).sum())))


def nest_probability(logsums: Sequence[float], theta: float) -> np.ndarray:
    """Upper-level softmax over nest logsums, scaled by 1/theta."""
    w = np.asarray(logsums, dtype=float) / theta
    w -= w.max()
    e = np.exp(w)
    return e / e.sum()


def choice_probabilities(choice_set: ChoiceSet, params: ChoiceParams) -> ChoiceProbabilities:
    """Full probability vector over nest members (in order) plus the outside option."""
    names = tuple(name for name, _, _ in choice_set.rs_nest) + (choice_set.outside[0],)
    aware_utils = [u for _, u, aware in choice_set.rs_nest if aware]
    n = len(choice_set.rs_nest)
    if not aware_utils:
        return ChoiceProbabilities(names, (0.0,) * n + (1.0,))
    p_in_nest = within_nest_probability(aware_utils, params.theta_n)
    w_rs = nest_logsum(aware_utils, params.theta_n)
    p_nest = nest_probability([w_rs, choice_set.outside[1]], params.theta)
    probs = []
    k = 0
    for _, _, aware in choice_set.rs_nest:
        if aware:
            probs.append(float(p_in_nest[k] * p_nest[0]))
            k += 1
        else:
            probs.append(0.0)
    probs.append(float(p_nest[1]))
    return ChoiceProbabilities(names, tuple(probs))


def choose(choice_set: ChoiceSet, params: ChoiceParams, rng: np.random.Generator) -> str:
    """Sample one alternative; consumes exactly one uniform draw."""
    cp = choice_probabilities(choice_set, params)
    r = rng.random()
    cum = 0.0
    for name, p in zip(cp.alternatives, cp.probabilities):
        cum += p
        if r < cum and p > 0.0:
            return name
    return cp.alternatives[-1]  # guard against float shortfall in the cumsum


def batch_choice_probabilities(
    composed: np.ndarray,
    aware: np.ndarray,
    outside_utility: float,
    params: ChoiceParams,
) -> np.ndarray:
    """Probability matrix (n_agents, n_platforms + 1); last column is outside.

    Row-for-row identical to choice_probabilities applied per agent; kept
    vectorized because the engine evaluates it for every agent every day.
    """
    composed = np.asarray(composed, dtype=float)
    aware = np.asarray(aware, dtype=bool)
    n, p = composed.shape
    theta_n = params.theta_n
    z = np.where(aware, composed / theta_n, -np.inf)
    any_aware = aware.any(axis=1)
    zmax = np.where(any_aware, z.max(axis=1, initial=-np.inf), 0.0)
    e = np.exp(z - zmax[:, None])
    e[~aware] = 0.0
    denom = e.sum(axis=1)
    safe_denom = np.where(denom > 0.0, denom, 1.0)
    p_in_nest = e / safe_denom[:, None]

    w_rs = theta_n * (zmax + np.log(safe_denom))
    d = (w_rs - outside_utility) / params.theta
    # P(nest) = 1 / (1 + exp(-d)) = exp(-log(1 + exp(-d))), stable for either sign
    p_nest = np.exp(-np.logaddexp(0.0, -d))
    p_nest = np.where(any_aware, p_nest, 0.0)

    probs = np.empty((n, p + 1), dtype=float)
    probs[:, :p] = p_in_nest * p_nest[:, None]
    probs[:, p] = 1.0 - p_nest
    return probs


def batch_choose(probs: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Sample one alternative index per row; one uniform draw per agent.

    Agent i always consumes the i-th draw, so iteration order can never
    change outcomes.  Zero-probability alternatives are never returned, even
    if a draw lands exactly on a cumulative boundary.
    """
    n, k = probs.shape
    r = rng.random(n)
    cum = np.cumsum(probs, axis=1)
    idx = np.minimum((r[:, None] >= cum).sum(axis=1), k - 1)
    rows = np.arange(n)
    bad = probs[rows, idx] <= 0.0
    idx[bad] = k - 1  # outside option always has positive probability
    return idx
