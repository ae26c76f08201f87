"""Daily marketing exposures and word-of-mouth peer interactions.

Both processes are memoryless draws: exposure to each active campaign is an
independent Bernoulli per agent, and each aware agent may initiate exactly one
word-of-mouth exchange with a uniformly chosen aware peer of the same class
(random daily mixing; no persistent network topology).

Draw counts are shape-stable -- full-population uniforms are drawn before any
masking -- so stream alignment never depends on simulation state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import Strategy


@dataclass(frozen=True)
class Interaction:
    """One word-of-mouth exchange: ``agent_i`` initiated, ``agent_j`` shared."""

    agent_i: int
    agent_j: int
    day: int


class InteractionBatch:
    """Column-wise list of one day's interactions."""

    def __init__(self, initiators: np.ndarray, partners: np.ndarray, day: int):
        self.initiators = initiators
        self.partners = partners
        self.day = day

    def __len__(self) -> int:
        return len(self.initiators)

    def __getitem__(self, k: int) -> Interaction:
        return Interaction(int(self.initiators[k]), int(self.partners[k]), self.day)


def draw_marketing_exposures(
    n_agents: int,
    strategies: tuple[Strategy, ...],
    rng: np.random.Generator,
) -> np.ndarray:
    """Bool (n_agents, n_platforms) matrix of campaign exposures.

    A campaign is active when the platform is active with positive marketing
    intensity; exposure probability equals that intensity, independently per
    agent and platform.
    """
    intensity = np.array([s.marketing_intensity for s in strategies], dtype=float)
    campaign = np.array([s.active and s.marketing_intensity > 0.0 for s in strategies])
    u = rng.random((n_agents, len(strategies)))
    return (u < intensity[None, :]) & campaign[None, :]


def draw_wom_pairs(
    aware: np.ndarray,
    wom_intensity: float,
    rng: np.random.Generator,
    day: int = 0,
) -> InteractionBatch:
    """Sample today's word-of-mouth pairs within one agent class.

    ``aware`` flags the agents eligible to talk (aware of at least one active
    platform).  Each eligible agent initiates with probability
    ``wom_intensity``; the partner is uniform over the other eligible agents.
    Fewer than two eligible agents means no interactions.
    """
    aware = np.asarray(aware, dtype=bool)
    n = len(aware)
    u_initiate = rng.random(n)
    u_partner = rng.random(n)

    pool = np.nonzero(aware)[0]
    m = len(pool)
    empty = np.empty(0, dtype=np.int64)
    if m < 2 or wom_intensity <= 0.0:
        return InteractionBatch(empty, empty, day)

    initiators = pool[u_initiate[pool] < wom_intensity]
    if len(initiators) == 0:
        return InteractionBatch(empty, empty, day)
    own_pos = np.searchsorted(pool, initiators)
    j = np.minimum((u_partner[initiators] * (m - 1)).astype(np.int64), m - 2)
    j += j >= own_pos  # skip self, keeping the partner uniform over the others
    return InteractionBatch(initiators.astype(np.int64), pool[j].astype(np.int64), day)
