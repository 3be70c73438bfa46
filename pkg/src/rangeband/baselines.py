"""Baseline policies: UCB variants, follow-the-leader, uniform random.

The index policies share the same skeleton: play each arm once in order
(rounds 1..K), then pick the argmax of an index with ties resolved to the
lowest arm (what np.argmax does). Only the index differs:

- UcbPolicy assumes a sub-Gaussian scale sigma and a known horizon and uses
  mean + 1.2 * sigma * sqrt(2 log T / N).
- RangeUcbPolicy estimates the payoff range from the pooled history
  (max minus min over every payoff seen so far) and uses it in place of the
  sigma scaling. No theoretical guarantee; benchmark parity only.
- InflatedUcbPolicy drops scale knowledge entirely and inflates the bonus
  with a slowly growing phi(t): mean + sqrt(phi(t) / N), default (log t)^2.
"""

from __future__ import annotations

import math

import numpy as np

from .policies import Policy

__all__ = [
    "ucb_index",
    "range_ucb_index",
    "inflated_ucb_index",
    "UcbBookkeeping",
    "UcbPolicy",
    "RangeUcbPolicy",
    "InflatedUcbPolicy",
    "FtlPolicy",
    "RandomPolicy",
    "baseline_act",
]


def ucb_index(mean_est, count, horizon: int, sigma: float):
    """Known-scale index mean + 1.2 * sigma * sqrt(2 log T / N).

    log T uses the fixed horizon, not the current round.
    """
    return mean_est + 1.2 * sigma * np.sqrt(2.0 * math.log(horizon) / count)


def range_ucb_index(mean_est, count, horizon: int, range_est: float):
    """Index mean + range_est * sqrt(2 log T / N) with the empirical range."""
    return mean_est + range_est * np.sqrt(2.0 * math.log(horizon) / count)


def inflated_ucb_index(mean_est, count, t: int, phi=None):
    """Anytime index mean + sqrt(phi(t) / N), default phi(t) = (log t)^2."""
    bonus = math.log(t) ** 2 if phi is None else phi(t)
    return mean_est + np.sqrt(bonus / count)


class UcbBookkeeping:
    """Pull counts, payoff sums and pooled payoff extremes for index policies."""

    def __init__(self, K: int, horizon: int):
        self.horizon = int(horizon)
        self.counts = np.zeros(K, dtype=np.int64)
        self.sums = np.zeros(K)
        self.seen_min = math.inf
        self.seen_max = -math.inf

    def record(self, arm: int, reward: float) -> None:
        self.counts[arm] += 1
        self.sums[arm] += reward
        if reward < self.seen_min:
            self.seen_min = reward
        if reward > self.seen_max:
            self.seen_max = reward

    @property
    def means(self) -> np.ndarray:
        """Empirical means; defined only for arms pulled at least once."""
        return self.sums / self.counts

    @property
    def observed_range(self) -> float:
        if math.isinf(self.seen_min):
            return 0.0
        return self.seen_max - self.seen_min


class _IndexPolicy(Policy):
    def __init__(self, K: int, horizon: int):
        super().__init__(K)
        self.stats = UcbBookkeeping(K, horizon)

    def _choose(self, rng: np.random.Generator) -> int:
        if self.t <= self.K:
            arm = self.t - 1
        else:
            arm = int(np.argmax(self._index()))
        dist = np.zeros(self.K)
        dist[arm] = 1.0
        self.last_distribution = dist
        return arm

    def _update(self, arm: int, reward: float) -> None:
        self.stats.record(arm, reward)

    def _index(self) -> np.ndarray:
        raise NotImplementedError


class UcbPolicy(_IndexPolicy):
    """UCB with an assumed sub-Gaussian scale sigma and known horizon."""

    def __init__(self, K: int, sigma: float, horizon: int):
        super().__init__(K, horizon)
        self.sigma = float(sigma)

    def _index(self) -> np.ndarray:
        s = self.stats
        return ucb_index(s.means, s.counts, s.horizon, self.sigma)


class RangeUcbPolicy(_IndexPolicy):
    """UCB whose exploration bonus tracks the observed payoff range."""

    def _index(self) -> np.ndarray:
        s = self.stats
        return range_ucb_index(s.means, s.counts, s.horizon, s.observed_range)


class InflatedUcbPolicy(_IndexPolicy):
    """Scale-oblivious UCB with an inflated, horizon-free bonus."""

    def __init__(self, K: int, horizon: int, phi=None):
        super().__init__(K, horizon)
        self.phi = phi

    def _index(self) -> np.ndarray:
        s = self.stats
        return inflated_ucb_index(s.means, s.counts, self.t, self.phi)


class FtlPolicy(_IndexPolicy):
    """Follow the leader: greedy on the empirical means, no bonus."""

    def _index(self) -> np.ndarray:
        return self.stats.means


class RandomPolicy(Policy):
    """Uniform action draws; ignores all feedback."""

    def __init__(self, K: int):
        super().__init__(K)
        self.last_distribution = np.full(K, 1.0 / K)

    def _choose(self, rng: np.random.Generator) -> int:
        return int(rng.integers(self.K))

    def _update(self, arm: int, reward: float) -> None:
        pass


def baseline_act(policy: Policy, rng: np.random.Generator) -> int:
    """Draw one action from a baseline policy."""
    if not isinstance(policy, (_IndexPolicy, RandomPolicy)):
        raise TypeError("baseline_act expects a baseline policy")
    return policy.act(rng)
