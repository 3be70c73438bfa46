"""Scale-free bandit policies built on the hedge engines.

AhbPolicy needs no knowledge of the payoff range: a K-round warm-up centers
the importance-weighted estimates, and uniform mixing keeps them bounded.
The Known-M variants skip both, exploiting an a-priori upper bound M on
payoffs to center the estimates at M (making every non-played coordinate an
optimistic guess).

All policies follow a strict act/observe alternation and expose
``last_distribution`` (the sampling law of the most recent action) plus
engine diagnostics where applicable.
"""

from __future__ import annotations

import math

import numpy as np

from .core import categorical
from .hedge import (
    ENTROPIC,
    TSALLIS,
    HedgeState,
    _normalizer_shifted,
    entropic_gap,
    tsallis_gap,
)

__all__ = [
    "ahb_exploration_rate",
    "importance_estimate",
    "Policy",
    "AhbPolicy",
    "KnownMAdaHedgePolicy",
    "KnownMTsallisPolicy",
    "make_policy",
    "policy_act",
    "policy_observe",
]


def ahb_exploration_rate(t: int, alpha: float, K: int) -> float:
    """Uniform-mixing weight gamma_t = min(1/2, sqrt(5(1-alpha) K log K) / t^alpha).

    alpha in [1/2, 1) trades the mixing decay against the adversarial-regret
    exponent. t is the 1-based round index.
    """
    if not 0.5 <= alpha < 1.0:
        raise ValueError("alpha must lie in [1/2, 1)")
    if t < 1:
        raise ValueError("rounds are 1-based")
    return min(0.5, math.sqrt(5.0 * (1.0 - alpha) * K * math.log(K)) / t**alpha)


def importance_estimate(reward: float, arm: int, probs, center: float) -> np.ndarray:
    """Centered importance-weighted payoff vector.

    Coordinate `arm` gets (reward - center) / probs[arm] + center; every
    other coordinate is the center. Unbiased for the true payoff vector when
    the realized arm is drawn from probs.
    """
    p = np.asarray(probs, dtype=float)
    if p[arm] <= 0.0:
        raise ValueError("the played arm must have positive probability")
    est = np.full(len(p), float(center))
    est[arm] = (reward - center) / p[arm] + center
    return est


class Policy:
    """act/observe alternation and the shared diagnostic surface."""

    def __init__(self, K: int):
        if K < 2:
            raise ValueError("need at least two arms")
        self.K = K
        self.t = 1  # 1-based index of the round about to be played
        self.last_distribution: np.ndarray | None = None
        self._awaiting_reward = False

    def act(self, rng: np.random.Generator) -> int:
        if self._awaiting_reward:
            raise RuntimeError("act called twice without an observe between")
        arm = self._choose(rng)
        self._awaiting_reward = True
        return arm

    def observe(self, arm: int, reward: float) -> None:
        if not self._awaiting_reward:
            raise RuntimeError("observe called before act")
        self._update(arm, float(reward))
        self._awaiting_reward = False
        self.t += 1

    def _choose(self, rng: np.random.Generator) -> int:
        raise NotImplementedError

    def _update(self, arm: int, reward: float) -> None:
        raise NotImplementedError


class AhbPolicy(Policy):
    """Adaptive Hedge Bandit: warm-up centering + mixed AdaHedge sampling.

    Rounds 1..K play each arm once and only accumulate the running center
    C = mean of the warm-up rewards (those rounds never reach the engine).
    From round K+1 on, the engine's weights q_t are mixed with the uniform
    distribution at rate gamma_t, the action is drawn from the mixture p_t,
    and the centered importance estimate is fed to the engine with the
    mixability gap measured against the pre-mix weights q_t.
    """

    def __init__(self, K: int, alpha: float = 0.5):
        super().__init__(K)
        if not 0.5 <= alpha < 1.0:
            raise ValueError("alpha must lie in [1/2, 1)")
        self.alpha = alpha
        self.center: float | None = None
        self.engine: HedgeState | None = None
        self._warmup_sum = 0.0
        self._q: np.ndarray | None = None
        self.last_rate: float | None = None
        self.last_gap: float | None = None

    def _choose(self, rng: np.random.Generator) -> int:
        if self.t <= self.K:
            arm = self.t - 1
            dist = np.zeros(self.K)
            dist[arm] = 1.0
            self.last_distribution = dist
            return arm
        gamma = ahb_exploration_rate(self.t, self.alpha, self.K)
        p = (1.0 - gamma) * self._q + gamma / self.K
        self.last_rate = gamma
        self.last_distribution = p
        return categorical(p, rng)

    def _update(self, arm: int, reward: float) -> None:
        if self.t <= self.K:
            self._warmup_sum += reward
            if self.t == self.K:
                self.center = self._warmup_sum / self.K
                self.engine = HedgeState.fresh(ENTROPIC, self.K)
                self._q = np.full(self.K, 1.0 / self.K)
            return
        est = importance_estimate(reward, arm, self.last_distribution, self.center)
        eta = self.engine.learning_rate
        gap = entropic_gap(self._q, est, eta)
        self.engine = HedgeState(
            kind=ENTROPIC, S=self.engine.S + est, gap_sum=self.engine.gap_sum + gap
        )
        self._q = self.engine.weights()
        self.last_gap = gap


class KnownMAdaHedgePolicy(Policy):
    """AdaHedge bandit for payoffs known to be bounded above by M.

    No warm-up and no uniform mixing: actions are sampled straight from the
    engine weights p_t, estimates are centered at M (so unplayed arms look
    as good as possible) and the gap is measured against p_t itself.
    """

    def __init__(self, K: int, M: float):
        super().__init__(K)
        self.M = float(M)
        self.engine = HedgeState.fresh(ENTROPIC, K)
        self._p = np.full(K, 1.0 / K)
        self.last_gap: float | None = None
        self.last_eta: float | None = None
        self.last_prob: float | None = None

    def _choose(self, rng: np.random.Generator) -> int:
        self.last_distribution = self._p
        return categorical(self._p, rng)

    def _update(self, arm: int, reward: float) -> None:
        if reward > self.M + 1e-9:
            raise ValueError(f"observed payoff {reward} exceeds the bound M={self.M}")
        est = importance_estimate(reward, arm, self._p, self.M)
        eta = self.engine.learning_rate
        gap = entropic_gap(self._p, est, eta)
        self.engine = HedgeState(
            kind=ENTROPIC, S=self.engine.S + est, gap_sum=self.engine.gap_sum + gap
        )
        self._p = self.engine.weights()
        self.last_gap = gap
        self.last_eta = eta
        self.last_prob = float(self.last_distribution[arm])


class KnownMTsallisPolicy(Policy):
    """1/2-Tsallis AdaFTRL bandit for payoffs bounded above by M.

    Same estimate centering as the AdaHedge variant but with the Tsallis
    regularizer, whose sqrt(K) diameter removes the log K factor from the
    regret. The normalizer solve for the sampling weights is warm-started
    from the previous round's root.
    """

    def __init__(self, K: int, M: float):
        super().__init__(K)
        self.M = float(M)
        self.engine = HedgeState.fresh(TSALLIS, K)
        self._p = np.full(K, 1.0 / K)
        self._c: float | None = None
        self.last_gap: float | None = None
        self.last_eta: float | None = None
        self.last_prob: float | None = None

    def _choose(self, rng: np.random.Generator) -> int:
        self.last_distribution = self._p
        return categorical(self._p, rng)

    def _update(self, arm: int, reward: float) -> None:
        if reward > self.M + 1e-9:
            raise ValueError(f"observed payoff {reward} exceeds the bound M={self.M}")
        est = importance_estimate(reward, arm, self._p, self.M)
        eta = self.engine.learning_rate
        gap = tsallis_gap(self._p, est, eta)
        self.engine = HedgeState(
            kind=TSALLIS, S=self.engine.S + est, gap_sum=self.engine.gap_sum + gap
        )
        eta_next = self.engine.learning_rate
        if math.isinf(eta_next):
            top = self.engine.S == self.engine.S.max()
            self._p = top / top.sum()
            self._c = None
        else:
            zeta = eta_next * self.engine.S
            zs = zeta - zeta.max()
            self._c = _normalizer_shifted(zs, x0=self._c)
            w = 1.0 / (self._c - zs)
            w *= w
            self._p = w / w.sum()
        self.last_gap = gap
        self.last_eta = eta
        self.last_prob = float(self.last_distribution[arm])


def make_policy(spec: dict, K: int, horizon: int) -> Policy:
    """Build a fresh policy from a descriptor dict.

    Descriptors: {"kind": "ahb", "alpha": 0.5}, {"kind": "known_m_adahedge",
    "M": 1.2}, {"kind": "known_m_tsallis", "M": 1.2}, {"kind": "ucb",
    "sigma": 1.0}, {"kind": "range_ucb"}, {"kind": "inflated_ucb"},
    {"kind": "ftl"}, {"kind": "random"}.
    """
    from . import baselines  # deferred: baselines builds on this module

    kind = spec.get("kind")
    if kind == "ahb":
        return AhbPolicy(K, alpha=float(spec.get("alpha", 0.5)))
    if kind in ("known_m_adahedge", "known_m_tsallis"):
        M = float(spec["M"])
        if not math.isfinite(M):
            raise ValueError("M must be finite")
        cls = KnownMAdaHedgePolicy if kind == "known_m_adahedge" else KnownMTsallisPolicy
        return cls(K, M)
    if kind == "ucb":
        return baselines.UcbPolicy(K, sigma=float(spec["sigma"]), horizon=horizon)
    if kind == "range_ucb":
        return baselines.RangeUcbPolicy(K, horizon)
    if kind == "inflated_ucb":
        return baselines.InflatedUcbPolicy(K, horizon)
    if kind == "ftl":
        return baselines.FtlPolicy(K, horizon)
    if kind == "random":
        return baselines.RandomPolicy(K)
    raise ValueError(f"unknown policy kind {kind!r}")


def policy_act(policy: Policy, rng: np.random.Generator):
    """Draw an action; returns (arm, sampling distribution)."""
    arm = policy.act(rng)
    return arm, policy.last_distribution


def policy_observe(policy: Policy, arm: int, reward: float) -> Policy:
    """Feed the reward for the arm just played. Returns the policy."""
    policy.observe(arm, reward)
    return policy
