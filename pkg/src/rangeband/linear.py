"""Adversarial linear bandits on a finite action set.

The player holds K actions in R^d, the adversary picks payoff vectors y_t,
and only the scalar payoff of the chosen action is revealed. The estimator
inverts the round's design matrix, exploration mixes in a G-optimal design
(computed once by Frank-Wolfe), and the scalar projections of the estimate
onto every action feed the entropic hedge engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import categorical
from .hedge import ENTROPIC, HedgeState, entropic_gap

__all__ = [
    "ActionSet",
    "LinearSequence",
    "DesignDistribution",
    "design_matrix",
    "optimal_design",
    "linear_estimate",
    "linear_exploration_rate",
    "LinearAhbPolicy",
    "linear_ahb_step",
    "linear_problem_from_dict",
]


@dataclass(frozen=True)
class ActionSet:
    """K actions spanning R^d, stored as the rows of a K x d array."""

    actions: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.actions, dtype=float)
        if X.ndim != 2:
            raise ValueError("actions must be a K x d array")
        object.__setattr__(self, "actions", X)
        K, d = X.shape
        if K < d:
            raise ValueError(f"need at least d={d} actions, got {K}")
        rank = np.linalg.matrix_rank(X)
        if rank < d:
            raise ValueError(
                f"actions span only a rank-{rank} subspace of R^{d}; "
                "reduce the ambient dimension instead"
            )

    @property
    def K(self) -> int:
        return self.actions.shape[0]

    @property
    def d(self) -> int:
        return self.actions.shape[1]


@dataclass(frozen=True)
class LinearSequence:
    """Oblivious payoff vectors y_1..y_T with declared payoff range [m, M]."""

    payoffs: np.ndarray
    m: float
    M: float

    def __post_init__(self):
        Y = np.asarray(self.payoffs, dtype=float)
        if Y.ndim != 2:
            raise ValueError("payoffs must be a T x d array")
        object.__setattr__(self, "payoffs", Y)
        if not self.m <= 0.0 <= self.M:
            raise ValueError("range must satisfy m <= 0 <= M")

    @property
    def horizon(self) -> int:
        return self.payoffs.shape[0]

    @property
    def d(self) -> int:
        return self.payoffs.shape[1]

    def validate_against(self, action_set: ActionSet) -> None:
        """Check every scalar payoff <x, y_t> lies in the declared range."""
        values = self.payoffs @ action_set.actions.T
        if values.min() < self.m - 1e-12 or values.max() > self.M + 1e-12:
            raise ValueError(
                f"scalar payoffs reach [{values.min()}, {values.max()}], "
                f"outside the declared [{self.m}, {self.M}]"
            )


def design_matrix(action_set: ActionSet, weights) -> np.ndarray:
    """M(pi) = sum_x pi(x) x x^T, a d x d positive-semidefinite matrix."""
    X = action_set.actions
    w = np.asarray(weights, dtype=float)
    return (X * w[:, None]).T @ X


@dataclass(frozen=True)
class DesignDistribution:
    """Exploration design: weights pi, M(pi), and g(pi) = max_x x^T M^{-1} x."""

    weights: np.ndarray
    design: np.ndarray
    gap: float

    def __post_init__(self):
        d = self.design.shape[0]
        if self.gap < d - 1e-9:
            raise ValueError(f"optimality gap {self.gap} below the trace floor {d}")


def _leverage_scores(X: np.ndarray, M: np.ndarray) -> np.ndarray:
    sol = np.linalg.solve(M, X.T)
    return np.einsum("ij,ji->i", X, sol)


def optimal_design(action_set: ActionSet, tol: float = 0.01) -> DesignDistribution:
    """G-optimal exploration design by Frank-Wolfe.

    Starting uniform, each step moves mass lambda = (g/d - 1)/(g - 1) onto
    the action with the worst leverage score g = x^T M(pi)^{-1} x, until
    g(pi) <= d (1 + tol). The trace identity sum_x pi(x) g(x) = d guarantees
    g(pi) >= d, so the loop ends exactly when the design is near-optimal.
    """
    X = action_set.actions
    K, d = X.shape
    w = np.full(K, 1.0 / K)
    for _ in range(10**4):
        M = design_matrix(action_set, w)
        scores = _leverage_scores(X, M)
        j = int(np.argmax(scores))
        g = float(scores[j])
        if g <= d * (1.0 + tol):
            return DesignDistribution(weights=w, design=M, gap=g)
        lam = (g / d - 1.0) / (g - 1.0)
        w *= 1.0 - lam
        w[j] += lam
    raise ArithmeticError(
        f"Frank-Wolfe did not reach g <= {d * (1 + tol):.4f} in 10^4 iterations "
        f"(last g = {g:.6f})"
    )


def linear_estimate(mix_weights, action_set: ActionSet, chosen: int, payoff: float) -> np.ndarray:
    """Least-squares style payoff-vector estimate M(p)^{-1} x_chosen * payoff.

    Unbiased over the draw of the chosen action: averaging the estimates of
    all K outcomes with weights p gives M(p)^{-1} M(p) y = y exactly.
    """
    M = design_matrix(action_set, mix_weights)
    x = action_set.actions[chosen]
    try:
        return np.linalg.solve(M, x * payoff)
    except np.linalg.LinAlgError as exc:
        raise ValueError("design matrix is singular; mix weights must keep "
                         "a spanning support") from exc


def linear_exploration_rate(t: int, d: int, K: int, power_outside: bool = False) -> float:
    """Mixing weight gamma_t = min(1/2, sqrt(2.5 d log(K) t^{-1/2})).

    The printed form keeps t^{-1/2} inside the square root (net decay
    t^{-1/4}); power_outside=True applies it outside instead, matching the
    t^{-1/2} decay the K-armed rate uses at alpha = 1/2.
    """
    if t < 1:
        raise ValueError("rounds are 1-based")
    base = 2.5 * d * math.log(K)
    if power_outside:
        return min(0.5, math.sqrt(base) / math.sqrt(t))
    return min(0.5, math.sqrt(base / math.sqrt(t)))


class LinearAhbPolicy:
    """AdaHedge over the action set with G-optimal extra exploration.

    Round t: p_t = (1 - gamma_t) q_t + gamma_t pi, draw an action from p_t,
    estimate y_t from the observed scalar payoff, and advance the entropic
    engine on the projections <x, y_hat> with the gap taken at the pre-mix
    weights q_t. No warm-up and no centering.
    """

    def __init__(self, action_set: ActionSet, design: DesignDistribution | None = None,
                 power_outside: bool = False):
        self.action_set = action_set
        self.design = design if design is not None else optimal_design(action_set)
        self.power_outside = power_outside
        self.t = 1
        self.engine = HedgeState.fresh(ENTROPIC, action_set.K)
        self._q = np.full(action_set.K, 1.0 / action_set.K)
        self.last_distribution: np.ndarray | None = None
        self.last_gap: float | None = None
        self._awaiting_reward = False

    @property
    def K(self) -> int:
        return self.action_set.K

    def act(self, rng: np.random.Generator) -> int:
        if self._awaiting_reward:
            raise RuntimeError("act called twice without an observe between")
        gamma = linear_exploration_rate(self.t, self.action_set.d, self.K,
                                        self.power_outside)
        p = (1.0 - gamma) * self._q + gamma * self.design.weights
        self.last_distribution = p
        self._awaiting_reward = True
        return categorical(p, rng)

    def observe(self, chosen: int, payoff: float) -> None:
        if not self._awaiting_reward:
            raise RuntimeError("observe called before act")
        y_hat = linear_estimate(self.last_distribution, self.action_set, chosen, payoff)
        z = self.action_set.actions @ y_hat
        eta = self.engine.learning_rate
        gap = entropic_gap(self._q, z, eta)
        self.engine = HedgeState(
            kind=ENTROPIC, S=self.engine.S + z, gap_sum=self.engine.gap_sum + gap
        )
        self._q = self.engine.weights()
        self.last_gap = gap
        self._awaiting_reward = False
        self.t += 1


def linear_ahb_step(policy: LinearAhbPolicy, y_t, rng: np.random.Generator) -> int:
    """Play one round against the payoff vector y_t; returns the chosen index."""
    chosen = policy.act(rng)
    payoff = float(policy.action_set.actions[chosen] @ np.asarray(y_t, dtype=float))
    policy.observe(chosen, payoff)
    return chosen


def linear_problem_from_dict(data: dict) -> tuple[ActionSet, float, float]:
    """Load {"actions": [[...d floats...], ...], "range": [m, M]}."""
    actions = ActionSet(np.asarray(data["actions"], dtype=float))
    m, M = (float(v) for v in data["range"])
    if not m <= 0.0 <= M:
        raise ValueError("range must satisfy m <= 0 <= M")
    return actions, m, M
