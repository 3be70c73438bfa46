"""Arm distributions, bandit problems, reward sequences and run records.

Payoffs are bounded but can live on any unknown range [m, M]; everything
downstream (policies, harness) treats that range as a property of the
problem, never as an input to the learner.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

__all__ = [
    "PointMass",
    "FiniteSupport",
    "TruncatedGaussian",
    "Mixture",
    "ArmDistribution",
    "arm_mean",
    "sample_arm",
    "sample_arm_many",
    "support_range",
    "categorical",
    "BanditProblem",
    "ObliviousSequence",
    "RunRecord",
    "pseudo_regret",
    "scale_arm",
    "scale_problem",
    "arm_to_dict",
    "arm_from_dict",
    "problem_to_dict",
    "problem_from_dict",
    "problem_to_json",
    "problem_from_json",
]

_WEIGHT_TOL = 1e-12


def _norm_cdf(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def _norm_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def categorical(probs, rng: np.random.Generator) -> int:
    """Draw an index from a probability vector using a single uniform.

    Left-to-right accumulation makes the draw a deterministic function of
    (probs, uniform), which is what couples runs across payoff scales.
    """
    u = rng.random()
    acc = 0.0
    i = 0
    for p in probs:
        acc += p
        if u < acc:
            return i
        i += 1
    return i - 1


@dataclass(frozen=True)
class PointMass:
    value: float

    def mean(self) -> float:
        return self.value

    def support(self) -> tuple[float, float]:
        return (self.value, self.value)

    def sample(self, rng: np.random.Generator) -> float:
        return self.value

    def sample_many(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return np.full(n, self.value)


@dataclass(frozen=True)
class FiniteSupport:
    """Discrete distribution on a finite set of real atoms."""

    atoms: tuple[float, ...]
    probs: tuple[float, ...]

    def __post_init__(self):
        if len(self.atoms) != len(self.probs) or not self.atoms:
            raise ValueError("atoms and probs must be equal-length and nonempty")
        if any(p < 0 for p in self.probs):
            raise ValueError("probabilities must be nonnegative")
        if abs(sum(self.probs) - 1.0) > _WEIGHT_TOL:
            raise ValueError("probabilities must sum to 1 within 1e-12")
        object.__setattr__(self, "_cum", np.cumsum(self.probs))

    def mean(self) -> float:
        return float(sum(a * p for a, p in zip(self.atoms, self.probs)))

    def support(self) -> tuple[float, float]:
        live = [a for a, p in zip(self.atoms, self.probs) if p > 0]
        return (min(live), max(live))

    def sample(self, rng: np.random.Generator) -> float:
        u = rng.random()
        idx = int(np.searchsorted(self._cum, u, side="right"))
        if idx >= len(self.atoms):
            idx = len(self.atoms) - 1
        return self.atoms[idx]

    def sample_many(self, n: int, rng: np.random.Generator) -> np.ndarray:
        u = rng.random(n)
        idx = np.searchsorted(self._cum, u, side="right")
        np.clip(idx, 0, len(self.atoms) - 1, out=idx)
        return np.asarray(self.atoms)[idx]


@dataclass(frozen=True)
class TruncatedGaussian:
    """scale * clip(Normal(loc, variance), clip_lo, clip_hi).

    The clip bounds act before scaling, so the support is
    [scale * clip_lo, scale * clip_hi].
    """

    loc: float
    variance: float
    clip_lo: float
    clip_hi: float
    scale: float = 1.0

    def __post_init__(self):
        if self.variance < 0:
            raise ValueError("variance must be nonnegative")
        if not self.clip_lo < self.clip_hi:
            raise ValueError("clip_lo must be strictly below clip_hi")
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    def mean(self) -> float:
        sd = math.sqrt(self.variance)
        if sd == 0.0:
            return self.scale * min(max(self.loc, self.clip_lo), self.clip_hi)
        a = (self.clip_lo - self.loc) / sd
        b = (self.clip_hi - self.loc) / sd
        # E[clip(Y, lo, hi)] for Y ~ N(loc, sd^2), then scaled.
        m = (
            self.clip_lo * _norm_cdf(a)
            + self.clip_hi * (1.0 - _norm_cdf(b))
            + self.loc * (_norm_cdf(b) - _norm_cdf(a))
            + sd * (_norm_pdf(a) - _norm_pdf(b))
        )
        return self.scale * m

    def support(self) -> tuple[float, float]:
        return (self.scale * self.clip_lo, self.scale * self.clip_hi)

    def sample(self, rng: np.random.Generator) -> float:
        y = rng.normal(self.loc, math.sqrt(self.variance))
        if y < self.clip_lo:
            y = self.clip_lo
        elif y > self.clip_hi:
            y = self.clip_hi
        return self.scale * y

    def sample_many(self, n: int, rng: np.random.Generator) -> np.ndarray:
        y = rng.normal(self.loc, math.sqrt(self.variance), size=n)
        np.clip(y, self.clip_lo, self.clip_hi, out=y)
        return self.scale * y


@dataclass(frozen=True)
class Mixture:
    components: tuple
    weights: tuple[float, ...]

    def __post_init__(self):
        if len(self.components) != len(self.weights) or not self.components:
            raise ValueError("components and weights must be equal-length and nonempty")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be nonnegative")
        if abs(sum(self.weights) - 1.0) > _WEIGHT_TOL:
            raise ValueError("weights must sum to 1 within 1e-12")

    def mean(self) -> float:
        return float(sum(w * c.mean() for c, w in zip(self.components, self.weights)))

    def support(self) -> tuple[float, float]:
        lows, highs = zip(*(c.support() for c, w in zip(self.components, self.weights) if w > 0))
        return (min(lows), max(highs))

    def sample(self, rng: np.random.Generator) -> float:
        k = categorical(self.weights, rng)
        return self.components[k].sample(rng)

    def sample_many(self, n: int, rng: np.random.Generator) -> np.ndarray:
        out = np.empty(n)
        for i in range(n):
            out[i] = self.sample(rng)
        return out


ArmDistribution = Union[PointMass, FiniteSupport, TruncatedGaussian, Mixture]


def arm_mean(dist: ArmDistribution) -> float:
    return dist.mean()


def sample_arm(dist: ArmDistribution, rng: np.random.Generator) -> float:
    return dist.sample(rng)


def sample_arm_many(dist: ArmDistribution, n: int, rng: np.random.Generator) -> np.ndarray:
    """Vectorized sampling, distributionally identical to repeated sample_arm."""
    return dist.sample_many(n, rng)


@dataclass(frozen=True)
class BanditProblem:
    """A K-armed stochastic problem with derived means, gaps and range."""

    arms: tuple

    means: tuple[float, ...] = field(init=False)
    best_mean: float = field(init=False)
    gaps: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.arms) < 2:
            raise ValueError("a bandit problem needs at least two arms")
        means = tuple(a.mean() for a in self.arms)
        best = max(means)
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "best_mean", best)
        object.__setattr__(self, "gaps", np.array([best - m for m in means]))

    @property
    def K(self) -> int:
        return len(self.arms)

    def support_range(self) -> tuple[float, float]:
        lows, highs = zip(*(a.support() for a in self.arms))
        return (min(lows), max(highs))


def support_range(problem: BanditProblem) -> tuple[float, float]:
    """Smallest [m, M] covering the support of every arm."""
    return problem.support_range()


def pseudo_regret(problem: BanditProblem, counts) -> float:
    """Sum over arms of gap * pull count."""
    counts = np.asarray(counts)
    if counts.shape != (problem.K,):
        raise ValueError("counts must have one entry per arm")
    return float(problem.gaps @ counts)


@dataclass(frozen=True)
class ObliviousSequence:
    """A fixed T x K reward matrix with a declared payoff range."""

    rewards: np.ndarray
    m: float
    M: float

    def __post_init__(self):
        r = np.asarray(self.rewards, dtype=float)
        if r.ndim != 2 or r.shape[0] < 1:
            raise ValueError("rewards must be a T x K matrix with T >= 1")
        if r.min() < self.m or r.max() > self.M:
            raise ValueError("rewards leave the declared range [m, M]")
        object.__setattr__(self, "rewards", r)

    @property
    def horizon(self) -> int:
        return self.rewards.shape[0]

    @property
    def K(self) -> int:
        return self.rewards.shape[1]


@dataclass(frozen=True)
class RunRecord:
    """What one policy run did: actions, per-arm counts, regret path, seed."""

    seed: int
    actions: np.ndarray
    counts: np.ndarray
    regret_trajectory: np.ndarray

    @classmethod
    def from_actions(cls, seed: int, actions: np.ndarray, problem: BanditProblem) -> "RunRecord":
        actions = np.asarray(actions)
        counts = np.bincount(actions, minlength=problem.K)
        trajectory = np.cumsum(problem.gaps[actions])
        return cls(seed=seed, actions=actions, counts=counts, regret_trajectory=trajectory)

    @property
    def horizon(self) -> int:
        return len(self.actions)

    def final_pseudo_regret(self) -> float:
        return float(self.regret_trajectory[-1])


def scale_arm(dist: ArmDistribution, c: float) -> ArmDistribution:
    """Multiply every payoff of the arm by c > 0."""
    if not c > 0:
        raise ValueError("scale factor must be positive")
    if isinstance(dist, PointMass):
        return PointMass(dist.value * c)
    if isinstance(dist, FiniteSupport):
        return FiniteSupport(tuple(a * c for a in dist.atoms), dist.probs)
    if isinstance(dist, TruncatedGaussian):
        return TruncatedGaussian(dist.loc, dist.variance, dist.clip_lo, dist.clip_hi, dist.scale * c)
    if isinstance(dist, Mixture):
        return Mixture(tuple(scale_arm(comp, c) for comp in dist.components), dist.weights)
    raise TypeError(f"unknown arm distribution {type(dist).__name__}")


def scale_problem(problem: BanditProblem, c: float) -> BanditProblem:
    return BanditProblem(tuple(scale_arm(a, c) for a in problem.arms))


# --- JSON (de)serialization ------------------------------------------------

def arm_to_dict(dist: ArmDistribution) -> dict:
    if isinstance(dist, PointMass):
        return {"kind": "point_mass", "value": dist.value}
    if isinstance(dist, FiniteSupport):
        return {"kind": "finite_support", "atoms": list(dist.atoms), "probs": list(dist.probs)}
    if isinstance(dist, TruncatedGaussian):
        return {
            "kind": "truncated_gaussian",
            "loc": dist.loc,
            "variance": dist.variance,
            "clip": [dist.clip_lo, dist.clip_hi],
            "scale": dist.scale,
        }
    if isinstance(dist, Mixture):
        return {
            "kind": "mixture",
            "components": [arm_to_dict(c) for c in dist.components],
            "weights": list(dist.weights),
        }
    raise TypeError(f"unknown arm distribution {type(dist).__name__}")


def arm_from_dict(d: dict) -> ArmDistribution:
    kind = d.get("kind")
    if kind == "point_mass":
        return PointMass(float(d["value"]))
    if kind == "finite_support":
        return FiniteSupport(tuple(float(a) for a in d["atoms"]), tuple(float(p) for p in d["probs"]))
    if kind == "truncated_gaussian":
        lo, hi = d["clip"]
        return TruncatedGaussian(float(d["loc"]), float(d["variance"]), float(lo), float(hi), float(d.get("scale", 1.0)))
    if kind == "mixture":
        return Mixture(tuple(arm_from_dict(c) for c in d["components"]), tuple(float(w) for w in d["weights"]))
    raise ValueError(f"unknown arm kind {kind!r}")


def problem_to_dict(problem: BanditProblem) -> dict:
    return {"arms": [arm_to_dict(a) for a in problem.arms]}


def problem_from_dict(d: dict) -> BanditProblem:
    return BanditProblem(tuple(arm_from_dict(a) for a in d["arms"]))


def problem_to_json(problem: BanditProblem) -> str:
    return json.dumps(problem_to_dict(problem))


def problem_from_json(s: str) -> BanditProblem:
    return problem_from_dict(json.loads(s))
