"""Adaptive follow-the-regularized-leader engines over the simplex.

Two regularizers are supported: negative entropy (AdaHedge) and 1/2-Tsallis
entropy. Both tune the learning rate from accumulated mixability gaps,
eta_t = D_F / sum of past gaps, with eta = +inf while that sum is zero.

Engines maximize cumulative payoff: weights concentrate on coordinates with
the LARGEST cumulative score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ENTROPIC",
    "TSALLIS",
    "HedgeState",
    "diameter",
    "adahedge_weights",
    "entropic_gap",
    "solve_normalizer",
    "tsallis_weights",
    "tsallis_gap",
    "engine_advance",
]

ENTROPIC = "entropic"
TSALLIS = "tsallis"

_RESIDUAL_TOL = 1e-12


def diameter(kind: str, K: int) -> float:
    """Regularizer range D_F over the K-simplex."""
    if kind == ENTROPIC:
        return math.log(K)
    if kind == TSALLIS:
        return 2.0 * (math.sqrt(K) - 1.0)
    raise ValueError(f"unknown engine kind {kind!r}")


def _uniform_over_argmax(scores: np.ndarray) -> np.ndarray:
    top = scores == scores.max()
    return top / top.sum()


def _entropic_weights(scores: np.ndarray, eta: float) -> np.ndarray:
    if math.isinf(eta):
        return _uniform_over_argmax(scores)
    w = np.exp((scores - scores.max()) * eta)
    return w / w.sum()


def _tsallis_weights(scores: np.ndarray, eta: float, x0: float | None = None) -> np.ndarray:
    if math.isinf(eta):
        return _uniform_over_argmax(scores)
    zeta = eta * scores
    zs = zeta - zeta.max()
    c = _normalizer_shifted(zs, x0=x0)
    w = 1.0 / (c - zs)
    w *= w
    return w / w.sum()


def adahedge_weights(state: "HedgeState") -> np.ndarray:
    """Entropic FTRL weights: softmax of eta * S (max-shifted).

    At eta = +inf (zero accumulated gap) the limit is the uniform
    distribution over the argmax set of S, ties sharing mass equally.
    """
    if state.kind != ENTROPIC:
        raise ValueError("adahedge_weights needs an entropic state")
    return _entropic_weights(np.asarray(state.S, dtype=float), state.learning_rate)


def entropic_gap(weights, payoffs, eta: float) -> float:
    """Mixability gap of the entropic regularizer.

    delta = -<w, z> + log(sum_a w_a exp(eta z_a)) / eta, computed with a
    max shift over the support of w; the eta = +inf form is max z - <w, z>.
    Nonnegative by convexity; tiny negative rounding is clamped to 0.
    """
    w = np.asarray(weights, dtype=float)
    z = np.asarray(payoffs, dtype=float)
    mean = float(w @ z)
    if math.isinf(eta):
        d = float(z.max()) - mean
    else:
        mask = w > 0
        zm = z[mask] if not mask.all() else z
        wm = w[mask] if not mask.all() else w
        s = float(zm.max())
        d = s - mean + math.log(float(np.exp((zm - s) * eta) @ wm)) / eta
    return d if d > 0.0 else 0.0


def _normalizer_shifted(y: np.ndarray, x0: float | None = None) -> float:
    """Root c in (1, sqrt(K)] of sum_a (c - y_a)^{-2} = 1 for y with max 0.

    The map is strictly decreasing and convex, so Newton started left of the
    root (c = 1 always is: the argmax term alone contributes 1) increases
    monotonically; a bisection bracket guards against rounding overshoot.
    A final polish step drives the residual to machine level.
    """
    hi = math.sqrt(len(y)) + 1e-12
    c = 1.0
    a, b = 1.0 - 1e-12, hi
    if x0 is not None and a < x0 < b:
        c = x0
    for _ in range(200):
        r = 1.0 / (c - y)
        f = float(r @ r) - 1.0
        fprime = -2.0 * float(r @ (r * r))
        if abs(f) <= _RESIDUAL_TOL:
            polished = c - f / fprime
            return polished if a < polished < b else c
        if f > 0.0:
            a = c
        else:
            b = c
        step = c - f / fprime
        c = step if a < step < b else 0.5 * (a + b)
    raise ArithmeticError(f"normalizer solve stalled at residual {f:.3e}")


def solve_normalizer(z, x0: float | None = None) -> float:
    """Root c > max(z) of sum_a (c - z_a)^{-2} = 1, residual <= 1e-12.

    Solved on max-shifted values (the root lies in (max z + 1,
    max z + sqrt(K)]) so the residual tolerance holds regardless of the
    magnitude of z. An optional warm start x0 speeds up repeated solves on
    slowly drifting inputs.
    """
    z = np.asarray(z, dtype=float)
    if not np.isfinite(z).all():
        raise ValueError("normalizer input must be finite")
    zmax = float(z.max())
    if x0 is not None:
        x0 -= zmax
    return zmax + _normalizer_shifted(z - zmax, x0=x0)


def tsallis_weights(state: "HedgeState") -> np.ndarray:
    """1/2-Tsallis FTRL weights p_a = (c - eta*S_a)^{-2}.

    c is the normalizing root from solve_normalizer on eta * S. At
    eta = +inf the limit is uniform over the argmax set. The returned vector
    is renormalized so it sums to 1 exactly up to float addition.
    """
    if state.kind != TSALLIS:
        raise ValueError("tsallis_weights needs a Tsallis state")
    return _tsallis_weights(np.asarray(state.S, dtype=float), state.learning_rate)


def tsallis_gap(weights, payoffs, eta: float) -> float:
    """Generalized mixability gap of the 1/2-Tsallis regularizer.

    With H(p) = -2 sum sqrt(p_a), the inner maximization over the simplex of
    <p, grad H(w) + eta z> - H(p) has the same closed form as the weights,
    so the gap is exact up to the normalizer solve:

        delta = -<w, z> + ( max-value - sum_a sqrt(w_a) ) / eta.

    The eta = +inf form is max z - <w, z>.
    """
    w = np.asarray(weights, dtype=float)
    z = np.asarray(payoffs, dtype=float)
    if z.max() == z.min():
        return 0.0  # constant payoffs: zero gap for any regularizer
    mean = float(w @ z)
    if math.isinf(eta):
        d = float(z.max()) - mean
    else:
        grad = -1.0 / np.sqrt(np.maximum(w, 1e-320))
        u = grad + eta * z
        umax = float(u.max())
        us = u - umax
        c = _normalizer_shifted(us)
        p = 1.0 / (c - us)
        p *= p
        best = float(p @ us) + umax * float(p.sum()) + 2.0 * float(np.sqrt(p).sum())
        d = (best - float(np.sqrt(w).sum())) / eta - mean
    return d if d > 0.0 else 0.0


@dataclass(frozen=True)
class HedgeState:
    """Cumulative scores S, cumulative gap G and the regularizer kind."""

    kind: str
    S: np.ndarray
    gap_sum: float

    @classmethod
    def fresh(cls, kind: str, K: int) -> "HedgeState":
        if kind not in (ENTROPIC, TSALLIS):
            raise ValueError(f"unknown engine kind {kind!r}")
        if K < 1:
            raise ValueError("need at least one coordinate")
        return cls(kind=kind, S=np.zeros(K), gap_sum=0.0)

    @property
    def K(self) -> int:
        return len(self.S)

    @property
    def D_F(self) -> float:
        return diameter(self.kind, self.K)

    @property
    def learning_rate(self) -> float:
        return self.D_F / self.gap_sum if self.gap_sum > 0.0 else math.inf

    def weights(self) -> np.ndarray:
        eta = self.learning_rate
        if self.kind == ENTROPIC:
            return _entropic_weights(self.S, eta)
        return _tsallis_weights(self.S, eta)


def engine_advance(state: HedgeState, payoffs) -> HedgeState:
    """One engine round: gap at the current learning rate, then accumulate.

    Pure function: weights and the gap are taken at the state's current eta,
    after which the payoff vector joins S and the gap joins G (so the next
    learning rate is D_F / new G).
    """
    z = np.asarray(payoffs, dtype=float)
    eta = state.learning_rate
    w = state.weights()
    if state.kind == ENTROPIC:
        d = entropic_gap(w, z, eta)
    else:
        d = tsallis_gap(w, z, eta)
    return HedgeState(kind=state.kind, S=state.S + z, gap_sum=state.gap_sum + d)
