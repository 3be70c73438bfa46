"""Lower-bound machinery made runnable.

Information-theoretic trade-offs for scale-free bandits are driven by a
change-of-measure argument: perturb one suboptimal arm with a tiny far-out
atom so it becomes the best arm while staying nearly indistinguishable.
This module provides the KL divergences, the perturbed-problem
constructions, the adversarial/scale-free rate functions, and a numeric
certificate for the resulting pull-count inequality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    ArmDistribution,
    BanditProblem,
    FiniteSupport,
    Mixture,
    PointMass,
    arm_mean,
)

__all__ = [
    "kl_bernoulli",
    "kl_discrete",
    "alternative_problem",
    "kinf_witness",
    "phi_adv",
    "tradeoff_floor",
    "TradeoffCertificate",
    "make_certificate",
    "certificate_check",
]

_ATOM_MERGE_TOL = 1e-12


def kl_bernoulli(p: float, q: float) -> float:
    """KL divergence between Bernoulli(p) and Bernoulli(q).

    Conventions: 0 ln 0 = 0 and x ln(x/0) = +inf for x > 0, so the value
    can be +inf but never NaN.
    """
    if not (0.0 <= p <= 1.0 and 0.0 <= q <= 1.0):
        raise ValueError("arguments must lie in [0, 1]")
    total = 0.0
    for a, b in ((p, q), (1.0 - p, 1.0 - q)):
        if a > 0.0:
            if b <= 0.0:
                return math.inf
            total += a * math.log(a / b)
    return total


def _as_atoms(dist: ArmDistribution) -> tuple[np.ndarray, np.ndarray]:
    """Flatten a purely discrete distribution to (atoms, probs)."""
    if isinstance(dist, PointMass):
        return np.array([dist.value]), np.array([1.0])
    if isinstance(dist, FiniteSupport):
        return np.asarray(dist.atoms, dtype=float), np.asarray(dist.probs, dtype=float)
    if isinstance(dist, Mixture):
        parts = [_as_atoms(c) for c in dist.components]
        atoms = np.concatenate([a for a, _ in parts])
        probs = np.concatenate([p * w for (_, p), w in zip(parts, dist.weights)])
        return atoms, probs
    raise TypeError(f"{type(dist).__name__} has no finite atom decomposition")


def _canonical_atoms(atoms: np.ndarray, probs: np.ndarray):
    """Sort atoms and merge values closer than 1e-12; drop zero-mass atoms."""
    order = np.argsort(atoms)
    atoms, probs = atoms[order], probs[order]
    out_a: list[float] = []
    out_p: list[float] = []
    for a, p in zip(atoms, probs):
        if out_a and a - out_a[-1] <= _ATOM_MERGE_TOL:
            out_p[-1] += p
        else:
            out_a.append(float(a))
            out_p.append(float(p))
    keep = [i for i, p in enumerate(out_p) if p > 0.0]
    return [out_a[i] for i in keep], [out_p[i] for i in keep]


def kl_discrete(nu: ArmDistribution, nu_prime: ArmDistribution) -> float:
    """KL divergence between two finite-support distributions.

    Atoms are merged canonically (within 1e-12) before matching. Any nu-atom
    without nu_prime mass breaks absolute continuity and the value is +inf.
    """
    a1, p1 = _canonical_atoms(*_as_atoms(nu))
    a2, p2 = _canonical_atoms(*_as_atoms(nu_prime))
    lookup = dict(zip(a2, p2))
    total = 0.0
    for a, p in zip(a1, p1):
        q = lookup.get(a)
        if q is None:
            # canonical merge uses an absolute tolerance; rescan for a
            # neighbor within it rather than trusting exact float equality
            for b, pb in lookup.items():
                if abs(a - b) <= _ATOM_MERGE_TOL:
                    q = pb
                    break
        if q is None or q <= 0.0:
            return math.inf
        total += p * math.log(p / q)
    return total


def _exit_atom(mean: float, delta: float, eps: float) -> float:
    return mean + 2.0 * delta / eps


def alternative_problem(problem: BanditProblem, arm: int, eps: float) -> BanditProblem:
    """Perturb one suboptimal arm into the unique best arm.

    nu'_a = (1 - eps) nu_a + eps delta_{mu_a + 2 Delta_a / eps}, which has
    mean mu_a + 2 Delta_a = mu* + Delta_a regardless of eps. All other arms
    are returned untouched (same objects).
    """
    if not 0.0 < eps <= 0.5:
        raise ValueError("eps must lie in (0, 1/2]")
    gap = float(problem.gaps[arm])
    if gap <= 0.0:
        raise ValueError(f"arm {arm} is already optimal; perturbation needs a gap")
    mu = float(problem.means[arm])
    witness = Mixture(
        components=(problem.arms[arm], PointMass(_exit_atom(mu, gap, eps))),
        weights=(1.0 - eps, eps),
    )
    arms = list(problem.arms)
    arms[arm] = witness
    return BanditProblem(arms=tuple(arms))


def kinf_witness(nu: ArmDistribution, target: float, eps: float):
    """Mean-shifted witness with vanishing KL cost.

    Returns (nu', KL(nu, nu')) where nu' = (1-eps) nu + eps delta_x with
    x = mu + 2(target - mu)/eps. The new mean is mu + 2(target - mu), above
    the target, while the KL cost is exactly ln(1/(1-eps)) because the two
    measures differ only by the constant factor 1-eps on nu's support. The
    atom must exit nu's support from above, else eps is rejected.
    """
    if not 0.0 < eps <= 0.5:
        raise ValueError("eps must lie in (0, 1/2]")
    mu = arm_mean(nu)
    if not target > mu:
        raise ValueError("target must exceed the current mean")
    x = _exit_atom(mu, target - mu, eps)
    _, hi = nu.support()
    if not x > hi:
        raise ValueError(
            f"atom {x} does not exit the support (upper end {hi}); decrease eps"
        )
    witness = Mixture(components=(nu, PointMass(x)), weights=(1.0 - eps, eps))
    try:
        kl = kl_discrete(nu, witness)
    except TypeError:
        # continuous nu: density ratio d nu / d nu' = 1/(1-eps) on supp(nu)
        kl = -math.log1p(-eps)
    return witness, kl


def phi_adv(T: int, alpha: float, K: int, range_len: float) -> float:
    """Adversarial regret rate for the mixed-exploration hedge bandit.

    General form (3 + 5/sqrt(1-alpha)) range sqrt(K ln K) T^{max(alpha,1-alpha)}
    + 10 range K ln K; at alpha = 1/2 the sharper printed constant applies:
    7 range sqrt(T K ln K) + 10 range K ln K.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    if T < 0:
        raise ValueError("T must be nonnegative")
    lead = K * math.log(K)
    if alpha == 0.5:
        main = 7.0 * range_len * math.sqrt(T * lead)
    else:
        main = (3.0 + 5.0 / math.sqrt(1.0 - alpha)) * range_len * math.sqrt(lead) \
            * T ** max(alpha, 1.0 - alpha)
    return main + 10.0 * range_len * lead


def tradeoff_floor(problem: BanditProblem, phi_free_at_T: float, T: int) -> float:
    """Stochastic-regret floor forced by a scale-free adversarial guarantee.

    A policy whose adversarial regret is O(Phi_free) cannot beat
    (1/16) sum_a Delta_a T / Phi_free(T) on easy stochastic problems; the
    1/16 is the proof's constant (its internal exploration split is fixed
    at 1/8 and is unrelated to the AHB exponent alpha).
    """
    if not phi_free_at_T > 0.0:
        raise ValueError("phi_free_at_T must be positive")
    return float(problem.gaps.sum()) * T / (16.0 * phi_free_at_T)


@dataclass(frozen=True)
class TradeoffCertificate:
    """Numeric witness of the change-of-measure pull-count inequality.

    lhs = (1 - f) ln(1/(1 - f')) - ln 2 with f, f' the expected pull
    fractions of the perturbed arm under the original and alternative
    problems; rhs = 2 ln 2 eps E_nu[N]. Validity means lhs <= rhs + 1e-9.
    """

    eps: float
    frac_original: float
    frac_alternative: float
    lhs: float
    rhs: float

    def __post_init__(self):
        if not 0.0 < self.eps <= 0.5:
            raise ValueError("eps must lie in (0, 1/2]")
        for f in (self.frac_original, self.frac_alternative):
            if not 0.0 <= f <= 1.0:
                raise ValueError("pull fractions must lie in [0, 1]")

    @property
    def valid(self) -> bool:
        return self.lhs <= self.rhs + 1e-9


def _certificate_sides(eps, frac_original, frac_alternative, pulls_original):
    if frac_alternative >= 1.0:
        lhs = math.inf
    else:
        lhs = -(1.0 - frac_original) * math.log1p(-frac_alternative) - math.log(2.0)
    rhs = 2.0 * math.log(2.0) * eps * pulls_original
    return lhs, rhs


def make_certificate(eps: float, frac_original: float, frac_alternative: float,
                     pulls_original: float) -> TradeoffCertificate:
    """Evaluate both sides of the inequality from simulation estimates."""
    lhs, rhs = _certificate_sides(eps, frac_original, frac_alternative, pulls_original)
    return TradeoffCertificate(
        eps=eps,
        frac_original=frac_original,
        frac_alternative=frac_alternative,
        lhs=lhs,
        rhs=rhs,
    )


def certificate_check(cert: TradeoffCertificate, pulls_nu: float, T: int) -> bool:
    """Re-evaluate the certificate against the given expected pull count."""
    lhs, rhs = _certificate_sides(cert.eps, cert.frac_original,
                                  cert.frac_alternative, pulls_nu)
    return lhs <= rhs + 1e-9
