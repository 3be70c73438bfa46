"""UCB-family baselines, follow-the-leader and the uniform policy."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from rangeband.baselines import (
    FtlPolicy,
    InflatedUcbPolicy,
    RandomPolicy,
    RangeUcbPolicy,
    UcbBookkeeping,
    UcbPolicy,
    baseline_act,
    inflated_ucb_index,
    range_ucb_index,
    ucb_index,
)

UCB_INDEX_EXAMPLE = 2.1286737018596268315  # mean 0.5, N 10, T 10000, sigma 1


def _drive(policy, rewards, rng):
    actions = []
    for row in rewards:
        arm = policy.act(rng)
        policy.observe(arm, row[arm])
        actions.append(arm)
    return np.array(actions)


class TestIndices:
    def test_ucb_frozen_example(self):
        assert_allclose(ucb_index(0.5, 10, 10_000, 1.0), UCB_INDEX_EXAMPLE, rtol=1e-14)

    def test_ucb_zero_sigma_is_greedy(self):
        assert ucb_index(0.4, 3, 100, 0.0) == 0.4

    def test_ucb_bonus_linear_in_sigma(self):
        b1 = ucb_index(0.0, 4, 100, 1.0)
        b2 = ucb_index(0.0, 4, 100, 2.0)
        assert_allclose(b2, 2.0 * b1, rtol=1e-14)

    def test_ucb_vectorized(self):
        means = np.array([0.1, 0.2])
        counts = np.array([4, 16])
        idx = ucb_index(means, counts, 100, 1.0)
        assert idx.shape == (2,)
        assert idx[0] > idx[1]  # fewer pulls, bigger bonus

    def test_range_ucb_zero_range_is_greedy(self):
        assert range_ucb_index(0.7, 5, 100, 0.0) == 0.7

    def test_range_ucb_uses_the_range_as_scale(self):
        assert_allclose(
            range_ucb_index(0.0, 16, 1000, 0.8),
            0.8 * math.sqrt(2 * math.log(1000) / 16),
            rtol=1e-14,
        )

    def test_range_ucb_matches_known_scale_form(self):
        # An estimated range of 1.2 reproduces the sigma = 1 known-scale
        # index (the 1.2 factor migrates into the range estimate).
        assert_allclose(
            range_ucb_index(0.5, 10, 10_000, 1.2), UCB_INDEX_EXAMPLE, rtol=1e-14
        )

    def test_inflated_default_bonus(self):
        # phi(t) = (log t)^2: at t = e^2 the bonus over one pull is 2.
        t = math.exp(2)
        assert_allclose(inflated_ucb_index(0.0, 1, t), 2.0, rtol=1e-12)

    def test_inflated_custom_phi(self):
        assert_allclose(inflated_ucb_index(0.5, 4, 10, phi=lambda t: 16.0), 2.5)


class TestBookkeeping:
    def test_counts_sums_and_range(self):
        stats = UcbBookkeeping(2, horizon=100)
        assert stats.observed_range == 0.0
        for arm, reward in ((0, 0.1), (1, 0.9), (0, 0.4)):
            stats.record(arm, reward)
        assert_allclose(stats.counts, [2, 1])
        assert_allclose(stats.sums, [0.5, 0.9])
        assert_allclose(stats.means, [0.25, 0.9])
        assert_allclose(stats.observed_range, 0.8)

    def test_means_match_brute_force_recount(self):
        rng = np.random.default_rng(42)
        stats = UcbBookkeeping(3, horizon=50)
        log = []
        for _ in range(50):
            arm = int(rng.integers(3))
            reward = float(rng.uniform(-1, 1))
            stats.record(arm, reward)
            log.append((arm, reward))
        for arm in range(3):
            seen = [r for a, r in log if a == arm]
            assert_allclose(stats.means[arm], np.mean(seen), rtol=1e-12)


class TestForcedInitialization:
    @pytest.mark.parametrize(
        "policy",
        [
            UcbPolicy(5, sigma=1.0, horizon=100),
            RangeUcbPolicy(5, horizon=100),
            InflatedUcbPolicy(5, horizon=100),
            FtlPolicy(5, horizon=100),
        ],
    )
    def test_first_k_rounds_sweep_the_arms(self, policy):
        rng = np.random.default_rng(42)
        for expected in range(5):
            arm = policy.act(rng)
            assert arm == expected
            policy.observe(arm, 0.0)


class TestUcbPolicy:
    def test_prefers_under_sampled_arms(self):
        policy = UcbPolicy(2, sigma=1.0, horizon=100)
        rng = np.random.default_rng(42)
        # Equal means; arm 1 then gets extra pulls, so arm 0's bonus wins.
        for arm, reward in ((0, 0.5), (1, 0.5)):
            assert policy.act(rng) == arm
            policy.observe(arm, reward)
        policy.observe(policy.act(rng), 0.5)  # t=3 tie: lowest index, arm 0
        policy.observe(policy.act(rng), 0.5)
        counts = policy.stats.counts.copy()
        arm = policy.act(rng)
        assert counts[arm] == counts.min()

    def test_ties_break_to_the_lowest_arm(self):
        policy = UcbPolicy(3, sigma=0.0, horizon=100)
        rng = np.random.default_rng(42)
        for arm in range(3):
            policy.observe(policy.act(rng), 0.4)
        assert policy.act(rng) == 0

    def test_scale_equivariant_with_scaled_sigma(self):
        rng = np.random.default_rng(42)
        Y = rng.uniform(0.0, 1.0, size=(400, 3))
        base = _drive(UcbPolicy(3, sigma=0.3, horizon=400), Y,
                      np.random.default_rng(7))
        scaled = _drive(UcbPolicy(3, sigma=0.3 * 0.01, horizon=400), 0.01 * Y,
                        np.random.default_rng(7))
        assert np.array_equal(base, scaled)


class TestRangeUcbPolicy:
    def test_affine_equivariant(self):
        rng = np.random.default_rng(42)
        Y = rng.uniform(0.0, 1.0, size=(400, 3))
        for c, b in ((0.01, 0.0), (10.0, -3.0)):
            base = _drive(RangeUcbPolicy(3, horizon=400), Y,
                          np.random.default_rng(7))
            moved = _drive(RangeUcbPolicy(3, horizon=400), c * Y + b,
                           np.random.default_rng(7))
            assert np.array_equal(base, moved)

    def test_degenerate_history_is_greedy(self):
        policy = RangeUcbPolicy(2, horizon=50)
        rng = np.random.default_rng(42)
        # All payoffs equal: range 0, greedy tie goes to arm 0.
        for _ in range(6):
            arm = policy.act(rng)
            policy.observe(arm, 0.3)
        assert policy.stats.observed_range == 0.0
        assert policy.act(rng) == 0


class TestInflatedUcbPolicy:
    def test_bonus_uses_the_current_round(self):
        policy = InflatedUcbPolicy(2, horizon=10_000, phi=lambda t: float(t * t))
        rng = np.random.default_rng(42)
        for arm, reward in ((0, 1.0), (1, 0.0)):
            assert policy.act(rng) == arm
            policy.observe(arm, reward)
        # t = 3: indices are 1 + sqrt(9) vs 0 + sqrt(9); arm 0 wins the tie.
        assert policy.act(rng) == 0
        policy.observe(0, 1.0)
        # t = 4: arm 1's bonus sqrt(16/1) = 4 beats arm 0's 1 + sqrt(16/2).
        assert policy.act(rng) == 1

    def test_scale_free_action_sequences(self):
        rng = np.random.default_rng(42)
        Y = rng.uniform(0.0, 1.0, size=(300, 3))
        base = _drive(InflatedUcbPolicy(3, horizon=300), Y,
                      np.random.default_rng(7))
        # The inflated bonus ignores scale entirely, so sequences drift
        # once the payoff scale changes - only the forced sweep matches.
        moved = _drive(InflatedUcbPolicy(3, horizon=300), 0.01 * Y,
                       np.random.default_rng(7))
        assert np.array_equal(base[:3], moved[:3])


class TestFtlPolicy:
    def test_follows_the_empirical_leader(self):
        policy = FtlPolicy(2, horizon=100)
        rng = np.random.default_rng(42)
        for arm, reward in ((0, 0.2), (1, 0.9)):
            assert policy.act(rng) == arm
            policy.observe(arm, reward)
        assert policy.act(rng) == 1

    def test_affine_equivariant(self):
        rng = np.random.default_rng(42)
        Y = rng.uniform(0.0, 1.0, size=(400, 3))
        base = _drive(FtlPolicy(3, horizon=400), Y, np.random.default_rng(7))
        moved = _drive(FtlPolicy(3, horizon=400), 5.0 * Y - 2.0,
                       np.random.default_rng(7))
        assert np.array_equal(base, moved)


class TestRandomPolicy:
    def test_uniform_frequencies(self):
        policy = RandomPolicy(4)
        rng = np.random.default_rng(42)
        draws = np.empty(1_000_000, dtype=np.int64)
        for i in range(len(draws)):
            arm = policy.act(rng)
            policy.observe(arm, 0.0)
            draws[i] = arm
        counts = np.bincount(draws, minlength=4)
        # 4 standard errors around the uniform expectation
        se = math.sqrt(0.25 * 0.75 * len(draws))
        for c in counts:
            assert abs(c - 250_000) < 4 * se

    def test_uniform_distribution_reported(self):
        policy = RandomPolicy(5)
        rng = np.random.default_rng(42)
        policy.act(rng)
        assert_allclose(policy.last_distribution, np.full(5, 0.2))


class TestBaselineAct:
    def test_accepts_baselines_only(self):
        rng = np.random.default_rng(42)
        arm = baseline_act(RandomPolicy(3), rng)
        assert 0 <= arm < 3
        from rangeband.policies import AhbPolicy

        with pytest.raises(TypeError):
            baseline_act(AhbPolicy(3), rng)
