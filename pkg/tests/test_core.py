"""Arm distributions, problems, run records and the categorical sampler."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from rangeband.core import (
    BanditProblem,
    FiniteSupport,
    Mixture,
    ObliviousSequence,
    PointMass,
    RunRecord,
    TruncatedGaussian,
    arm_from_dict,
    arm_mean,
    arm_to_dict,
    categorical,
    problem_from_json,
    problem_to_json,
    pseudo_regret,
    sample_arm,
    sample_arm_many,
    scale_arm,
    scale_problem,
    support_range,
)


class _FixedUniform:
    """Minimal rng stub: hands out preset uniforms."""

    def __init__(self, values):
        self._values = list(values)

    def random(self):
        return self._values.pop(0)


class TestPointMass:
    def test_mean_support_sample(self):
        arm = PointMass(0.7)
        assert arm.mean() == 0.7
        assert arm.support() == (0.7, 0.7)
        rng = np.random.default_rng(42)
        assert sample_arm(arm, rng) == 0.7
        assert_allclose(sample_arm_many(arm, 5, rng), np.full(5, 0.7))


class TestFiniteSupport:
    def test_mean_and_support(self):
        arm = FiniteSupport((0.0, 0.5, 1.0), (0.25, 0.5, 0.25))
        assert_allclose(arm.mean(), 0.5)
        assert arm.support() == (0.0, 1.0)

    def test_support_ignores_zero_mass_atoms(self):
        arm = FiniteSupport((0.0, 0.5, 9.0), (0.5, 0.5, 0.0))
        assert arm.support() == (0.0, 0.5)

    def test_validation(self):
        with pytest.raises(ValueError):
            FiniteSupport((0.0, 1.0), (0.6, 0.6))
        with pytest.raises(ValueError):
            FiniteSupport((0.0, 1.0), (-0.1, 1.1))
        with pytest.raises(ValueError):
            FiniteSupport((), ())

    def test_sampling_frequencies(self):
        arm = FiniteSupport((0.0, 1.0, 2.0), (0.2, 0.5, 0.3))
        rng = np.random.default_rng(42)
        draws = sample_arm_many(arm, 200_000, rng)
        for atom, p in zip(arm.atoms, arm.probs):
            freq = np.mean(draws == atom)
            # 4 standard errors of a Bernoulli(p) frequency estimate
            assert abs(freq - p) < 4 * math.sqrt(p * (1 - p) / 200_000)

    def test_sample_matches_sample_many_stream(self):
        arm = FiniteSupport((0.0, 1.0), (0.5, 0.5))
        one_by_one = np.array(
            [arm.sample(np.random.default_rng(s)) for s in range(8)]
        )
        batched = np.array(
            [arm.sample_many(1, np.random.default_rng(s))[0] for s in range(8)]
        )
        assert_allclose(one_by_one, batched)


class TestTruncatedGaussian:
    def test_symmetric_clip_keeps_the_mean(self):
        # Clip bounds equidistant from loc: E[clip] = loc exactly by symmetry.
        arm = TruncatedGaussian(0.6, 0.25, 0.0, 1.2)
        assert_allclose(arm.mean(), 0.6, atol=1e-15)
        arm = TruncatedGaussian(0.5, 0.25, 0.0, 1.0)
        assert_allclose(arm.mean(), 0.5, atol=1e-15)

    def test_mean_against_monte_carlo(self):
        # Asymmetric clip: check the closed form against raw simulation.
        arm = TruncatedGaussian(0.3, 0.04, 0.0, 1.0)
        rng = np.random.default_rng(42)
        draws = arm.sample_many(400_000, rng)
        se = draws.std(ddof=1) / math.sqrt(len(draws))
        assert abs(arm.mean() - draws.mean()) < 4 * se

    def test_zero_variance_degenerates_to_clipped_point(self):
        assert TruncatedGaussian(1.7, 0.0, 0.0, 1.2).mean() == 1.2
        assert TruncatedGaussian(-0.4, 0.0, 0.0, 1.2).mean() == 0.0

    def test_scale_applies_after_clipping(self):
        arm = TruncatedGaussian(0.6, 0.25, 0.0, 1.2, scale=10.0)
        assert arm.support() == (0.0, 12.0)
        assert_allclose(arm.mean(), 6.0, atol=1e-14)
        rng = np.random.default_rng(42)
        draws = arm.sample_many(1000, rng)
        assert draws.min() >= 0.0 and draws.max() <= 12.0

    def test_sample_is_scale_covariant(self):
        base = TruncatedGaussian(0.6, 0.25, 0.0, 1.2)
        scaled = scale_arm(base, 0.01)
        a = base.sample_many(64, np.random.default_rng(7))
        b = scaled.sample_many(64, np.random.default_rng(7))
        assert_allclose(b, 0.01 * a, rtol=0, atol=0)

    def test_validation(self):
        with pytest.raises(ValueError):
            TruncatedGaussian(0.5, -1.0, 0.0, 1.0)
        with pytest.raises(ValueError):
            TruncatedGaussian(0.5, 1.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            TruncatedGaussian(0.5, 1.0, 0.0, 1.0, scale=0.0)


class TestMixture:
    def test_mean_is_weighted_average(self):
        mix = Mixture((PointMass(0.0), PointMass(1.0)), (0.25, 0.75))
        assert_allclose(mix.mean(), 0.75)

    def test_support_is_the_hull_of_live_components(self):
        mix = Mixture(
            (PointMass(0.5), PointMass(2.5), PointMass(-9.0)),
            (0.9, 0.1, 0.0),
        )
        assert mix.support() == (0.5, 2.5)

    def test_component_frequencies(self):
        mix = Mixture((PointMass(0.0), PointMass(1.0)), (0.9, 0.1))
        rng = np.random.default_rng(42)
        draws = mix.sample_many(100_000, rng)
        assert abs(draws.mean() - 0.1) < 4 * math.sqrt(0.09 / 100_000)

    def test_validation(self):
        with pytest.raises(ValueError):
            Mixture((PointMass(0.0),), (0.5,))
        with pytest.raises(ValueError):
            Mixture((PointMass(0.0), PointMass(1.0)), (0.7,))


class TestCategorical:
    def test_left_to_right_accumulation(self):
        probs = (0.2, 0.5, 0.3)
        assert categorical(probs, _FixedUniform([0.1])) == 0
        assert categorical(probs, _FixedUniform([0.2])) == 1
        assert categorical(probs, _FixedUniform([0.69])) == 1
        assert categorical(probs, _FixedUniform([0.7])) == 2
        assert categorical(probs, _FixedUniform([0.999])) == 2

    def test_accumulated_shortfall_returns_last_index(self):
        # If rounding leaves the running sum a hair under 1, fall back to
        # the final index instead of walking off the end.
        probs = (0.3, 0.3, 0.4 - 1e-12)
        assert categorical(probs, _FixedUniform([1.0 - 1e-13])) == 2

    def test_frequencies(self):
        probs = np.array([0.1, 0.2, 0.3, 0.4])
        rng = np.random.default_rng(42)
        draws = np.array([categorical(probs, rng) for _ in range(100_000)])
        for i, p in enumerate(probs):
            freq = np.mean(draws == i)
            assert abs(freq - p) < 4 * math.sqrt(p * (1 - p) / 100_000)

    @given(
        st.lists(st.floats(min_value=1e-3, max_value=1.0), min_size=1, max_size=8),
        st.floats(min_value=0.0, max_value=1.0, exclude_max=True),
    )
    @settings(max_examples=200, deadline=None)
    def test_index_matches_cumsum_cell(self, raw, u):
        probs = np.asarray(raw) / np.sum(raw)
        idx = categorical(probs, _FixedUniform([u]))
        cum = np.cumsum(probs)
        lo = 0.0 if idx == 0 else cum[idx - 1]
        assert lo <= u < cum[idx] or (idx == len(probs) - 1 and u >= lo)


class TestBanditProblem:
    def test_derived_fields(self):
        problem = BanditProblem((PointMass(0.6), PointMass(0.5), PointMass(0.1)))
        assert problem.K == 3
        assert problem.means == (0.6, 0.5, 0.1)
        assert problem.best_mean == 0.6
        assert_allclose(problem.gaps, [0.0, 0.1, 0.5])

    def test_needs_two_arms(self):
        with pytest.raises(ValueError):
            BanditProblem((PointMass(0.5),))

    def test_support_range_is_the_hull(self):
        problem = BanditProblem(
            (FiniteSupport((-1.0, 0.5), (0.5, 0.5)), PointMass(2.0))
        )
        assert support_range(problem) == (-1.0, 2.0)

    def test_pseudo_regret(self):
        problem = BanditProblem((PointMass(0.6), PointMass(0.5)))
        assert_allclose(pseudo_regret(problem, [3, 7]), 0.7)
        with pytest.raises(ValueError):
            pseudo_regret(problem, [1, 2, 3])

    def test_identical_arms_have_zero_regret(self):
        # The smallest range-degenerate problem: both arms the same object.
        arm = PointMass(0.4)
        problem = BanditProblem((arm, arm))
        assert pseudo_regret(problem, [100, 23]) == 0.0


class TestObliviousSequence:
    def test_shape_and_range_validation(self):
        seq = ObliviousSequence(np.array([[0.1, 0.9], [0.5, 0.2]]), 0.0, 1.0)
        assert seq.horizon == 2 and seq.K == 2
        with pytest.raises(ValueError):
            ObliviousSequence(np.array([0.1, 0.9]), 0.0, 1.0)
        with pytest.raises(ValueError):
            ObliviousSequence(np.array([[0.1, 1.5]]), 0.0, 1.0)


class TestRunRecord:
    def test_from_actions(self):
        problem = BanditProblem((PointMass(0.6), PointMass(0.5), PointMass(0.0)))
        actions = np.array([0, 1, 1, 2, 0])
        rec = RunRecord.from_actions(seed=7, actions=actions, problem=problem)
        assert_allclose(rec.counts, [2, 2, 1])
        assert_allclose(rec.regret_trajectory, [0.0, 0.1, 0.2, 0.8, 0.8])
        assert rec.final_pseudo_regret() == pseudo_regret(problem, rec.counts)
        assert rec.horizon == 5

    def test_unplayed_trailing_arm_still_counted(self):
        problem = BanditProblem((PointMass(0.6), PointMass(0.5), PointMass(0.0)))
        rec = RunRecord.from_actions(0, np.array([0, 0]), problem)
        assert rec.counts.shape == (3,)
        assert rec.counts[2] == 0


class TestScaling:
    def test_scale_arm_multiplies_means(self):
        arms = [
            PointMass(0.3),
            FiniteSupport((0.0, 1.0), (0.4, 0.6)),
            TruncatedGaussian(0.5, 0.04, 0.0, 1.0),
            Mixture((PointMass(0.2), PointMass(0.8)), (0.5, 0.5)),
        ]
        for arm in arms:
            assert_allclose(arm_mean(scale_arm(arm, 10.0)), 10.0 * arm_mean(arm),
                            rtol=1e-14)
            lo, hi = arm.support()
            slo, shi = scale_arm(arm, 10.0).support()
            assert_allclose((slo, shi), (10.0 * lo, 10.0 * hi), rtol=1e-14)

    def test_scale_must_be_positive(self):
        with pytest.raises(ValueError):
            scale_arm(PointMass(1.0), 0.0)
        with pytest.raises(ValueError):
            scale_arm(PointMass(1.0), -2.0)

    def test_scale_problem_scales_gaps(self):
        problem = BanditProblem((PointMass(0.6), PointMass(0.5)))
        scaled = scale_problem(problem, 0.01)
        assert_allclose(scaled.gaps, 0.01 * problem.gaps, rtol=1e-14)

    @given(
        st.lists(st.floats(min_value=-5, max_value=5), min_size=1, max_size=5),
        st.floats(min_value=1e-2, max_value=1e2),
    )
    @settings(max_examples=100, deadline=None)
    def test_finite_support_mean_multiplicative(self, atoms, c):
        n = len(atoms)
        arm = FiniteSupport(tuple(atoms), tuple([1.0 / n] * n))
        assert_allclose(arm_mean(scale_arm(arm, c)), c * arm_mean(arm),
                        rtol=1e-12, atol=1e-12)


class TestSerialization:
    def test_round_trip_preserves_means_exactly(self):
        problem = BanditProblem(
            (
                TruncatedGaussian(0.6, 0.25, 0.0, 1.2, scale=2.0),
                Mixture(
                    (FiniteSupport((0.0, 0.5), (0.5, 0.5)), PointMass(2.5)),
                    (0.9, 0.1),
                ),
            )
        )
        back = problem_from_json(problem_to_json(problem))
        assert back.means == problem.means
        assert back.support_range() == problem.support_range()
        assert back.arms == problem.arms

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            arm_from_dict({"kind": "cauchy", "loc": 0.0})

    def test_arm_dict_shapes(self):
        d = arm_to_dict(TruncatedGaussian(0.5, 0.01, 0.0, 1.0))
        assert d["kind"] == "truncated_gaussian"
        assert d["clip"] == [0.0, 1.0]
        assert arm_from_dict(d) == TruncatedGaussian(0.5, 0.01, 0.0, 1.0)
