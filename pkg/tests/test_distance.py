import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphon_sba import (
    FULL,
    ContractError,
    DomainError,
    FormulaGraphon,
    GraphSampleSet,
    NeighborhoodPolicy,
    SliceDistanceKernel,
    estimate_distance,
    exact_distance,
    reference_blockmodel,
    sample_graphs,
    sample_labels,
    slice_products,
)
from graphon_sba.distance import quadrature_distance
from graphon_sba.graphon import constant_graphon, random_blockmodel

from conftest import constant_samples
from oracles import brute_force_distance, quadrature_slice_distance, step_function

W = reference_blockmodel()

# exact piecewise-constant integration for blocks 1 and 2 of W:
# rows (.8,.9,.4,.5) vs (.1,.6,.3,.2): diffs .7,.3,.1,.3 -> .68/4 = .17
# cols (.8,.1,.3,.4) vs (.9,.6,.2,.1): diffs .1,.5,.1,.3 -> .36/4 = .09
D12 = 0.5 * (0.17 + 0.09)


def random_sample_set(rng, n, two_t):
    obs = rng.integers(0, 2, size=(two_t, n, n))
    return GraphSampleSet(rng.random(n), obs)


class TestSliceProducts:
    def test_all_ones(self):
        assert slice_products(constant_samples(1), 0, 1, 2) == (1.0, 1.0)

    def test_all_zeros(self):
        assert slice_products(constant_samples(0), 0, 1, 2) == (0.0, 0.0)

    def test_substitution(self):
        obs = np.zeros((2, 3, 3), dtype=np.uint8)
        obs[0, 0, 2] = 1  # G1[i, k]
        s = GraphSampleSet(np.zeros(3), obs)
        assert slice_products(s, 0, 1, 2)[0] == 0.0
        obs[1, 1, 2] = 1  # G2[j, k]
        s = GraphSampleSet(np.zeros(3), obs)
        assert slice_products(s, 0, 1, 2)[0] == 1.0

    def test_column_uses_transposed_entries(self):
        obs = np.zeros((2, 3, 3), dtype=np.uint8)
        obs[0, 2, 0] = 1
        obs[1, 2, 1] = 1
        r, c = slice_products(GraphSampleSet(np.zeros(3), obs), 0, 1, 2)
        assert (r, c) == (0.0, 1.0)

    def test_non_distinct(self):
        with pytest.raises(ContractError):
            slice_products(constant_samples(1), 0, 0, 2)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32), st.sampled_from([2, 4, 6]))
    def test_range(self, seed, two_t):
        s = random_sample_set(np.random.default_rng(seed), 5, two_t)
        r, c = slice_products(s, 0, 1, 2)
        assert 0.0 <= r <= 1.0 and 0.0 <= c <= 1.0


class TestEstimateDistance:
    def test_all_ones_is_zero(self):
        s = constant_samples(1, n=7)
        for i, j in [(0, 1), (3, 6)]:
            assert estimate_distance(s, i, j) == 0.0

    def test_hand_built_n4(self):
        obs = np.array(
            [
                [[1, 0, 1, 1], [0, 1, 1, 0], [1, 1, 0, 0], [0, 1, 0, 1]],
                [[0, 1, 1, 0], [1, 1, 0, 1], [0, 0, 1, 1], [1, 0, 1, 0]],
            ]
        )
        s = GraphSampleSet(np.zeros(4), obs)
        for i in range(4):
            for j in range(4):
                if i != j:
                    assert estimate_distance(s, i, j) == brute_force_distance(obs, i, j)
        # by hand for (0, 1): k=2 -> rows (1-1)(1-0)=0, cols (1-1)(0-0)=0
        #                     k=3 -> rows (1-0)(0-1)=-1, cols (0-1)(1-0)=-1
        assert estimate_distance(s, 0, 1) == 0.5 * (-2 / 2)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32), st.integers(3, 8), st.sampled_from([2, 4]))
    def test_brute_force_bit_equal(self, seed, n, two_t):
        rng = np.random.default_rng(seed)
        s = random_sample_set(rng, n, two_t)
        i, j = rng.choice(n, 2, replace=False)
        assert estimate_distance(s, int(i), int(j)) == brute_force_distance(s.observations, i, j)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32), st.integers(3, 10), st.sampled_from([2, 4, 6]))
    def test_symmetry(self, seed, n, two_t):
        rng = np.random.default_rng(seed)
        s = random_sample_set(rng, n, two_t)
        i, j = (int(v) for v in rng.choice(n, 2, replace=False))
        assert estimate_distance(s, i, j) == estimate_distance(s, j, i)

    def test_identity_of_internal_formula(self):
        s = random_sample_set(np.random.default_rng(0), 8, 4)
        kernel = SliceDistanceKernel(s)
        for i in range(8):
            assert not kernel._terms(i, np.array([i])).any()
            assert brute_force_distance(s.observations, i, i) == 0.0

    def test_errors(self):
        s = constant_samples(1, n=5)
        with pytest.raises(ContractError):
            estimate_distance(s, 2, 2)
        with pytest.raises(DomainError):
            estimate_distance(constant_samples(1, n=2), 0, 1)

    def test_may_be_negative(self):
        rng = np.random.default_rng(1)
        values = [estimate_distance(random_sample_set(rng, 6, 2), 0, 1) for _ in range(200)]
        assert min(values) < 0

    def test_masked_entries_count_as_zero(self):
        rng = np.random.default_rng(4)
        obs = rng.integers(0, 2, size=(2, 6, 6))
        masks = rng.integers(0, 2, size=(2, 6, 6))
        masked = GraphSampleSet(np.zeros(6), obs * masks, masks)
        plain = GraphSampleSet(np.zeros(6), obs * masks)
        assert estimate_distance(masked, 0, 3) == estimate_distance(plain, 0, 3)

    @pytest.mark.slow
    def test_unbiased_monte_carlo(self):
        rng = np.random.default_rng(20240601)
        vals = []
        for _ in range(2000):
            labels = sample_labels(100, rng)
            labels[0], labels[1] = 0.1, 0.3
            s = sample_graphs(W, labels, 2, True, rng)
            vals.append(estimate_distance(s, 0, 1))
        vals = np.asarray(vals)
        se = vals.std(ddof=1) / np.sqrt(vals.size)
        assert abs(vals.mean() - D12) < 3 * se


class TestNeighborhoodPolicy:
    def test_random_subset_of_everything_equals_full(self):
        s = random_sample_set(np.random.default_rng(2), 9, 2)
        policy = NeighborhoodPolicy.random_subset(7)
        for i, j in [(0, 1), (4, 8)]:
            assert estimate_distance(s, i, j, policy, 5) == pytest.approx(estimate_distance(s, i, j), abs=1e-15)

    def test_subset_matches_brute_force_on_some_subset(self):
        s = random_sample_set(np.random.default_rng(3), 7, 2)
        value = estimate_distance(s, 0, 1, NeighborhoodPolicy.random_subset(2), 11)
        from itertools import combinations

        candidates = {brute_force_distance(s.observations, 0, 1, list(ks)) for ks in combinations(range(2, 7), 2)}
        assert any(value == pytest.approx(c, abs=1e-15) for c in candidates)

    def test_deterministic_given_seed(self):
        s = random_sample_set(np.random.default_rng(3), 30, 2)
        p = NeighborhoodPolicy.random_subset(10)
        assert estimate_distance(s, 0, 1, p, 4) == estimate_distance(s, 0, 1, p, 4)

    def test_subset_too_large(self):
        with pytest.raises(DomainError):
            estimate_distance(constant_samples(1, n=5), 0, 1, NeighborhoodPolicy.random_subset(4), 0)

    def test_invalid_policy(self):
        with pytest.raises(DomainError):
            NeighborhoodPolicy("random", 0)
        with pytest.raises(DomainError):
            NeighborhoodPolicy("nearest")

    def test_subset_estimate_is_unbiased_for_full(self):
        s = random_sample_set(np.random.default_rng(9), 12, 2)
        rng = np.random.default_rng(0)
        p = NeighborhoodPolicy.random_subset(3)
        draws = np.array([estimate_distance(s, 0, 1, p, rng) for _ in range(4000)])
        se = draws.std(ddof=1) / np.sqrt(draws.size)
        assert abs(draws.mean() - estimate_distance(s, 0, 1)) < 4 * se


class TestExactDistance:
    def test_blocks_1_and_2(self):
        assert exact_distance(W, 0.1, 0.3) == pytest.approx(D12, abs=1e-15)
        assert exact_distance(W, 0.1, 0.3) == pytest.approx(0.13, abs=1e-15)

    def test_closed_form_agrees_with_quadrature(self):
        w = step_function(W.boundaries, W.probabilities.tolist())
        for ui, uj in [(0.1, 0.3), (0.05, 0.95), (0.6, 0.4)]:
            # 20000 panels put no midpoint on a block boundary
            assert exact_distance(W, ui, uj) == pytest.approx(quadrature_slice_distance(w, ui, uj), abs=1e-12)

    @pytest.mark.parametrize("u", [0.0, 0.37, 1.0])
    def test_identical_slices(self, u):
        for g in (W, FormulaGraphon("w1_logistic"), FormulaGraphon("w2_product")):
            assert exact_distance(g, u, u) == 0.0

    def test_constant_graphon(self):
        g = constant_graphon(0.3, 3)
        assert exact_distance(g, 0.1, 0.9) == 0.0

    def test_formula_against_closed_form(self):
        # w2 = uv: row and column parts are both (u_i - u_j)^2 / 3
        ui, uj = 0.2, 0.7
        assert exact_distance(FormulaGraphon("w2_product"), ui, uj) == pytest.approx((ui - uj) ** 2 / 3, rel=1e-6)

    def test_formula_against_scalar_quadrature(self):
        g = FormulaGraphon("w1_logistic")
        w = lambda x, y: 1.0 / (1.0 + np.exp(-50.0 * (x * x + y * y)))  # noqa: E731
        assert exact_distance(g, 0.0, 0.2) == pytest.approx(quadrature_slice_distance(w, 0.0, 0.2, 8000), rel=1e-5)

    @given(st.floats(0, 1), st.floats(0, 1), st.integers(0, 2**32))
    def test_nonnegative(self, ui, uj, seed):
        assert exact_distance(random_blockmodel(4, seed), ui, uj) >= 0.0
        assert quadrature_distance(FormulaGraphon("w1_logistic"), ui, uj, 64) >= 0.0

    def test_out_of_domain(self):
        with pytest.raises(DomainError):
            exact_distance(W, -0.1, 0.5)
