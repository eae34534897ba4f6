import itertools

import numpy as np
import pytest
import scipy.optimize

from nashmatch.assignment import (
    BvnDegeneracyError,
    MatchingLottery,
    as_permutation,
    bvn_decompose,
    expected_utility_of_lottery,
    max_weight_perfect_matching,
    permutation_matrix,
)
from nashmatch.instances import LinearInstance, TwoSidedInstance, utilities


def brute_force_best(W):
    """Best value and lexicographically smallest argmax permutation."""
    n = W.shape[0]
    best_val, best_perm = -np.inf, None
    for perm in itertools.permutations(range(n)):
        val = sum(W[i, perm[i]] for i in range(n))
        if val > best_val + 1e-12:
            best_val, best_perm = val, perm
    return best_val, np.array(best_perm)


class TestMaxWeightMatching:
    def test_two_by_two(self):
        perm, value = max_weight_perfect_matching(np.array([[3.0, 1], [2, 4]]))
        np.testing.assert_array_equal(perm, [0, 1])
        assert value == pytest.approx(7.0)

    def test_identity_dominant(self):
        perm, value = max_weight_perfect_matching(np.eye(3))
        np.testing.assert_array_equal(perm, [0, 1, 2])
        assert value == pytest.approx(3.0)

    def test_all_zero_breaks_ties_lexicographically(self):
        perm, value = max_weight_perfect_matching(np.zeros((2, 2)))
        np.testing.assert_array_equal(perm, [0, 1])
        assert value == 0.0

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_value_matches_scipy_on_random(self, n):
        rng = np.random.default_rng(n)
        for _ in range(60):
            W = rng.normal(size=(n, n))
            perm, value = max_weight_perfect_matching(W)
            as_permutation(perm)
            ri, ci = scipy.optimize.linear_sum_assignment(-W)
            assert value == pytest.approx(W[ri, ci].sum(), abs=1e-9)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_lexicographic_tie_break_on_coarse_values(self, n):
        # small integer weights force many exact ties
        rng = np.random.default_rng(10 * n)
        for _ in range(40):
            W = rng.integers(0, 3, size=(n, n)).astype(float)
            perm, value = max_weight_perfect_matching(W)
            ref_val, ref_perm = brute_force_best(W)
            assert value == pytest.approx(ref_val, abs=1e-9)
            np.testing.assert_array_equal(perm, ref_perm)

    def test_many_random_small(self):
        rng = np.random.default_rng(99)
        for _ in range(200):
            n = int(rng.integers(2, 6))
            W = rng.choice([0.0, 0.5, 1.0, 2.0], size=(n, n))
            perm, value = max_weight_perfect_matching(W)
            ref_val, ref_perm = brute_force_best(W)
            assert value == pytest.approx(ref_val, abs=1e-9)
            np.testing.assert_array_equal(perm, ref_perm)


class TestBvn:
    def test_symmetric_two_by_two(self):
        lot = bvn_decompose(np.full((2, 2), 0.5))
        assert len(lot) == 2
        np.testing.assert_allclose(sorted(lot.weights), [0.5, 0.5])

    def test_integral_input(self):
        lot = bvn_decompose(np.eye(3))
        assert len(lot) == 1
        np.testing.assert_array_equal(lot.permutations[0], [0, 1, 2])
        assert lot.weights[0] == pytest.approx(1.0)

    def test_three_by_three_reconstructs(self):
        x = np.array([[0.7, 0.3, 0.0], [0.3, 0.4, 0.3], [0.0, 0.3, 0.7]])
        lot = bvn_decompose(x)
        assert len(lot) <= 3 * 3 - 2 * 3 + 2
        assert lot.weights.sum() == pytest.approx(1.0, abs=1e-9)
        np.testing.assert_allclose(lot.reconstruct(), x, atol=1e-8)

    @pytest.mark.parametrize("n", [2, 3, 5, 8, 13])
    def test_random_doubly_stochastic(self, n):
        rng = np.random.default_rng(n)
        for _ in range(10):
            k = int(rng.integers(1, 2 * n))
            weights = rng.dirichlet(np.ones(k))
            x = np.zeros((n, n))
            for w in weights:
                perm = rng.permutation(n)
                x[np.arange(n), perm] += w
            lot = bvn_decompose(x)
            assert len(lot) <= n * n - 2 * n + 2
            assert lot.weights.sum() == pytest.approx(1.0, abs=1e-9)
            np.testing.assert_allclose(lot.reconstruct(), x, atol=1e-8)
            assert np.all(lot.weights > 0)

    def test_degenerate_input_raises(self):
        x = np.array([[0.5, 0.5], [0.5, 0.5]])
        x[0, 0] = 0.9  # not doubly stochastic; support vanishes oddly
        x = np.array([[1.0, 0.0], [1.0, 0.0]])
        with pytest.raises(BvnDegeneracyError):
            bvn_decompose(x)

    def test_sampling_is_seeded(self):
        lot = bvn_decompose(np.full((3, 3), 1 / 3))
        a = lot.sample(np.random.default_rng(5), size=4)
        b = lot.sample(np.random.default_rng(5), size=4)
        np.testing.assert_array_equal(a, b)


class TestExpectedUtility:
    def test_average_of_two(self):
        inst = LinearInstance(u=np.array([[2.0, 1], [1, 2]]), c=np.zeros(2))
        lot = MatchingLottery(
            permutations=np.array([[0, 1], [1, 0]]), weights=np.array([0.5, 0.5])
        )
        np.testing.assert_allclose(
            expected_utility_of_lottery(inst, lot), [1.5, 1.5]
        )

    def test_single_atom_is_diagonal(self):
        u = np.array([[2.0, 1], [1, 2]])
        inst = LinearInstance(u=u, c=np.zeros(2))
        lot = MatchingLottery(
            permutations=np.array([[0, 1]]), weights=np.array([1.0])
        )
        np.testing.assert_allclose(expected_utility_of_lottery(inst, lot), [2, 2])

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_matches_fractional_utilities(self, seed):
        rng = np.random.default_rng(seed)
        n = 5
        u = rng.uniform(0.5, 3, size=(n, n))
        inst = LinearInstance(u=u, c=np.zeros(n))
        x = np.zeros((n, n))
        for w in rng.dirichlet(np.ones(4)):
            perm = rng.permutation(n)
            x[np.arange(n), perm] += w
        lot = bvn_decompose(x)
        np.testing.assert_allclose(
            expected_utility_of_lottery(inst, lot), utilities(inst, x), atol=1e-8
        )

    def test_two_sided_expectation(self):
        rng = np.random.default_rng(3)
        n = 4
        inst = TwoSidedInstance(
            u=rng.uniform(0.5, 2, (n, n)), w=rng.uniform(0.5, 2, (n, n))
        )
        x = np.full((n, n), 1 / n)
        lot = bvn_decompose(x)
        np.testing.assert_allclose(
            expected_utility_of_lottery(inst, lot), utilities(inst, x), atol=1e-8
        )
