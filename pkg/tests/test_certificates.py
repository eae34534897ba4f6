import numpy as np
import pytest

from nashmatch.certificates import feasibility_certificate, pareto_check
from nashmatch.instances import (
    LinearInstance,
    NplcInstance,
    SplcInstance,
    TwoSidedInstance,
    utilities,
    validate_allocation,
)


class TestFeasibilityCertificate:
    def test_identity_with_disagreement(self):
        inst = LinearInstance(u=np.eye(2), c=np.full(2, 0.4))
        t, x, v = feasibility_certificate(inst)
        assert t == pytest.approx(0.6, abs=1e-8)
        np.testing.assert_allclose(x, np.eye(2), atol=1e-8)

    def test_fisher_always_positive(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            n = int(rng.integers(2, 6))
            u = rng.uniform(0, 3, size=(n, n))
            u[rng.uniform(size=(n, n)) < 0.5] = 0
            u += np.eye(n)  # guarantee positivity invariants
            inst = LinearInstance(u=u, c=np.zeros(n))
            t, x, v = feasibility_certificate(inst)
            assert t > 0
            assert validate_allocation(inst, x, 1e-7) == []
            np.testing.assert_allclose(v, utilities(inst, x), atol=1e-9)

    def test_infeasible_disagreement(self):
        # u row sums bound utilities by 2; c demands more than attainable
        inst = LinearInstance(u=np.array([[2.0, 2.0], [2.0, 2.0]]),
                              c=np.array([2.5, 0.0]))
        t, x, v = feasibility_certificate(inst)
        assert t <= 0

    def test_interior_dominates_worst_agent(self):
        rng = np.random.default_rng(5)
        n = 4
        u = rng.integers(1, 20, size=(n, n)).astype(float)
        c = np.min(u, axis=1) / 3
        inst = LinearInstance(u=u, c=c)
        t, x, v = feasibility_certificate(inst)
        assert np.all(v - c >= t - 1e-8)

    def test_two_sided(self):
        inst = TwoSidedInstance(u=np.array([[2.0, 1], [1, 2]]), w=np.eye(2) + 1)
        t, x, v = feasibility_certificate(inst)
        assert t > 0
        assert v.shape == (4,)

    def test_splc(self):
        inst = SplcInstance.from_segment_lists(
            [
                [[(3.0, 0.5), (1.0, 0.5)], [(2.0, 1.0)]],
                [[(2.0, 1.0)], [(4.0, 0.25), (1.0, 0.75)]],
            ],
            c=np.array([0.2, 0.2]),
        )
        t, x, v = feasibility_certificate(inst)
        assert t > 0
        assert validate_allocation(inst, x, 1e-7) == []

    def test_nplc(self):
        inst = NplcInstance.from_hyperplane_lists(
            [
                [(np.array([2.0, 0.5]), 0.0)],
                [(np.array([0.5, 2.0]), 0.0), (np.array([1.0, 1.0]), 0.3)],
            ],
            c=np.zeros(2),
        )
        t, x, v = feasibility_certificate(inst)
        assert t > 0
        np.testing.assert_allclose(v, utilities(inst, x), atol=1e-9)


class TestParetoCheck:
    def test_optimal_point_passes(self):
        inst = LinearInstance(u=np.array([[2.0, 1], [1, 2]]), c=np.zeros(2))
        assert pareto_check(inst, np.array([2.0, 2.0]))

    def test_dominated_point_fails(self):
        inst = LinearInstance(u=np.array([[2.0, 1], [1, 2]]), c=np.zeros(2))
        assert not pareto_check(inst, np.array([1.5, 1.5]))

    def test_single_agent(self):
        inst = LinearInstance(u=np.array([[5.0]]), c=np.zeros(1))
        assert pareto_check(inst, np.array([5.0]))

    def test_two_sided_front(self):
        inst = TwoSidedInstance(u=np.eye(2) + 1, w=np.eye(2) + 1)
        v = utilities(inst, np.eye(2))
        assert pareto_check(inst, v)

    def test_nplc_interior_point_fails(self):
        inst = NplcInstance.from_hyperplane_lists(
            [
                [(np.array([2.0, 0.0]), 0.0)],
                [(np.array([0.0, 2.0]), 0.0)],
            ],
            c=np.zeros(2),
        )
        # identity allocation gives (2, 2); half of it is dominated
        assert pareto_check(inst, np.array([2.0, 2.0]))
        assert not pareto_check(inst, np.array([1.0, 1.0]))
