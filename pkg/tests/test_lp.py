import numpy as np
import pytest
import scipy.optimize
import scipy.sparse as sp

from nashmatch.lp import (
    LinearProgram,
    LpStatus,
    SimplexContext,
    add_row_resolve,
    solve,
)


def make_lp(objective, rows, relations, rhs, lower=None, upper=None):
    objective = np.asarray(objective, dtype=float)
    nv = objective.size
    if lower is None:
        lower = np.zeros(nv)
    if upper is None:
        upper = np.full(nv, np.inf)
    return LinearProgram(
        objective=objective,
        rows=np.asarray(rows, dtype=float).reshape(-1, nv),
        relations=np.asarray(relations),
        rhs=np.asarray(rhs, dtype=float),
        lower=np.asarray(lower, dtype=float),
        upper=np.asarray(upper, dtype=float),
    )


def scipy_reference(lp):
    """Solve the same LP with HiGHS (independent oracle)."""
    m = lp.nrows
    A = lp.rows.toarray() if m else np.zeros((0, lp.nvars))
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for i in range(m):
        if lp.relations[i] == "<":
            A_ub.append(A[i])
            b_ub.append(lp.rhs[i])
        elif lp.relations[i] == ">":
            A_ub.append(-A[i])
            b_ub.append(-lp.rhs[i])
        else:
            A_eq.append(A[i])
            b_eq.append(lp.rhs[i])
    res = scipy.optimize.linprog(
        -lp.objective,
        A_ub=np.array(A_ub) if A_ub else None,
        b_ub=np.array(b_ub) if b_ub else None,
        A_eq=np.array(A_eq) if A_eq else None,
        b_eq=np.array(b_eq) if b_eq else None,
        bounds=list(zip(lp.lower, lp.upper)),
        method="highs",
    )
    return res


class TestBasics:
    def test_single_constraint(self):
        lp = make_lp([1, 1], [[1, 1]], ["<"], [1])
        sol = solve(lp)
        assert sol.status is LpStatus.OPTIMAL
        assert sol.objective == pytest.approx(1.0)

    def test_infeasible(self):
        lp = make_lp([1], [[1], [1]], [">", "<"], [2, 1])
        assert solve(lp).status is LpStatus.INFEASIBLE

    def test_unbounded(self):
        lp = make_lp([1], [[1]], [">"], [0])
        assert solve(lp).status is LpStatus.UNBOUNDED

    def test_equality_rows(self):
        lp = make_lp([3, 2], [[1, 1], [1, -1]], ["=", "="], [4, 2])
        sol = solve(lp)
        assert sol.status is LpStatus.OPTIMAL
        np.testing.assert_allclose(sol.x, [3, 1], atol=1e-9)

    def test_upper_bounds_respected(self):
        lp = make_lp([1, 1], [[1, 1]], ["<"], [10], upper=[2, 3])
        sol = solve(lp)
        assert sol.objective == pytest.approx(5.0)

    def test_free_variable(self):
        lp = make_lp(
            [1, 0],
            [[1, 1], [1, -1]],
            ["<", "<"],
            [1, 1],
            lower=[-np.inf, 0],
            upper=[np.inf, np.inf],
        )
        sol = solve(lp)
        assert sol.status is LpStatus.OPTIMAL
        assert sol.objective == pytest.approx(1.0)

    def test_no_rows(self):
        lp = make_lp([1, -1], np.zeros((0, 2)), [], [], upper=[4, 5])
        sol = solve(lp)
        assert sol.objective == pytest.approx(4.0)


def random_lp(rng, nv=None, m=None):
    nv = nv or rng.integers(2, 12)
    m = m or rng.integers(1, 10)
    objective = rng.normal(size=nv)
    rows = rng.normal(size=(m, nv))
    rows[rng.uniform(size=(m, nv)) < 0.3] = 0.0
    relations = rng.choice(list("<=>"), size=m, p=[0.5, 0.2, 0.3])
    x0 = rng.uniform(0, 1, size=nv)  # keep a feasible point around
    slack = rng.uniform(0.0, 1.0, size=m)
    rhs = rows @ x0
    rhs[relations == "<"] += slack[relations == "<"]
    rhs[relations == ">"] -= slack[relations == ">"]
    upper = np.where(rng.uniform(size=nv) < 0.7, rng.uniform(1, 3, size=nv), np.inf)
    return make_lp(objective, rows, relations, rhs, upper=upper)


class TestAgainstHiGHS:
    @pytest.mark.parametrize("seed", range(40))
    def test_random_lps(self, seed):
        rng = np.random.default_rng(seed)
        lp = random_lp(rng)
        sol = solve(lp)
        ref = scipy_reference(lp)
        if ref.status == 0:
            assert sol.status is LpStatus.OPTIMAL
            assert sol.objective == pytest.approx(-ref.fun, abs=1e-7, rel=1e-7)
        elif ref.status == 2:
            assert sol.status is LpStatus.INFEASIBLE
        elif ref.status == 3:
            assert sol.status is LpStatus.UNBOUNDED

    @pytest.mark.parametrize("seed", range(10))
    def test_solution_is_feasible_and_complementary(self, seed):
        rng = np.random.default_rng(100 + seed)
        lp = random_lp(rng)
        sol = solve(lp)
        if sol.status is not LpStatus.OPTIMAL:
            pytest.skip("needs an optimal instance")
        ax = lp.rows @ sol.x
        scale = 1.0 + np.max(np.abs(lp.rhs), initial=0.0)
        for i in range(lp.nrows):
            if lp.relations[i] == "<":
                assert ax[i] <= lp.rhs[i] + 1e-9 * scale
            elif lp.relations[i] == ">":
                assert ax[i] >= lp.rhs[i] - 1e-9 * scale
            else:
                assert ax[i] == pytest.approx(lp.rhs[i], abs=1e-9 * scale)
        assert np.all(sol.x >= lp.lower - 1e-9 * scale)
        assert np.all(sol.x <= lp.upper + 1e-9 * scale)
        # complementary slackness: y_i * slack_i ~ 0
        slack = lp.rhs - ax
        assert np.max(np.abs(sol.duals * slack), initial=0.0) <= 1e-8 * (1 + scale)


class TestWarmRestart:
    def test_binding_cut(self):
        lp = make_lp([1, 1], [[1, 1]], ["<"], [1])
        ctx = SimplexContext(lp)
        first = ctx.solve()
        assert first.objective == pytest.approx(1.0)
        sol = ctx.add_row_resolve(np.array([1.0, 1.0]), "<", 0.5)
        assert sol.objective == pytest.approx(0.5)

    def test_redundant_cut_keeps_solution(self):
        lp = make_lp([1, 1], [[1, 1]], ["<"], [1])
        ctx = SimplexContext(lp)
        first = ctx.solve()
        before = len(first.pivots)
        sol = ctx.add_row_resolve(np.array([1.0, 1.0]), "<", 2.0)
        assert sol.objective == pytest.approx(1.0)
        assert len(sol.pivots) == before  # zero extra pivots

    def test_partial_cut(self):
        lp = make_lp([1, 1], [[1, 1]], ["<"], [1])
        ctx = SimplexContext(lp)
        ctx.solve()
        sol = ctx.add_row_resolve(np.array([1.0, 0.0]), "<", 0.3)
        assert sol.objective == pytest.approx(1.0)
        assert sol.x[0] <= 0.3 + 1e-9

    def test_cut_to_infeasibility(self):
        lp = make_lp([1], [[1]], ["<"], [1])
        ctx = SimplexContext(lp)
        ctx.solve()
        sol = ctx.add_row_resolve(np.array([1.0]), ">", 2.0)
        assert sol.status is LpStatus.INFEASIBLE

    def test_standalone_add_row_resolve(self):
        lp = make_lp([2, 1], [[1, 1]], ["<"], [1])
        prev = solve(lp)
        sol = add_row_resolve(lp, prev, np.array([1.0, 0.0]), "<", 0.25)
        ref = solve(lp.with_extra_row(np.array([1.0, 0.0]), "<", 0.25))
        assert sol.status == ref.status
        assert sol.objective == pytest.approx(ref.objective, abs=1e-9)

    @pytest.mark.parametrize("seed", range(25))
    def test_matches_scratch_on_random_augmentations(self, seed):
        rng = np.random.default_rng(1000 + seed)
        lp = random_lp(rng, nv=int(rng.integers(3, 20)), m=int(rng.integers(2, 12)))
        ctx = SimplexContext(lp)
        base = ctx.solve()
        if base.status is not LpStatus.OPTIMAL:
            pytest.skip("base LP not optimal")
        for _ in range(4):
            coefs = rng.normal(size=lp.nvars)
            rel = rng.choice(["<", ">"])
            anchor = coefs @ base.x
            rhs = anchor + (rng.uniform(-0.5, 1.0) if rel == "<" else rng.uniform(-1.0, 0.5))
            lp = lp.with_extra_row(coefs, rel, rhs)
            sol = ctx.add_row_resolve(coefs, rel, rhs)
            ref = solve(lp)
            assert sol.status == ref.status
            if sol.status is LpStatus.OPTIMAL:
                assert sol.objective == pytest.approx(ref.objective, abs=1e-8, rel=1e-9)
                base = sol
            else:
                break


class TestDeterminism:
    def test_identical_pivot_sequences(self):
        rng = np.random.default_rng(7)
        lp = random_lp(rng, nv=15, m=8)
        a = solve(lp)
        b = solve(lp)
        assert a.pivots == b.pivots
        np.testing.assert_array_equal(a.x, b.x)
